from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Optional

from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from ncavity.BoundaryLifting import BoundaryLifting
from ncavity.Diagnostics import Diagnostics, DiagnosticsReport
from ncavity.PicardSolver import PicardConfig, PicardSolver, SolveReport
from ncavity.PressureField import PressureField
from ncavity.UniformMesh import UniformMesh
from ncavity.VelocityField import VelocityField
from ncavity.constants.InitialGuess import InitialGuess
from ncavity.constants.ReferenceTable import ReferenceTable
from ncavity.utils.ResultWriter import ResultWriter, case_tag


class CavitySolution:
    def __init__(
        self,
        re: float,
        mesh: UniformMesh,
        lifting: BoundaryLifting,
        velocity: VelocityField,
        pressure: PressureField,
        report: SolveReport,
        quadrature_points: int = 6,
    ) -> None:
        self.re = re
        self.mesh = mesh
        self.lifting = lifting
        self.velocity = velocity
        self.pressure = pressure
        self.report = report
        self.diagnostics = Diagnostics(velocity, pressure, quadrature_points)
        self.__report = None

    def __str__(self) -> str:
        return f"Cavity solution Re={self.re:g} N={self.mesh.n}\n    {self.report}"

    def diagnose(self, profiles: bool = True) -> DiagnosticsReport:
        if self.__report is None or (profiles and self.__report.u_profile is None):
            self.__report = self.diagnostics.diagnose(profiles=profiles)
        return self.__report


class Cavity:
    def __init__(self, config: dict = None, log: bool = False) -> None:
        """
        Entry point for lid-driven cavity solves
        :param config: Optional settings
        Example:
        config = {"out_dir": "/tmp/ncavity", "quadrature_points": 6, "ell": 1}

        If no output directory is configured the environment variable 'NCAVITY_OUT_DIR' is used, and the
        system temp directory otherwise

        :param log: Whether the progress of any given operation should be logged to console
        """
        if config is None:
            config = {}

        load_dotenv()
        self.config = config
        self.quadrature_points = int(config.get("quadrature_points", 6))
        self.ell = int(config.get("ell", 1))
        self.console = Console(stderr=True)
        self.__log = log

        # Instantiate result writer, it owns the output directory
        self.writer = ResultWriter(config=config)

        self._log("[bold reverse blue] ncavity [/bold reverse blue] lid-driven cavity")

    @property
    def log(self):
        return self.__log

    @log.setter
    def log(self, log: bool):
        self.__log = log

    def _log(self, message: str, force=False, rule=False) -> None:
        if not self.log and not force:
            return None
        else:
            if not rule:
                self.console.print(message)
            if rule:
                self.console.rule(message)

    def solve(
        self,
        re: float,
        n: int,
        tol_rel: float = 1e-10,
        max_iters: int = 200,
        continuation: Optional[bool] = None,
        continuation_schedule: List[float] = None,
        initial_guess: InitialGuess = InitialGuess.STOKES,
    ) -> CavitySolution:
        """
        Solves the cavity problem at Reynolds number `re` on an n x n mesh
        :param continuation: None engages the default schedule above Re=1000, False disables it
        """
        picard_config = PicardConfig(
            re=re,
            tol_rel=tol_rel,
            max_iters=max_iters,
            continuation=continuation,
            continuation_schedule=continuation_schedule,
            initial_guess=initial_guess,
        )
        mesh = UniformMesh(n)
        lifting = BoundaryLifting(mesh, ell=self.ell)
        solver = PicardSolver(
            mesh,
            lifting,
            config={"quadrature_points": self.quadrature_points},
            log=self.log,
        )
        self._log(f"[bold blue]Solving Re={re:g} on {n}x{n}", rule=True)
        velocity, pressure, report = solver.picard_solve(picard_config)
        return CavitySolution(
            re, mesh, lifting, velocity, pressure, report, self.quadrature_points
        )

    def pretty_diagnostics(self, solution: CavitySolution) -> None:
        """
        Prints the accuracy indicators of a solution nicely to console
        """
        report = solution.diagnose(profiles=False)
        table = Table(title=f"Re={solution.re:g}  N={solution.mesh.n}")

        table.add_column("Indicator", justify="right", style="magenta", no_wrap=True)
        table.add_column("Value", style="cyan")

        table.add_row("Picard iterations", str(solution.report.iterations))
        table.add_row("Q_u(0.5)", f"{report.flow_rate_u:.4e}")
        table.add_row("Q_v(0.5)", f"{report.flow_rate_v:.4e}")
        for name, value in report.offset_flow_rates.items():
            table.add_row(name.replace("flow_rate_", "Q_"), f"{value:.4e}")
        table.add_row("|int omega + 1|", f"{abs(report.vorticity_integral + 1.0):.4e}")
        table.add_row("max |int div u|", f"{report.max_cell_divergence:.4e}")
        table.add_row("h^3", f"{solution.mesh.h ** 3:.4e}")
        table.add_row("psi_min", f"{report.primary_vortex.psi:.6f}")
        table.add_row(
            "primary vortex",
            f"({report.primary_vortex.x:.4f}, {report.primary_vortex.y:.4f})",
        )

        self._log(table, True)

    def save(self, solution: CavitySolution, contours: bool = False, profiles: bool = True) -> Dict[str, Path]:
        """
        Writes the solution coefficients, the diagnostics report and optionally the contour grids
        :return: Artifact name -> file path
        """
        tag = case_tag(solution.re, solution.mesh.n)
        report = solution.diagnose(profiles=profiles)
        paths = {
            "solution": self.writer.path(f"solution_{tag}.csv"),
            "pressure": self.writer.path(f"pressure_{tag}.csv"),
        }
        solution.velocity.to_csv(paths["solution"])
        solution.pressure.to_csv(paths["pressure"])

        summary = report.to_dict()
        summary["re"] = solution.re
        summary["solve"] = solution.report.to_dict()
        paths["diagnostics"] = self.writer.write_json(f"diagnostics_{tag}.json", summary)

        if contours:
            centers = solution.mesh.cell_centers
            paths["psi"] = self.writer.write_grid(
                f"psi_{tag}.csv", centers[:, 0], centers[:, 1], report.psi_centers
            )
            paths["omega"] = self.writer.write_grid(
                f"omega_{tag}.csv", centers[:, 0], centers[:, 1], report.omega_centers
            )
            paths["contours"] = self.writer.write_json(
                f"contours_{tag}.json",
                {
                    "levels": ReferenceTable.contour_levels(),
                    "psi": paths["psi"].name,
                    "omega": paths["omega"].name,
                },
            )

        self._log(f"[green]Artifacts for {tag} written to {self.writer.out_dir}")
        return paths
