from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from dotenv import dotenv_values, load_dotenv
from pathos.pools import ProcessPool as PPool
from rich.console import Console
from rich.progress import (
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TimeRemainingColumn,
)
from rich.table import Table

from ncavity.Cavity import Cavity
from ncavity.PressureField import PressureField
from ncavity.UniformMesh import UniformMesh
from ncavity.VelocityField import VelocityField
from ncavity.constants.OutputFormat import OutputFormat
from ncavity.constants.ReferenceTable import (
    KNOWN_MISPRINTS,
    ReferenceTable,
    ReferenceValue,
)
from ncavity.exceptions.InvalidMeshSizeError import InvalidMeshSizeError
from ncavity.exceptions.InvalidParameterError import InvalidParameterError
from ncavity.utils.ResultWriter import ResultWriter, case_tag

PASS = "PASS"
FAIL = "FAIL"
NOT_AVAILABLE = "N/A"
INFO = "INFO"

# Reference solutions below this mesh size are not expected to match to table accuracy
GATING_MESH = 256
# Rows above this Reynolds number are extended, non-gating checks
GATING_RE = 1000.0

SUMMARY_COLUMNS = (
    "re",
    "n",
    "quantity",
    "computed",
    "reference",
    "reference_table",
    "reference_column",
    "abs_error",
    "rel_error",
    "criterion",
    "tolerance",
    "status",
)


@dataclass
class RunConfig:
    re: List[float] = field(default_factory=lambda: [100.0])
    n: List[int] = field(default_factory=lambda: [64])
    tol: float = 1e-10
    max_iters: int = 200
    continuation: Optional[bool] = None
    profiles: bool = False
    contours: bool = False
    indicators: bool = False
    check_dof: bool = False
    out_dir: Optional[str] = None
    output_format: OutputFormat = OutputFormat.CSV
    verbose: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        self.re = [float(r) for r in self.re]
        self.n = [int(n) for n in self.n]
        if any(not r > 0.0 for r in self.re):
            raise InvalidParameterError(message=f"All Reynolds numbers must be positive, got {self.re}.")
        if any(n < 2 or n % 2 != 0 for n in self.n):
            raise InvalidMeshSizeError(message=f"All mesh sizes must be even integers >= 2, got {self.n}.")
        if not self.tol > 0.0:
            raise InvalidParameterError(message=f"The tolerance must be positive, got {self.tol}.")
        if int(self.workers) < 1:
            raise InvalidParameterError(message=f"workers must be >= 1, got {self.workers}.")
        self.output_format = OutputFormat(self.output_format)


def _solve_case(payload: dict) -> dict:
    """
    Solves, diagnoses and saves one (Re, N) case. Runs in a worker process when pooled.
    """
    re, n = payload["re"], payload["n"]
    result = {"re": re, "n": n, "ok": False, "error": None, "diagnostics": None}
    try:
        cavity = Cavity(config={"out_dir": payload["out_dir"]}, log=payload["log"])
        solution = cavity.solve(
            re,
            n,
            tol_rel=payload["tol"],
            max_iters=payload["max_iters"],
            continuation=payload["continuation"],
        )
        cavity.save(solution, contours=payload["contours"], profiles=payload["profiles"])
        diagnostics = solution.diagnose(profiles=payload["profiles"]).to_dict()
        diagnostics["iterations"] = solution.report.iterations
        result["diagnostics"] = diagnostics
        result["ok"] = True
    except Exception as e:
        result["error"] = f"{type(e).__name__}: {e}"
    return result


class Benchmark:
    def __init__(self, run_config: RunConfig, log: bool = None) -> None:
        self.run_config = run_config
        self.writer = ResultWriter(config={"out_dir": run_config.out_dir})
        self.console = Console(stderr=True)
        self.__log = run_config.verbose if log is None else log

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

    @staticmethod
    def compare_value(
        re: float,
        n: int,
        quantity: str,
        computed: Optional[float],
        reference: ReferenceValue,
        tolerance: float,
        criterion: str = "rel",
        gating: bool = True,
    ) -> dict:
        """
        Aligns one computed quantity with its reference value
        :param criterion: "rel" (relative error), "abs" (absolute error) or "bound" (|computed| <= tolerance)
        :param gating: Non-gating rows are reported with status INFO
        """
        assert criterion in ("rel", "abs", "bound"), "UNKNOWN_CRITERION"
        row = {
            "re": re,
            "n": n,
            "quantity": quantity,
            "computed": computed,
            "reference": reference.value,
            "reference_table": reference.table,
            "reference_column": reference.column,
            "abs_error": None,
            "rel_error": None,
            "criterion": criterion,
            "tolerance": tolerance,
            "status": NOT_AVAILABLE,
        }
        if computed is None or reference.value is None:
            return row

        abs_error = abs(computed - reference.value)
        rel_error = abs_error / abs(reference.value) if reference.value != 0.0 else abs_error
        row["abs_error"] = abs_error
        row["rel_error"] = rel_error

        measured = {"rel": rel_error, "abs": abs_error, "bound": abs(computed)}[criterion]
        misprint = (reference.table, n, quantity) in KNOWN_MISPRINTS or (
            reference.table,
            quantity,
            reference.column,
        ) in KNOWN_MISPRINTS
        if not gating or misprint:
            row["status"] = INFO
        else:
            row["status"] = PASS if measured <= tolerance else FAIL
        return row

    def check_dof(self, n: int) -> List[dict]:
        mesh = UniformMesh(n)
        velocity_dofs = VelocityField(mesh).dof_count
        pressure_dofs = PressureField(mesh).dof_count
        counts = ReferenceTable.dof_counts(n) or (None, None)
        rows = [
            self.compare_value(
                None,
                n,
                "velocity_dofs",
                velocity_dofs,
                ReferenceValue("velocity_dofs", counts[0], ReferenceTable.DOF_TABLE, "nc"),
                0.0,
                criterion="abs",
            ),
            self.compare_value(
                None,
                n,
                "pressure_dofs",
                pressure_dofs,
                ReferenceValue("pressure_dofs", counts[1], ReferenceTable.DOF_TABLE, "nc"),
                0.0,
                criterion="abs",
            ),
        ]
        statuses = [r["status"] for r in rows]
        status = PASS
        for candidate in (FAIL, INFO):
            if candidate in statuses:
                status = candidate
                break
        if all(s == NOT_AVAILABLE for s in statuses):
            status = NOT_AVAILABLE
        self._log(f"N={n}: {velocity_dofs}/{pressure_dofs} {status}", force=True)
        return rows

    def compare(self, diagnostics: dict, re: float, n: int) -> List[dict]:
        """
        Per-quantity comparison of one diagnostics report with the embedded reference tables
        """
        rows = []
        h = 1.0 / n
        fine = n >= GATING_MESH
        in_range = re <= GATING_RE

        if self.run_config.indicators:
            exact = ReferenceTable.incompressibility(re)
            rows.append(
                self.compare_value(
                    re, n, "divergence_law_defect", diagnostics["divergence_law_defect"],
                    ReferenceValue("divergence_law_defect", 0.0, "divergence_law", "exact"),
                    1e-11 * h ** 3 + 1e-13, criterion="bound",
                )
            )
            rows.append(
                self.compare_value(
                    re, n, "max_cell_divergence", diagnostics["max_cell_divergence"],
                    ReferenceValue("max_cell_divergence", h ** 3, "divergence_law", "h^3"),
                    1e-8,
                )
            )
            rows.append(
                self.compare_value(
                    re, n, "max_cell_divergence", diagnostics["max_cell_divergence"],
                    exact["max_cell_divergence"], 1e-4, gating=n == GATING_MESH,
                )
            )
            rows.append(
                self.compare_value(
                    re, n, "vorticity_integral", diagnostics["vorticity_integral"],
                    ReferenceValue("vorticity_integral", -1.0, "compatibility", "exact"),
                    1e-10, criterion="abs",
                )
            )
            rates = ReferenceTable.flow_rates(re)
            for key, quantity in (("q_u", "flow_rate_u"), ("q_v", "flow_rate_v")):
                reference = rates[key]
                if reference.value is None:
                    reference = ReferenceValue(reference.quantity, 0.0, reference.table, "exact")
                rows.append(
                    self.compare_value(
                        re, n, quantity, diagnostics[quantity], reference, 1e-10, criterion="bound"
                    )
                )
            # Reported alongside the centre lines, never gating
            for quantity, value in diagnostics.get("offset_flow_rates", {}).items():
                reference = ReferenceValue(quantity, 0.0, ReferenceTable.FLOW_RATE_TABLE, "exact")
                rows.append(
                    self.compare_value(re, n, quantity, value, reference, 1e-10, criterion="bound", gating=False)
                )

        primary = diagnostics["primary_vortex"]
        reference = ReferenceTable.primary_vortex(re)
        gating = fine and in_range
        rows.append(self.compare_value(re, n, "psi_min", primary["psi"], reference["psi_min"], 5e-4, "abs", gating))
        rows.append(self.compare_value(re, n, "omega", abs(primary["omega"]), reference["omega"], 0.02, "rel", gating))
        rows.append(self.compare_value(re, n, "vortex_x", primary["x"], reference["x"], h, "abs", gating))
        rows.append(self.compare_value(re, n, "vortex_y", primary["y"], reference["y"], h, "abs", gating))

        ghia = ReferenceTable.primary_vortex(re, source="ghia")
        rows.append(self.compare_value(re, n, "psi_min", primary["psi"], ghia["psi_min"], 0.01, "rel", False))

        for region, record in diagnostics["secondary_vortices"].items():
            reference = ReferenceTable.secondary_vortex(re, region)
            rows.append(
                self.compare_value(
                    re, n, f"{region}.psi_max", record["psi"], reference["psi_max"], 0.05, "rel", False
                )
            )

        if self.run_config.profiles and diagnostics.get("u_profile") and abs(re - 1000.0) < 1e-9:
            rows.extend(self._compare_profiles(diagnostics, re, n, fine))

        return rows

    def _compare_profiles(self, diagnostics: dict, re: float, n: int, fine: bool) -> List[dict]:
        rows = []
        u_values = {round(s, 4): v for s, v in diagnostics["u_profile"]}
        v_values = {round(s, 4): v for s, v in diagnostics["v_profile"]}
        profiles = (
            ("u", ReferenceTable.u_stations(), u_values, ReferenceTable.u_profile),
            ("v", ReferenceTable.v_stations(), v_values, ReferenceTable.v_profile),
        )
        for name, stations, values, lookup in profiles:
            for station in stations:
                computed = values.get(round(station, 4))
                quantity = f"{name}({station:.4f})"
                for column in ("botella_peyret", "bruneau_saad", "nc_256"):
                    rows.append(
                        self.compare_value(
                            re, n, quantity, computed, lookup(station, column), 0.01, "rel",
                            gating=fine and column == "botella_peyret",
                        )
                    )
        return rows

    def _profile_rows(self, diagnostics: dict) -> List[dict]:
        rows = []
        for axis, key, lookup in (
            ("u(0.5,y)", "u_profile", ReferenceTable.u_profile),
            ("v(x,0.5)", "v_profile", ReferenceTable.v_profile),
        ):
            for station, value in diagnostics[key]:
                rows.append(
                    {
                        "profile": axis,
                        "station": station,
                        "computed": value,
                        "botella_peyret": lookup(station, "botella_peyret").value,
                        "nc_256": lookup(station, "nc_256").value,
                        "nc_512": lookup(station, "nc_512").value,
                    }
                )
        return rows

    def _payloads(self) -> List[dict]:
        cfg = self.run_config
        return [
            {
                "re": re,
                "n": n,
                "tol": cfg.tol,
                "max_iters": cfg.max_iters,
                "continuation": cfg.continuation,
                "profiles": cfg.profiles,
                "contours": cfg.contours,
                "out_dir": str(self.writer.out_dir),
                "log": self.log and cfg.workers == 1,
            }
            for re in cfg.re
            for n in cfg.n
        ]

    def _execute(self, payloads: List[dict]) -> List[dict]:
        if len(payloads) == 0:
            return []

        workers = min(self.run_config.workers, len(payloads))
        results = []
        progress_columns = (
            SpinnerColumn(),
            *Progress.get_default_columns(),
            TimeRemainingColumn(elapsed_when_finished=True),
            MofNCompleteColumn(),
        )

        if workers == 1:
            with Progress(*progress_columns, console=self.console, disable=not self.log) as progress:
                task = progress.add_task("[bold reverse green] Solving  ", total=len(payloads))
                for payload in payloads:
                    results.append(_solve_case(payload))
                    progress.update(task, advance=1)
            return results

        with PPool(nodes=workers) as pool:
            pooled = pool.imap(_solve_case, payloads)
            with Progress(*progress_columns, console=self.console, disable=not self.log) as progress:
                task = progress.add_task("[bold reverse green] Solving  ", total=len(payloads))
                for result in pooled:
                    results.append(result)
                    progress.update(task, advance=1)
        return results

    def run(self) -> int:
        """
        Runs every configured case and writes the artifacts
        :return: Exit status, 0 iff every solve succeeded and no requested check failed
        """
        cfg = self.run_config
        rows = []
        failed = False

        if cfg.check_dof:
            self._log("[bold blue]Degrees of freedom", rule=True, force=True)
            for n in cfg.n:
                rows.extend(self.check_dof(n))

        for result in self._execute(self._payloads()):
            re, n = result["re"], result["n"]
            if not result["ok"]:
                failed = True
                self._log(f"[bold red]Re={re:g} N={n} failed: {result['error']}", force=True)
                continue
            diagnostics = result["diagnostics"]
            rows.extend(self.compare(diagnostics, re, n))
            if cfg.profiles and diagnostics.get("u_profile"):
                self.writer.write_table(
                    f"profiles_{case_tag(re, n)}", self._profile_rows(diagnostics), cfg.output_format
                )

        if rows:
            self.writer.write_table("summary", [{c: r[c] for c in SUMMARY_COLUMNS} for r in rows], cfg.output_format)
            self.pretty_summary(rows)

        if any(r["status"] == FAIL for r in rows):
            failed = True
        return 1 if failed else 0

    def pretty_summary(self, rows: List[dict]) -> None:
        """
        Prints the comparison rows nicely to console
        """
        table = Table(title="ncavity summary")

        table.add_column("Re", justify="right", style="magenta", no_wrap=True)
        table.add_column("N", justify="right", style="magenta")
        table.add_column("Quantity", style="cyan")
        table.add_column("Computed", justify="right")
        table.add_column("Reference", justify="right")
        table.add_column("Table", style="dim")
        table.add_column("Error", justify="right")
        table.add_column("Status")

        colors = {PASS: "green", FAIL: "bold red", INFO: "blue", NOT_AVAILABLE: "dim"}

        def __fmt(value):
            if value is None:
                return "-"
            if isinstance(value, float):
                return f"{value:.6g}"
            return str(value)

        for row in rows:
            error = row["rel_error"] if row["criterion"] == "rel" else row["abs_error"]
            table.add_row(
                __fmt(row["re"]),
                __fmt(row["n"]),
                row["quantity"],
                __fmt(row["computed"]),
                __fmt(row["reference"]),
                f"{row['reference_table']}:{row['reference_column']}",
                __fmt(error),
                f"[{colors[row['status']]}]{row['status']}",
            )

        self._log(table, force=True)

    @staticmethod
    def read_config_file(path: str) -> Dict[str, object]:
        """
        Reads KEY=VALUE lines whose keys mirror the long flags, e.g. RE=100,1000 or MAX_ITERS=200
        """
        converters = {
            "RE": ("re", _float_list),
            "N": ("n", _int_list),
            "TOL": ("tol", float),
            "MAX_ITERS": ("max_iters", int),
            "CONTINUATION": ("continuation", _optional_bool),
            "PROFILES": ("profiles", _bool),
            "CONTOURS": ("contours", _bool),
            "INDICATORS": ("indicators", _bool),
            "CHECK_DOF": ("check_dof", _bool),
            "OUT": ("out", str),
            "FORMAT": ("format", str),
            "VERBOSE": ("verbose", _bool),
            "WORKERS": ("workers", int),
        }
        defaults = {}
        for key, value in dotenv_values(path).items():
            if value is None:
                continue
            if key.upper() not in converters:
                raise InvalidParameterError(message=f"Unknown key {key!r} in config file {path}.")
            name, convert = converters[key.upper()]
            defaults[name] = convert(value)
        return defaults

    @staticmethod
    def build_parser() -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="ncavity-bench",
            description="Lid-driven cavity benchmark for the nonconforming P1 x checkerboard-free P0 pair",
        )
        parser.add_argument("--config", default=None, help="KEY=VALUE file mirroring the flags")
        parser.add_argument("--re", type=_float_list, default=None, help="Reynolds numbers, e.g. 100,1000")
        parser.add_argument("--n", type=_int_list, default=[64], help="Cells per side, e.g. 64,128")
        parser.add_argument("--tol", type=float, default=1e-10)
        parser.add_argument("--max-iters", dest="max_iters", type=int, default=200)
        parser.add_argument(
            "--continuation",
            type=_optional_bool,
            default=None,
            help="on, off or auto (default: auto, engaged above Re=1000)",
        )
        parser.add_argument("--profiles", action="store_true", default=False)
        parser.add_argument("--contours", action="store_true", default=False)
        parser.add_argument("--indicators", action="store_true", default=False)
        parser.add_argument("--check-dof", dest="check_dof", action="store_true", default=False)
        parser.add_argument("--out", default=None, help="Output directory")
        parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)
        parser.add_argument("--workers", type=int, default=1, help="Worker processes for the (Re, N) cases")
        parser.add_argument("--verbose", action="store_true", default=False)
        return parser

    @staticmethod
    def main(argv: Sequence[str] = None) -> int:
        load_dotenv()
        argv = list(sys.argv[1:] if argv is None else argv)

        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config", default=None)
        known, _ = pre.parse_known_args(argv)

        parser = Benchmark.build_parser()
        if known.config:
            parser.set_defaults(**Benchmark.read_config_file(known.config))
        args = parser.parse_args(argv)

        re = args.re
        if re is None:
            re = [] if args.check_dof else [100.0]

        run_config = RunConfig(
            re=re,
            n=args.n,
            tol=args.tol,
            max_iters=args.max_iters,
            continuation=args.continuation,
            profiles=args.profiles,
            contours=args.contours,
            indicators=args.indicators,
            check_dof=args.check_dof,
            out_dir=args.out,
            output_format=args.format,
            verbose=args.verbose,
            workers=args.workers,
        )
        return Benchmark(run_config).run()


def _float_list(text) -> List[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(" ", "").split(",") if v]


def _int_list(text) -> List[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(" ", "").split(",") if v]


def _bool(text) -> bool:
    value = _optional_bool(text)
    if value is None:
        raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")
    return value


def _optional_bool(text) -> Optional[bool]:
    if isinstance(text, bool) or text is None:
        return text
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    if lowered in ("auto", ""):
        return None
    raise argparse.ArgumentTypeError(f"expected on/off/auto, got {text!r}")
