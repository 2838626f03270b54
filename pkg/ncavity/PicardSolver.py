from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from rich.console import Console
from scipy.sparse.linalg import splu

from ncavity.Assembler import Assembler
from ncavity.BoundaryLifting import BoundaryLifting
from ncavity.PressureField import PressureField, pinned_pressure_basis
from ncavity.SaddleSystem import SaddleSystem
from ncavity.UniformMesh import UniformMesh
from ncavity.VelocityField import VelocityField
from ncavity.constants.InitialGuess import InitialGuess
from ncavity.constants.PressureBasis import PressureBasis
from ncavity.exceptions.InvalidParameterError import InvalidParameterError
from ncavity.exceptions.SolveEvaluator import SolveEvaluator

DEFAULT_CONTINUATION = (100.0, 400.0, 1000.0, 2500.0)
REFINEMENT_STEPS = 3


@dataclass
class PicardConfig:
    re: float
    tol_rel: float = 1e-10
    max_iters: int = 200
    continuation_schedule: Optional[List[float]] = None
    # None engages the default schedule for Re > 1000 only
    continuation: Optional[bool] = None
    initial_guess: InitialGuess = InitialGuess.STOKES
    divergence_window: int = 10
    linear_tol: float = 1e-12

    def __post_init__(self) -> None:
        if not self.re > 0.0:
            raise InvalidParameterError(message=f"The Reynolds number must be positive, got {self.re}.")
        if not self.tol_rel > 0.0:
            raise InvalidParameterError(message=f"The tolerance must be positive, got {self.tol_rel}.")
        if int(self.max_iters) < 1:
            raise InvalidParameterError(message=f"max_iters must be >= 1, got {self.max_iters}.")
        if self.continuation_schedule is not None:
            schedule = [float(r) for r in self.continuation_schedule]
            if any(r <= 0.0 for r in schedule) or any(b <= a for a, b in zip(schedule, schedule[1:])):
                raise InvalidParameterError(
                    message="The continuation schedule must be a strictly increasing list of positive values."
                )
            self.continuation_schedule = schedule
        self.initial_guess = InitialGuess(self.initial_guess)

    @property
    def nu(self) -> float:
        return 1.0 / self.re

    def stages(self) -> List[float]:
        if self.continuation is False:
            return [float(self.re)]
        if self.continuation_schedule is not None:
            schedule = self.continuation_schedule
        elif self.continuation or self.re > 1000.0:
            schedule = DEFAULT_CONTINUATION
        else:
            schedule = ()
        return [r for r in schedule if r < self.re] + [float(self.re)]


@dataclass
class SolveReport:
    iterations: int = 0
    residual_history: List[float] = field(default_factory=list)
    linear_residuals: List[float] = field(default_factory=list)
    stages: List[float] = field(default_factory=list)
    stage_iterations: List[int] = field(default_factory=list)
    wall_time: float = 0.0
    converged: bool = False

    @property
    def final_residual(self) -> Optional[float]:
        return self.residual_history[-1] if self.residual_history else None

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residual_history": list(self.residual_history),
            "linear_residuals": list(self.linear_residuals),
            "stages": list(self.stages),
            "stage_iterations": list(self.stage_iterations),
            "wall_time": self.wall_time,
            "converged": self.converged,
        }

    def __str__(self) -> str:
        final = "-" if self.final_residual is None else f"{self.final_residual:.3e}"
        worst_linear = "-" if not self.linear_residuals else f"{max(self.linear_residuals):.3e}"
        return f"""Picard solve
    =============================
    Converged       -> {self.converged}
    Iterations      -> {self.iterations}
    Stages (Re)     -> {", ".join(f"{r:g}" for r in self.stages)}
    Final residual  -> {final}
    Worst linear    -> {worst_linear}
    Wall time       -> {self.wall_time:.2f}s
    """


class PicardSolver:
    def __init__(
        self,
        mesh: UniformMesh,
        lifting: BoundaryLifting = None,
        config: dict = None,
        log: bool = False,
    ) -> None:
        """
        Solves the cavity problem by Picard iteration over constrained Oseen systems
        :param mesh: The uniform mesh
        :param lifting: Discrete lid data; None solves homogeneous problems
        :param config: Optional settings, e.g. {"quadrature_points": 6}
        :param log: Whether iteration progress should be printed to stderr
        """
        if config is None:
            config = {}

        self.mesh = mesh
        self.lifting = lifting
        self.config = config
        self.assembler = Assembler(
            mesh, lifting=lifting, quadrature_points=int(config.get("quadrature_points", 6))
        )
        self.evaluator = SolveEvaluator()
        self.console = Console(stderr=True)
        self.__log = log

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

    def _factorize(self, matrix: sp.spmatrix, velocity_block: sp.spmatrix):
        try:
            return splu(sp.csc_matrix(matrix), permc_spec="COLAMD")
        except RuntimeError as e:
            # Find out whether the momentum block alone is already singular
            block = "saddle"
            try:
                splu(sp.csc_matrix(velocity_block), permc_spec="COLAMD")
            except RuntimeError:
                block = "velocity"
            self.evaluator.evaluate_factorization(e, block)

    def _solve_linear(self, matrix: sp.spmatrix, rhs: np.ndarray, velocity_block: sp.spmatrix, tol: float):
        lu = self._factorize(matrix, velocity_block)
        x = lu.solve(rhs)
        scale = np.linalg.norm(rhs)
        scale = scale if scale > 0.0 else 1.0
        residual = rhs - matrix @ x
        relative = np.linalg.norm(residual) / scale
        steps = 0
        while relative > tol and steps < REFINEMENT_STEPS:
            x = x + lu.solve(residual)
            residual = rhs - matrix @ x
            relative = np.linalg.norm(residual) / scale
            steps += 1
        self.evaluator.evaluate_linear(relative, tol)
        return x, float(relative)

    def solve_oseen(
        self,
        system: SaddleSystem,
        pressure_basis: PressureBasis = PressureBasis.MULTIPLIER,
        linear_tol: float = 1e-12,
    ) -> Tuple[VelocityField, PressureField, float]:
        """
        Solves one constrained Oseen (or Stokes) system
        :return: velocity, pressure and the relative algebraic residual of the linear solve
        """
        pressure_basis = PressureBasis(pressure_basis)
        nv = system.velocity_size
        npr = system.pressure_size
        momentum = system.momentum

        if pressure_basis == PressureBasis.MULTIPLIER:
            x, relative = self._solve_linear(system.matrix(), system.rhs(), momentum, linear_tol)
            u = x[:nv]
            gamma = x[nv:nv + npr]
            multipliers = x[nv + npr:]
        else:
            basis = pinned_pressure_basis(self.mesh)
            coupling = basis.T @ system.B
            matrix = sp.bmat([[momentum, coupling.T], [coupling, None]], format="csc")
            rhs = np.concatenate((system.f, basis.T @ system.g))
            x, relative = self._solve_linear(matrix, rhs, momentum, linear_tol)
            u = x[:nv]
            gamma = basis @ x[nv:]
            # Recover the multipliers from the continuity rows: C^T l = g - B u
            area = self.mesh.h * self.mesh.h
            defect = system.g - system.B @ u
            red = self.mesh.red_mask
            multipliers = np.array([defect[red].mean(), defect[~red].mean()]) / area

        velocity = VelocityField.from_vector(self.mesh, u, self.lifting)
        pressure = PressureField(self.mesh, gamma, multipliers)
        return velocity, pressure, relative

    def initial_guess(self, picard_config: PicardConfig) -> VelocityField:
        if picard_config.initial_guess == InitialGuess.ZERO:
            return VelocityField(self.mesh, lifting=self.lifting)
        system = self.assembler.assemble_system(picard_config.nu, with_convection=False)
        velocity, _, _ = self.solve_oseen(system, linear_tol=picard_config.linear_tol)
        return velocity

    def nonlinear_residual(
        self, nu: float, velocity: VelocityField, pressure: PressureField
    ) -> float:
        """
        Relative residual of the discrete Navier-Stokes equations, re-assembled from scratch at (u, p)
        """
        system = self.assembler.assemble_system(nu, transport=velocity)
        return system.relative_residual(velocity.as_vector(), pressure.gamma, pressure.multipliers)

    def picard_solve(
        self, picard_config: PicardConfig, start: VelocityField = None
    ) -> Tuple[VelocityField, PressureField, SolveReport]:
        started_at = time.perf_counter()
        report = SolveReport(stages=picard_config.stages())

        velocity = start if start is not None else self.initial_guess(picard_config)
        pressure = None

        for stage, re in enumerate(report.stages):
            nu = 1.0 / re
            self._log(f"[bold blue]Picard stage Re={re:g} (N={self.mesh.n})", rule=True)

            system = self.assembler.assemble_system(nu, transport=velocity)
            history = []
            while True:
                velocity, pressure, linear = self.solve_oseen(
                    system, linear_tol=picard_config.linear_tol
                )
                system = self.assembler.assemble_system(nu, transport=velocity)
                residual = system.relative_residual(
                    velocity.as_vector(), pressure.gamma, pressure.multipliers
                )
                history.append(residual)
                report.residual_history.append(residual)
                report.linear_residuals.append(linear)
                report.iterations += 1
                self._log(
                    f"  iter {len(history):4d}  residual {residual:.3e}  linear {linear:.1e}"
                )
                if self.evaluator.evaluate(
                    history,
                    tol_rel=picard_config.tol_rel,
                    max_iters=picard_config.max_iters,
                    divergence_window=picard_config.divergence_window,
                ):
                    break
            report.stage_iterations.append(len(history))

        report.converged = True
        report.wall_time = time.perf_counter() - started_at
        self._log(str(report))
        return velocity, pressure, report


def picard_solve(
    mesh: UniformMesh, picard_config: PicardConfig, lifting: BoundaryLifting = None, log: bool = False
) -> Tuple[VelocityField, PressureField, SolveReport]:
    lifting = BoundaryLifting(mesh) if lifting is None else lifting
    return PicardSolver(mesh, lifting, log=log).picard_solve(picard_config)
