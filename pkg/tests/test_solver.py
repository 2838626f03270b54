import io
import sys

import numpy as np
import pytest
import scipy.sparse as sp

from ncavity import BoundaryLifting, Diagnostics, PicardConfig, PicardSolver, UniformMesh, VelocityField, picard_solve
from ncavity.Assembler import Assembler
from ncavity.PressureField import pinned_pressure_basis
from ncavity.SaddleSystem import SaddleSystem
from ncavity.constants.InitialGuess import InitialGuess
from ncavity.constants.PressureBasis import PressureBasis
from ncavity.exceptions.InvalidParameterError import InvalidParameterError
from ncavity.exceptions.LinearSolveAccuracyError import LinearSolveAccuracyError
from ncavity.exceptions.PicardDivergenceError import PicardDivergenceError
from ncavity.exceptions.PicardNotConvergedError import PicardNotConvergedError
from ncavity.exceptions.SingularSystemError import SingularSystemError
from ncavity.exceptions.SolveEvaluator import SolveEvaluator


def _stokes(n: int, nu: float = 1.0):
    mesh = UniformMesh(n)
    lifting = BoundaryLifting(mesh)
    solver = PicardSolver(mesh, lifting)
    system = solver.assembler.assemble_system(nu, with_convection=False)
    return mesh, solver, system


@pytest.mark.parametrize(
    "kwargs,expected",
    [
        ({"re": 100.0}, [100.0]),
        ({"re": 1000.0}, [1000.0]),
        ({"re": 5000.0}, [100.0, 400.0, 1000.0, 2500.0, 5000.0]),
        ({"re": 1000.0, "continuation": True}, [100.0, 400.0, 1000.0]),
        ({"re": 5000.0, "continuation": False}, [5000.0]),
        ({"re": 300.0, "continuation_schedule": [50, 200]}, [50.0, 200.0, 300.0]),
    ],
)
def test_picard_config_stages(kwargs, expected):
    assert PicardConfig(**kwargs).stages() == expected


@pytest.mark.parametrize(
    "kwargs",
    [
        {"re": 0.0},
        {"re": -5.0},
        {"re": 100.0, "tol_rel": 0.0},
        {"re": 100.0, "max_iters": 0},
        {"re": 100.0, "continuation_schedule": [200.0, 100.0]},
        {"re": 100.0, "continuation_schedule": [-1.0, 10.0]},
    ],
)
def test_picard_config_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        PicardConfig(**kwargs)


def test_picard_config_defaults():
    config = PicardConfig(re=400.0, initial_guess="zero")
    assert config.nu == pytest.approx(1.0 / 400.0)
    assert config.tol_rel == 1e-10
    assert config.max_iters == 200
    assert config.initial_guess == InitialGuess.ZERO


def test_evaluator():
    evaluator = SolveEvaluator()
    assert evaluator.evaluate([], tol_rel=1e-10, max_iters=5) is False
    assert evaluator.evaluate([1e-3, 1e-11], tol_rel=1e-10, max_iters=5) is True
    assert evaluator.evaluate([1e-3, 1e-4], tol_rel=1e-10, max_iters=5) is False

    with pytest.raises(PicardNotConvergedError) as e:
        evaluator.evaluate([1e-3, 1e-4], tol_rel=1e-10, max_iters=2)
    assert e.value.residual_history == [1e-3, 1e-4]

    growing = [1e-3 * 1.5 ** i for i in range(11)]
    with pytest.raises(PicardDivergenceError):
        evaluator.evaluate(growing, tol_rel=1e-10, max_iters=200, divergence_window=10)
    # Ten values are only nine increases
    assert evaluator.evaluate(growing[:10], tol_rel=1e-10, max_iters=200, divergence_window=10) is False

    assert evaluator.evaluate_linear(1e-14, 1e-12) is True
    with pytest.raises(LinearSolveAccuracyError) as e:
        evaluator.evaluate_linear(1e-6, 1e-12)
    assert e.value.residual == 1e-6


def test_singular_factorization():
    solver = PicardSolver(UniformMesh(2))
    singular = sp.csc_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(SingularSystemError) as e:
        solver._factorize(singular, singular)
    assert e.value.block == "velocity"
    assert "velocity" in str(e.value)


def test_stokes_solve():
    mesh, solver, system = _stokes(8)
    velocity, pressure, relative = solver.solve_oseen(system)
    assert relative <= 1e-12
    assert np.allclose(pressure.constraint_residuals(), 0.0, atol=1e-12)
    # Red cells carry -h^3 of divergence, so the red multiplier is -h
    assert np.allclose(pressure.multipliers, [-mesh.h, mesh.h], atol=1e-10)
    assert Diagnostics(velocity).flow_rate("vertical", 0.5) <= 1e-10


def test_pinned_basis_matches_multipliers():
    mesh, solver, system = _stokes(8)
    multiplier_velocity, multiplier_pressure, _ = solver.solve_oseen(system, PressureBasis.MULTIPLIER)
    pinned_velocity, pinned_pressure, _ = solver.solve_oseen(system, "pinned")
    assert np.allclose(multiplier_velocity.as_vector(), pinned_velocity.as_vector(), atol=1e-10, rtol=0.0)
    assert np.allclose(multiplier_pressure.gamma, pinned_pressure.gamma, atol=1e-9, rtol=0.0)
    assert np.allclose(multiplier_pressure.multipliers, pinned_pressure.multipliers, atol=1e-9)


def test_recovers_prescribed_pressure(mesh4: UniformMesh):
    assembler = Assembler(mesh4)
    gamma = pinned_pressure_basis(mesh4) @ np.random.default_rng(23).normal(size=14)
    B = assembler.assemble_b()
    system = SaddleSystem(
        A=assembler.assemble_a(1.0),
        B=B,
        C=assembler.assemble_constraints(),
        f=B.T @ gamma,
        g=np.zeros(mesh4.cell_count),
    )
    velocity, pressure, _ = PicardSolver(mesh4).solve_oseen(system)
    assert np.allclose(velocity.as_vector(), 0.0, atol=1e-12)
    assert np.allclose(pressure.gamma, gamma, atol=1e-12, rtol=0.0)


def test_stokes_limit_needs_at_most_two_iterations():
    mesh = UniformMesh(8)
    velocity, pressure, report = picard_solve(mesh, PicardConfig(re=1e-6))
    assert report.converged
    assert report.iterations <= 2


def test_picard_cavity(cavity_re100_n16):
    solver, velocity, pressure, report = cavity_re100_n16
    assert report.converged
    assert report.stages == [100.0]
    assert report.final_residual <= 1e-10
    assert max(report.linear_residuals) <= 1e-12
    assert len(report.residual_history) == report.iterations == sum(report.stage_iterations)
    assert np.allclose(pressure.constraint_residuals(), 0.0, atol=1e-12)

    recomputed = solver.nonlinear_residual(1.0 / 100.0, velocity, pressure)
    assert abs(recomputed - report.final_residual) <= 1e-13


def test_divergence_law(cavity_re100_n16):
    solver, velocity, pressure, report = cavity_re100_n16
    h = solver.mesh.h
    divergence, largest = Diagnostics(velocity).cell_divergence()
    assert np.max(np.abs(np.abs(divergence) - h ** 3)) <= 1e-11 * h ** 3 + 1e-13
    red = solver.mesh.red_mask
    assert np.all(np.sign(divergence[red]) == -1.0)
    assert np.all(np.sign(divergence[~red]) == 1.0)
    assert largest == pytest.approx(h ** 3)


def test_zero_initial_guess_reaches_same_solution(cavity_re100_n16):
    solver, velocity, _, _ = cavity_re100_n16
    zero_start, _, report = solver.picard_solve(PicardConfig(re=100.0, initial_guess=InitialGuess.ZERO))
    assert report.converged
    assert np.allclose(zero_start.as_vector(), velocity.as_vector(), atol=1e-8)


def test_iteration_budget():
    mesh = UniformMesh(8)
    with pytest.raises(PicardNotConvergedError) as e:
        picard_solve(mesh, PicardConfig(re=400.0, max_iters=1))
    assert len(e.value.residual_history) == 1


def test_report_layout(cavity_re100_n16):
    report = cavity_re100_n16[3]
    captured = io.StringIO()
    sys.stdout = captured
    print(report)
    sys.stdout = sys.__stdout__
    assert "Converged       -> True" in captured.getvalue()
    summary = report.to_dict()
    assert summary["iterations"] == report.iterations
    assert summary["converged"] is True


def test_manufactured_stokes_convergence(manufactured_flow):
    h1_errors, l2_errors, pressure_errors = [], [], []
    for n in (16, 32, 64):
        mesh = UniformMesh(n)
        assembler = Assembler(mesh)
        system = assembler.assemble_system(
            manufactured_flow.nu, with_convection=False, forcing=manufactured_flow.forcing
        )
        velocity, pressure, _ = PicardSolver(mesh).solve_oseen(system)
        diagnostics = Diagnostics(velocity, pressure)
        h1_errors.append(diagnostics.broken_h1_error(manufactured_flow.gradient))
        l2_errors.append(diagnostics.velocity_l2_error(manufactured_flow.velocity))
        pressure_errors.append(diagnostics.pressure_l2_error(manufactured_flow.pressure))

    def orders(errors):
        errors = np.array(errors)
        return np.log2(errors[:-1] / errors[1:])

    assert np.all(orders(h1_errors) >= 0.9), f"H1 ORDERS {orders(h1_errors)}"
    assert np.all(orders(pressure_errors) >= 0.9), f"PRESSURE ORDERS {orders(pressure_errors)}"
    assert np.all(orders(l2_errors) >= 1.6), f"L2 ORDERS {orders(l2_errors)}"


def test_stokes_start_lowers_first_residual():
    mesh = UniformMesh(64)
    solver = PicardSolver(mesh, BoundaryLifting(mesh))
    first = {}
    for guess in (InitialGuess.STOKES, InitialGuess.ZERO):
        with pytest.raises(PicardNotConvergedError) as e:
            solver.picard_solve(PicardConfig(re=1000.0, max_iters=2, initial_guess=guess))
        assert len(e.value.residual_history) == 2
        first[guess] = e.value.residual_history[0]
    assert first[InitialGuess.STOKES] < first[InitialGuess.ZERO]


def test_homogeneous_velocity_field():
    mesh = UniformMesh(4)
    field = VelocityField(mesh)
    assert field.lifting is None
    assert not field.as_vector().any()
