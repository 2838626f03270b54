import os

import numpy as np
import pytest
from dotenv import load_dotenv

from ncavity import BoundaryLifting, PicardConfig, PicardSolver, UniformMesh

load_dotenv()


def pytest_configure():
    # Fine-mesh acceptance runs (N=128/256) take minutes, opt in with NCAVITY_RUN_SLOW=1
    pytest.run_slow = os.getenv("NCAVITY_RUN_SLOW", "0").lower() in ("1", "true", "yes")
    pytest.slow_mesh = int(os.getenv("NCAVITY_SLOW_MESH", "256"))


@pytest.fixture()
def mesh4():
    return UniformMesh(4)


@pytest.fixture()
def mesh8():
    return UniformMesh(8)


@pytest.fixture(scope="session")
def cavity_re100_n16():
    mesh = UniformMesh(16)
    lifting = BoundaryLifting(mesh)
    solver = PicardSolver(mesh, lifting)
    velocity, pressure, report = solver.picard_solve(PicardConfig(re=100.0))
    return solver, velocity, pressure, report


# Manufactured solution: psi = a(x) a(y) with a(t) = t^2 (1 - t)^2, p = (x - 1/2)(y - 1/2)
def _a(t):
    return t ** 2 * (1.0 - t) ** 2


def _da(t):
    return 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t)


def _dda(t):
    return 2.0 - 12.0 * t + 12.0 * t ** 2


def _ddda(t):
    return 24.0 * t - 12.0


class ManufacturedFlow:
    """
    Divergence-free velocity vanishing on the boundary, used with a homogeneous lid
    """

    def __init__(self, nu: float = 1.0, convective: bool = False) -> None:
        self.nu = nu
        self.convective = convective

    @staticmethod
    def velocity(x, y):
        return _a(x) * _da(y), -_da(x) * _a(y)

    @staticmethod
    def gradient(x, y):
        ux = _da(x) * _da(y)
        uy = _a(x) * _dda(y)
        vx = -_dda(x) * _a(y)
        vy = -_da(x) * _da(y)
        return np.stack((np.stack((ux, uy), axis=-1), np.stack((vx, vy), axis=-1)), axis=-2)

    @staticmethod
    def pressure(x, y):
        return (x - 0.5) * (y - 0.5)

    def forcing(self, x, y):
        lap_u = _dda(x) * _da(y) + _a(x) * _ddda(y)
        lap_v = -_ddda(x) * _a(y) - _da(x) * _dda(y)
        f1 = -self.nu * lap_u + (y - 0.5)
        f2 = -self.nu * lap_v + (x - 0.5)
        if self.convective:
            u, v = self.velocity(x, y)
            grad = self.gradient(x, y)
            f1 = f1 + u * grad[..., 0, 0] + v * grad[..., 0, 1]
            f2 = f2 + u * grad[..., 1, 0] + v * grad[..., 1, 1]
        return f1, f2


@pytest.fixture()
def manufactured_flow():
    return ManufacturedFlow()
