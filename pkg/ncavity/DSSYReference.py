from __future__ import annotations

from typing import Tuple

import numpy as np

from ncavity.exceptions.InvalidParameterError import InvalidParameterError

SUPPORTED_ELL = (0, 1, 2)

# theta_ell as coefficients of t^2, t^4, t^6
_THETA_COEFFICIENTS = {
    0: (1.0, 0.0, 0.0),
    1: (1.0, -5.0 / 3.0, 0.0),
    2: (1.0, -25.0 / 6.0, 7.0 / 2.0),
}


def _check_ell(ell: int) -> None:
    if ell not in SUPPORTED_ELL:
        raise InvalidParameterError(
            message=f"The DSSY family index must be one of {SUPPORTED_ELL}, got {ell!r}."
        )


def theta(ell: int, t):
    _check_ell(ell)
    c2, c4, c6 = _THETA_COEFFICIENTS[ell]
    t2 = np.asarray(t, dtype=float) ** 2
    return t2 * (c2 + t2 * (c4 + t2 * c6))


def theta_derivative(ell: int, t):
    _check_ell(ell)
    c2, c4, c6 = _THETA_COEFFICIENTS[ell]
    t = np.asarray(t, dtype=float)
    t2 = t * t
    return t * (2.0 * c2 + t2 * (4.0 * c4 + 6.0 * c6 * t2))


class DSSYReference:
    """
    DSSY basis on the reference square [-1, 1]^2 spanned by {1, x, y, theta(x) - theta(y)}.

    Basis function j (1-based) takes the value 1 at node j and 0 at the other three nodes;
    the nodes are the edge midpoints (1, 0), (0, 1), (-1, 0), (0, -1).
    """

    NODES = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])

    def __init__(self, ell: int = 1) -> None:
        _check_ell(ell)
        self.ell = ell
        c = 1.0 / (4.0 * float(theta(ell, 1.0)))
        # Rows: basis functions, columns: monomials 1, x, y, theta(x) - theta(y)
        self.coefficients = np.array(
            [
                [0.25, 0.5, 0.0, c],
                [0.25, 0.0, 0.5, -c],
                [0.25, -0.5, 0.0, c],
                [0.25, 0.0, -0.5, -c],
            ]
        )

    def _check_index(self, j: int) -> None:
        if j not in (1, 2, 3, 4):
            raise InvalidParameterError(message=f"DSSY basis index must be in 1..4, got {j!r}.")

    def value(self, j: int, points: np.ndarray) -> np.ndarray:
        self._check_index(j)
        points = np.asarray(points, dtype=float)
        x, y = points[..., 0], points[..., 1]
        c = self.coefficients[j - 1]
        return c[0] + c[1] * x + c[2] * y + c[3] * (theta(self.ell, x) - theta(self.ell, y))

    def gradient(self, j: int, points: np.ndarray) -> np.ndarray:
        """
        Reference gradient d/dx_hat, d/dy_hat with shape points.shape
        """
        self._check_index(j)
        points = np.asarray(points, dtype=float)
        x, y = points[..., 0], points[..., 1]
        c = self.coefficients[j - 1]
        gx = c[1] + c[3] * theta_derivative(self.ell, x)
        gy = c[2] - c[3] * theta_derivative(self.ell, y)
        return np.stack((gx, gy), axis=-1)

    def evaluate(self, j: int, point) -> Tuple[float, np.ndarray]:
        point = np.asarray(point, dtype=float)
        return float(self.value(j, point)), self.gradient(j, point)


def dssy_ref_eval(j: int, point, ell: int = 1) -> Tuple[float, np.ndarray]:
    return DSSYReference(ell).evaluate(j, point)
