from __future__ import annotations

from typing import List, Tuple

import numpy as np

from ncavity.UniformMesh import CORNER_OFFSETS, UniformMesh
from ncavity.exceptions.IndexOutOfRangeError import IndexOutOfRangeError
from ncavity.exceptions.InvalidParameterError import InvalidParameterError

# Signs (sx, sy) of the local corners BL, BR, TR, TL
CORNER_SIGNS = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])


def local_values(ref_points: np.ndarray) -> np.ndarray:
    """
    Values of the four local P1-nonconforming functions at reference points, shape (m, 4).
    The function of corner a is 1/2 + (sx_a x_hat + sy_a y_hat) / 2.
    """
    ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
    return 0.5 + 0.5 * ref_points @ CORNER_SIGNS.T


def local_gradients(h: float) -> np.ndarray:
    """
    Constant physical gradients of the four local functions, shape (4, 2)
    """
    return CORNER_SIGNS / h


class P1NCBasis:
    """
    Global P1-nonconforming basis function attached to the interior vertex V_jk.
    It is supported on the four cells sharing V_jk.
    """

    def __init__(self, mesh: UniformMesh, j: int, k: int) -> None:
        if not (1 <= j <= mesh.n - 1 and 1 <= k <= mesh.n - 1):
            raise IndexOutOfRangeError(message=f"V_({j},{k}) is not an interior vertex.")
        self.mesh = mesh
        self.j = j
        self.k = k

    @property
    def index(self) -> int:
        return self.mesh.vertex_index(self.j, self.k)

    def supporting_cells(self) -> List[Tuple[int, int]]:
        # Q_jk, Q_{j+1,k}, Q_{j+1,k+1}, Q_{j,k+1}
        return [(self.j, self.k), (self.j + 1, self.k), (self.j + 1, self.k + 1), (self.j, self.k + 1)]

    def _corner(self, cell_j: int, cell_k: int) -> int:
        for a, (dj, dk) in enumerate(CORNER_OFFSETS):
            if (cell_j + dj, cell_k + dk) == (self.j, self.k):
                return a
        raise InvalidParameterError(
            message=f"Cell ({cell_j}, {cell_k}) is not adjacent to V_({self.j},{self.k})."
        )

    def gradient(self, cell_j: int, cell_k: int) -> np.ndarray:
        return local_gradients(self.mesh.h)[self._corner(cell_j, cell_k)]

    def value(self, x: float, y: float, cell_j: int, cell_k: int) -> float:
        a = self._corner(cell_j, cell_k)
        cx, cy = self.mesh.cell_center(cell_j, cell_k)
        sx, sy = CORNER_SIGNS[a]
        return 0.5 + (sx * (x - cx) + sy * (y - cy)) / self.mesh.h


def p1nc_gradient(mesh: UniformMesh, vertex: Tuple[int, int], cell: Tuple[int, int]) -> np.ndarray:
    return P1NCBasis(mesh, *vertex).gradient(*cell)
