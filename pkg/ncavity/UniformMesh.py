from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ncavity.constants.CellColor import CellColor
from ncavity.constants.EdgeSide import EdgeSide
from ncavity.exceptions.IndexOutOfRangeError import IndexOutOfRangeError
from ncavity.exceptions.InvalidMeshSizeError import InvalidMeshSizeError

# Local corner order used by every cell-wise table: BL, BR, TR, TL
CORNER_OFFSETS = ((-1, -1), (0, -1), (0, 0), (-1, 0))


@dataclass(frozen=True)
class EdgeRecord:
    edge_id: int
    midpoint: Tuple[float, float]
    side: EdgeSide
    cells: Tuple[int, ...]

    @property
    def is_boundary(self) -> bool:
        return self.side != EdgeSide.INTERIOR


class UniformMesh:
    def __init__(self, n: int) -> None:
        """
        Uniform partition of the unit square into n x n squares Q_jk, j,k = 1..n
        :param n: Number of cells per side, an even integer >= 2
        """
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise InvalidMeshSizeError(
                message=f"The number of cells per side must be an integer, got {n!r}."
            )
        if n < 2 or n % 2 != 0:
            raise InvalidMeshSizeError(
                message=f"The number of cells per side must be an even integer >= 2, got {n}."
            )

        self.__n = int(n)
        self.__h = 1.0 / self.__n

        # Row-major cell numbering, j runs fastest
        k, j = np.divmod(np.arange(self.__n * self.__n), self.__n)
        self.__cell_j = j + 1
        self.__cell_k = k + 1
        self.__cell_centers = np.column_stack(
            ((self.__cell_j - 0.5) * self.__h, (self.__cell_k - 0.5) * self.__h)
        )
        self.__red = (self.__cell_j + self.__cell_k) % 2 == 0

        corners = np.empty((self.__n * self.__n, 4), dtype=np.int64)
        for a, (dj, dk) in enumerate(CORNER_OFFSETS):
            corners[:, a] = self._vertex_indices(self.__cell_j + dj, self.__cell_k + dk)
        self.__cell_corners = corners

        for array in (
            self.__cell_j,
            self.__cell_k,
            self.__cell_centers,
            self.__red,
            self.__cell_corners,
        ):
            array.setflags(write=False)

    def __repr__(self) -> str:
        return f"UniformMesh(n={self.n})"

    @property
    def n(self) -> int:
        return self.__n

    @property
    def h(self) -> float:
        return self.__h

    @property
    def cell_count(self) -> int:
        return self.__n * self.__n

    @property
    def interior_vertex_count(self) -> int:
        return (self.__n - 1) ** 2

    @property
    def edge_count(self) -> int:
        return 2 * self.__n * (self.__n + 1)

    @property
    def boundary_edge_count(self) -> int:
        return 4 * self.__n

    @property
    def cell_j(self) -> np.ndarray:
        return self.__cell_j

    @property
    def cell_k(self) -> np.ndarray:
        return self.__cell_k

    @property
    def cell_centers(self) -> np.ndarray:
        return self.__cell_centers

    @property
    def red_mask(self) -> np.ndarray:
        return self.__red

    @property
    def cell_corners(self) -> np.ndarray:
        """
        Interior-vertex index of the four corners (BL, BR, TR, TL) of every cell; -1 marks a boundary vertex
        """
        return self.__cell_corners

    def _check_cell(self, j: int, k: int) -> None:
        if not (1 <= j <= self.__n and 1 <= k <= self.__n):
            raise IndexOutOfRangeError(
                message=f"Cell ({j}, {k}) is outside the {self.__n}x{self.__n} mesh."
            )

    def _vertex_indices(self, j, k):
        j = np.asarray(j)
        k = np.asarray(k)
        interior = (j >= 1) & (j <= self.__n - 1) & (k >= 1) & (k <= self.__n - 1)
        return np.where(interior, (k - 1) * (self.__n - 1) + (j - 1), -1)

    def cell_index(self, j: int, k: int) -> int:
        self._check_cell(j, k)
        return (k - 1) * self.__n + (j - 1)

    def cell_jk(self, index: int) -> Tuple[int, int]:
        if not 0 <= index < self.cell_count:
            raise IndexOutOfRangeError(message=f"Cell index {index} is outside the mesh.")
        return int(self.__cell_j[index]), int(self.__cell_k[index])

    def cell_center(self, j: int, k: int) -> Tuple[float, float]:
        self._check_cell(j, k)
        return (j - 0.5) * self.__h, (k - 0.5) * self.__h

    def cell_color(self, j: int, k: int) -> CellColor:
        self._check_cell(j, k)
        return CellColor.RED if (j + k) % 2 == 0 else CellColor.BLACK

    def vertex(self, j: int, k: int) -> Tuple[float, float]:
        if not (0 <= j <= self.__n and 0 <= k <= self.__n):
            raise IndexOutOfRangeError(message=f"Vertex ({j}, {k}) is outside the mesh.")
        return j * self.__h, k * self.__h

    def vertex_index(self, j: int, k: int) -> int:
        """
        Index of the interior vertex V_jk among the (n-1)^2 interior vertices, -1 on the boundary
        """
        if not (0 <= j <= self.__n and 0 <= k <= self.__n):
            raise IndexOutOfRangeError(message=f"Vertex ({j}, {k}) is outside the mesh.")
        return int(self._vertex_indices(j, k))

    def locate(self, x: float, y: float) -> Tuple[int, int]:
        """
        Cell containing (x, y); points on a mesh line are assigned to the cell above/right of it
        """
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise IndexOutOfRangeError(message=f"Point ({x}, {y}) is outside the unit square.")
        j = min(int(np.floor(x * self.__n)) + 1, self.__n)
        k = min(int(np.floor(y * self.__n)) + 1, self.__n)
        return j, k

    def edge_midpoints(self) -> List[EdgeRecord]:
        n, h = self.__n, self.__h
        records = []

        # Horizontal edges first: edge between V_{j-1,k} and V_{j,k}
        for k in range(0, n + 1):
            for j in range(1, n + 1):
                cells = []
                if k >= 1:
                    cells.append(self.cell_index(j, k))
                if k <= n - 1:
                    cells.append(self.cell_index(j, k + 1))
                side = EdgeSide.BOTTOM if k == 0 else EdgeSide.TOP if k == n else EdgeSide.INTERIOR
                records.append(
                    EdgeRecord(
                        edge_id=k * n + (j - 1),
                        midpoint=((j - 0.5) * h, k * h),
                        side=side,
                        cells=tuple(cells),
                    )
                )

        # Vertical edges: edge between V_{j,k-1} and V_{j,k}
        offset = n * (n + 1)
        for k in range(1, n + 1):
            for j in range(0, n + 1):
                cells = []
                if j >= 1:
                    cells.append(self.cell_index(j, k))
                if j <= n - 1:
                    cells.append(self.cell_index(j + 1, k))
                side = EdgeSide.LEFT if j == 0 else EdgeSide.RIGHT if j == n else EdgeSide.INTERIOR
                records.append(
                    EdgeRecord(
                        edge_id=offset + (k - 1) * (n + 1) + j,
                        midpoint=(j * h, (k - 0.5) * h),
                        side=side,
                        cells=tuple(cells),
                    )
                )

        return records


def build_mesh(n: int) -> UniformMesh:
    return UniformMesh(n)


def cell_color(mesh: UniformMesh, j: int, k: int) -> CellColor:
    return mesh.cell_color(j, k)


def edge_midpoints(mesh: UniformMesh) -> List[EdgeRecord]:
    return mesh.edge_midpoints()
