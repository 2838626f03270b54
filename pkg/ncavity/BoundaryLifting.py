from __future__ import annotations

import numpy as np

from ncavity.AffineMap import AffineMap
from ncavity.DSSYReference import DSSYReference
from ncavity.P1NCBasis import local_gradients, local_values
from ncavity.UniformMesh import UniformMesh

# DSSY function whose node is the top edge midpoint of the reference square
TOP_NODE = 2


class BoundaryLifting:
    """
    Discrete lid data u_b = (1/2, 0) [sum_{j=1}^{N-1} phi_{j,N} + psi_2 on Q_1N + psi_2 on Q_NN].

    The first component is stored cell-wise as weights on the local P1-nonconforming corner
    functions plus a weight on the top-node DSSY function. The second component vanishes.
    """

    def __init__(self, mesh: UniformMesh, ell: int = 1) -> None:
        self.mesh = mesh
        self.dssy = DSSYReference(ell)

        n = mesh.n
        corner_weights = np.zeros((mesh.cell_count, 4))
        dssy_weights = np.zeros(mesh.cell_count)

        for j in range(1, n + 1):
            c = mesh.cell_index(j, n)
            # TL corner is V_{j-1,N}, TR corner is V_{j,N}
            if j - 1 >= 1:
                corner_weights[c, 3] = 0.5
            if j <= n - 1:
                corner_weights[c, 2] = 0.5

        dssy_weights[mesh.cell_index(1, n)] = 0.5
        dssy_weights[mesh.cell_index(n, n)] = 0.5

        corner_weights.setflags(write=False)
        dssy_weights.setflags(write=False)
        self.corner_weights = corner_weights
        self.dssy_weights = dssy_weights

    @property
    def ell(self) -> int:
        return self.dssy.ell

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(np.any(self.corner_weights != 0.0, axis=1) | (self.dssy_weights != 0.0))

    def values(self, ref_points: np.ndarray, cells: np.ndarray = None) -> np.ndarray:
        """
        First component at reference points on the given cells (default: all), shape (cells, m)
        """
        cells = slice(None) if cells is None else np.asarray(cells)
        ref_points = np.atleast_2d(ref_points)
        p1 = self.corner_weights[cells] @ local_values(ref_points).T
        corner = np.multiply.outer(self.dssy_weights[cells], self.dssy.value(TOP_NODE, ref_points))
        return p1 + corner

    def gradients(self, ref_points: np.ndarray, cells: np.ndarray = None) -> np.ndarray:
        """
        Physical gradient of the first component, shape (cells, m, 2)
        """
        cells = slice(None) if cells is None else np.asarray(cells)
        ref_points = np.atleast_2d(ref_points)
        h = self.mesh.h
        p1 = self.corner_weights[cells] @ local_gradients(h)
        scale = AffineMap.reference_cell(self.mesh).gradient_scale
        ref_gradient = self.dssy.gradient(TOP_NODE, ref_points) * scale
        corner = np.multiply.outer(self.dssy_weights[cells], ref_gradient)
        return p1[:, None, :] + corner


def build_lifting(mesh: UniformMesh, ell: int = 1) -> BoundaryLifting:
    return BoundaryLifting(mesh, ell=ell)
