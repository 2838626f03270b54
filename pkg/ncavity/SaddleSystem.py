from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
import scipy.sparse as sp


@dataclass
class SaddleSystem:
    """
    Blocks of the constrained Oseen system

        [ A + N   B^T   0  ] [u]   [f]
        [ B       0     C^T] [p] = [g]
        [ 0       C     0  ] [l]   [0]

    A is already scaled by the viscosity. N is None for a Stokes system.
    """

    A: sp.csr_matrix
    B: sp.csr_matrix
    C: sp.csr_matrix
    f: np.ndarray
    g: np.ndarray
    N: sp.csr_matrix = None
    nu: float = 1.0

    @property
    def velocity_size(self) -> int:
        return self.A.shape[0]

    @property
    def pressure_size(self) -> int:
        return self.B.shape[0]

    @property
    def size(self) -> int:
        return self.velocity_size + self.pressure_size + self.C.shape[0]

    @property
    def momentum(self) -> sp.csr_matrix:
        if self.N is None:
            return self.A
        return (self.A + self.N).tocsr()

    def matrix(self) -> sp.csc_matrix:
        return sp.bmat(
            [
                [self.momentum, self.B.T, None],
                [self.B, None, self.C.T],
                [None, self.C, None],
            ],
            format="csc",
        )

    def rhs(self) -> np.ndarray:
        return np.concatenate((self.f, self.g, np.zeros(self.C.shape[0])))

    def residual(self, u: np.ndarray, p: np.ndarray, multipliers: np.ndarray) -> np.ndarray:
        return np.concatenate(
            (
                self.f - self.momentum @ u - self.B.T @ p,
                self.g - self.B @ u - self.C.T @ multipliers,
                -(self.C @ p),
            )
        )

    def relative_residual(self, u: np.ndarray, p: np.ndarray, multipliers: np.ndarray) -> float:
        scale = np.linalg.norm(np.concatenate((self.f, self.g)))
        norm = np.linalg.norm(self.residual(u, p, multipliers))
        return float(norm / scale) if scale > 0.0 else float(norm)

    def dump(self, path: Union[str, Path]) -> Path:
        """
        Writes the full matrix in coordinate text format, one "row col value" triple per line
        """
        path = Path(path)
        coo = self.matrix().tocoo()
        order = np.lexsort((coo.col, coo.row))
        np.savetxt(
            path,
            np.column_stack((coo.row[order], coo.col[order], coo.data[order])),
            fmt=["%d", "%d", "%.17g"],
        )
        return path
