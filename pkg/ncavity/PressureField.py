from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
import scipy.sparse as sp

from ncavity.UniformMesh import UniformMesh
from ncavity.exceptions.InvalidParameterError import InvalidParameterError

try:
    import pandas as pd
except ImportError as e:
    pd = None


def pressure_constraint_rows(mesh: UniformMesh) -> sp.csr_matrix:
    """
    2 x N_Q matrix whose rows are the red and black indicators scaled by the cell area
    """
    area = mesh.h * mesh.h
    red = mesh.red_mask.astype(float)
    return sp.csr_matrix(np.vstack((area * red, area * (1.0 - red))))


def pinned_pressure_basis(mesh: UniformMesh) -> sp.csr_matrix:
    """
    Explicit basis of the checkerboard-free space: chi_Q - chi_{Q_NN} for red Q and
    chi_Q - chi_{Q_{N-1,N}} for black Q, shape N_Q x (N_Q - 2)
    """
    n = mesh.n
    red_anchor = mesh.cell_index(n, n)
    black_anchor = mesh.cell_index(n - 1, n)

    free = [c for c in range(mesh.cell_count) if c not in (red_anchor, black_anchor)]
    anchors = [red_anchor if mesh.red_mask[c] else black_anchor for c in free]
    columns = np.arange(len(free))

    rows = np.concatenate((free, anchors))
    cols = np.concatenate((columns, columns))
    values = np.concatenate((np.ones(len(free)), -np.ones(len(free))))
    return sp.coo_matrix((values, (rows, cols)), shape=(mesh.cell_count, len(free))).tocsr()


class PressureField:
    """
    Piecewise constant pressure gamma_jk. ``multipliers`` keeps the two Lagrange multipliers of
    the red/black constraints when the field comes out of a multiplier solve.
    """

    def __init__(self, mesh: UniformMesh, gamma: np.ndarray = None, multipliers: np.ndarray = None) -> None:
        gamma = np.zeros(mesh.cell_count) if gamma is None else np.asarray(gamma, dtype=float).copy()
        if gamma.shape != (mesh.cell_count,):
            raise InvalidParameterError(
                message=f"Pressure values must have length {mesh.cell_count} for N={mesh.n}."
            )
        self.mesh = mesh
        self.gamma = gamma
        self.multipliers = np.zeros(2) if multipliers is None else np.asarray(multipliers, dtype=float)

    @property
    def dof_count(self) -> int:
        return self.mesh.cell_count - 2

    def constraint_residuals(self) -> np.ndarray:
        return pressure_constraint_rows(self.mesh) @ self.gamma

    def checkerboard_component(self) -> float:
        """
        L2 projection coefficient of gamma onto the +1 red / -1 black pattern
        """
        pattern = np.where(self.mesh.red_mask, 1.0, -1.0)
        return float(np.dot(pattern, self.gamma) / self.mesh.cell_count)

    def to_dataframe(self):
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        return pd.DataFrame(
            {"j": self.mesh.cell_j, "k": self.mesh.cell_k, "gamma": self.gamma},
            columns=["j", "k", "gamma"],
        )

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_dataframe().to_csv(path, index=False, float_format="%.17g")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path], mesh: UniformMesh):
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        df = pd.read_csv(path)
        if len(df) != mesh.cell_count:
            raise InvalidParameterError(
                message=f"The CSV holds {len(df)} cells, the mesh has {mesh.cell_count}."
            )
        gamma = np.zeros(mesh.cell_count)
        slots = (df["k"].to_numpy() - 1) * mesh.n + (df["j"].to_numpy() - 1)
        gamma[slots] = df["gamma"].to_numpy(dtype=float)
        return cls(mesh, gamma)
