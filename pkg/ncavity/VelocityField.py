from __future__ import annotations

from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from ncavity.AffineMap import AffineMap
from ncavity.BoundaryLifting import BoundaryLifting
from ncavity.P1NCBasis import local_gradients, local_values
from ncavity.UniformMesh import UniformMesh
from ncavity.exceptions.InvalidParameterError import InvalidParameterError
from ncavity.exceptions.PointOutsideCellError import PointOutsideCellError

try:
    import pandas as pd
except ImportError as e:
    pd = None


def velocity_dof_map(mesh: UniformMesh) -> Dict[Tuple[int, int], int]:
    """
    Interior vertex (j, k) -> scalar slot. The xi coefficient of V_jk sits at the slot,
    the eta coefficient at slot + (N-1)^2.
    """
    return {
        (j, k): mesh.vertex_index(j, k)
        for k in range(1, mesh.n)
        for j in range(1, mesh.n)
    }


class VelocityField:
    """
    u_h = sum_jk (xi_jk, eta_jk) phi_jk + u_b, with the lifting u_b optional (homogeneous fields).
    """

    def __init__(
        self,
        mesh: UniformMesh,
        xi: np.ndarray = None,
        eta: np.ndarray = None,
        lifting: BoundaryLifting = None,
    ) -> None:
        m = mesh.interior_vertex_count
        xi = np.zeros(m) if xi is None else np.asarray(xi, dtype=float).copy()
        eta = np.zeros(m) if eta is None else np.asarray(eta, dtype=float).copy()
        if xi.shape != (m,) or eta.shape != (m,):
            raise InvalidParameterError(
                message=f"Velocity coefficients must have length {m} for N={mesh.n}."
            )
        if lifting is not None and lifting.mesh.n != mesh.n:
            raise InvalidParameterError(message="The lifting was built on a different mesh.")

        self.mesh = mesh
        self.xi = xi
        self.eta = eta
        self.lifting = lifting

    @classmethod
    def from_vector(cls, mesh: UniformMesh, u: np.ndarray, lifting: BoundaryLifting = None):
        m = mesh.interior_vertex_count
        u = np.asarray(u, dtype=float)
        assert u.shape == (2 * m,), "VELOCITY_VECTOR_SIZE_MISMATCH"
        return cls(mesh, u[:m], u[m:], lifting)

    @property
    def dof_count(self) -> int:
        return 2 * self.mesh.interior_vertex_count

    def as_vector(self) -> np.ndarray:
        return np.concatenate((self.xi, self.eta))

    def _corner_coefficients(self, cells) -> Tuple[np.ndarray, np.ndarray]:
        corners = self.mesh.cell_corners[cells]
        interior = corners >= 0
        safe = np.where(interior, corners, 0)
        return (
            np.where(interior, self.xi[safe], 0.0),
            np.where(interior, self.eta[safe], 0.0),
        )

    def evaluate_cells(self, cells, ref_points: np.ndarray) -> np.ndarray:
        """
        Values at the same reference points on each of the given cells, shape (cells, m, 2)
        """
        cells = np.arange(self.mesh.cell_count) if cells is None else np.asarray(cells)
        ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
        phi = local_values(ref_points)
        cu, cv = self._corner_coefficients(cells)
        values = np.stack((cu @ phi.T, cv @ phi.T), axis=-1)
        if self.lifting is not None:
            values[..., 0] += self.lifting.values(ref_points, cells)
        return values

    def gradient_cells(self, cells, ref_points: np.ndarray) -> np.ndarray:
        """
        Physical gradients on the given cells, shape (cells, m, 2, 2) indexed [cell, point, component, direction]
        """
        cells = np.arange(self.mesh.cell_count) if cells is None else np.asarray(cells)
        ref_points = np.atleast_2d(np.asarray(ref_points, dtype=float))
        grads = local_gradients(self.mesh.h)
        cu, cv = self._corner_coefficients(cells)
        constant = np.stack((cu @ grads, cv @ grads), axis=1)
        result = np.repeat(constant[:, None, :, :], len(ref_points), axis=1)
        if self.lifting is not None:
            result[:, :, 0, :] += self.lifting.gradients(ref_points, cells)
        return result

    def evaluate_local(self, ref_points: np.ndarray) -> np.ndarray:
        return self.evaluate_cells(None, ref_points)

    def gradient_local(self, ref_points: np.ndarray) -> np.ndarray:
        return self.gradient_cells(None, ref_points)

    def evaluate(self, point, cell: Tuple[int, int]) -> np.ndarray:
        """
        One-sided value at a physical point of the hinted cell (j, k)
        """
        affine = AffineMap(self.mesh, *cell)
        if not affine.contains(point):
            raise PointOutsideCellError(
                message=f"Point {tuple(point)} does not lie in cell {tuple(cell)}."
            )
        index = self.mesh.cell_index(*cell)
        return self.evaluate_cells([index], affine.to_reference(point))[0, 0]

    def gradient(self, point, cell: Tuple[int, int]) -> np.ndarray:
        affine = AffineMap(self.mesh, *cell)
        if not affine.contains(point):
            raise PointOutsideCellError(
                message=f"Point {tuple(point)} does not lie in cell {tuple(cell)}."
            )
        index = self.mesh.cell_index(*cell)
        return self.gradient_cells([index], affine.to_reference(point))[0, 0]

    def to_dataframe(self):
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        slots = velocity_dof_map(self.mesh)
        rows = [
            {"j": j, "k": k, "xi": self.xi[slot], "eta": self.eta[slot]}
            for (j, k), slot in slots.items()
        ]
        return pd.DataFrame(rows, columns=["j", "k", "xi", "eta"])

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_dataframe().to_csv(path, index=False, float_format="%.17g")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path], mesh: UniformMesh, lifting: BoundaryLifting = None):
        if pd is None:
            raise ModuleNotFoundError("You must install pandas to use this feature.")
        df = pd.read_csv(path)
        m = mesh.interior_vertex_count
        if len(df) != m:
            raise InvalidParameterError(
                message=f"The CSV holds {len(df)} vertices, the mesh has {m} interior vertices."
            )
        slots = (df["k"].to_numpy() - 1) * (mesh.n - 1) + (df["j"].to_numpy() - 1)
        xi = np.zeros(m)
        eta = np.zeros(m)
        xi[slots] = df["xi"].to_numpy(dtype=float)
        eta[slots] = df["eta"].to_numpy(dtype=float)
        return cls(mesh, xi, eta, lifting)


def evaluate_velocity(velocity: VelocityField, point, cell: Tuple[int, int]) -> np.ndarray:
    return velocity.evaluate(point, cell)
