from __future__ import annotations

import numpy as np

from ncavity.UniformMesh import UniformMesh


class AffineMap:
    """
    F_Q: [-1, 1]^2 -> Q_jk, x = c + (h / 2) x_hat
    """

    def __init__(self, mesh: UniformMesh, j: int, k: int) -> None:
        self.center = np.array(mesh.cell_center(j, k))
        self.scale = 0.5 * mesh.h

    @classmethod
    def reference_cell(cls, mesh: UniformMesh) -> AffineMap:
        # Every cell of a uniform mesh shares the scaling of Q_11
        return cls(mesh, 1, 1)

    @property
    def jacobian_determinant(self) -> float:
        return self.scale * self.scale

    @property
    def gradient_scale(self) -> float:
        # physical gradient = gradient_scale * reference gradient
        return 1.0 / self.scale

    @property
    def edge_jacobian(self) -> float:
        return self.scale

    def to_physical(self, ref_points) -> np.ndarray:
        return self.center + self.scale * np.asarray(ref_points, dtype=float)

    def to_reference(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.center) / self.scale

    def contains(self, point, tol: float = 1e-12) -> bool:
        ref = self.to_reference(point)
        return bool(np.all(np.abs(ref) <= 1.0 + tol))
