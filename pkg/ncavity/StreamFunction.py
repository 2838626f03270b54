from __future__ import annotations

from typing import Callable, Dict, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from ncavity.AffineMap import AffineMap
from ncavity.QuadratureRule import gauss_line_rule, gauss_rule
from ncavity.UniformMesh import UniformMesh
from ncavity.VelocityField import VelocityField
from ncavity.exceptions.NeumannIncompatibilityError import NeumannIncompatibilityError

COMPATIBILITY_TOLERANCE = 1e-8

# Bilinear element stiffness on a square, corners BL, BR, TR, TL
_Q1_STIFFNESS = (
    np.array(
        [
            [4.0, -1.0, -2.0, -1.0],
            [-1.0, 4.0, -1.0, -2.0],
            [-2.0, -1.0, 4.0, -1.0],
            [-1.0, -2.0, -1.0, 4.0],
        ]
    )
    / 6.0
)
_Q1_SIGNS = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
_Q1_OFFSETS = ((-1, -1), (0, -1), (0, 0), (-1, 0))


def _q1_values(ref_points: np.ndarray) -> np.ndarray:
    return 0.25 * (1.0 + ref_points[:, None, 0] * _Q1_SIGNS[None, :, 0]) * (
        1.0 + ref_points[:, None, 1] * _Q1_SIGNS[None, :, 1]
    )


class StreamFunction:
    """
    Conforming bilinear solver for -Lap psi = omega with the Neumann data
    d psi / dn = -u (bottom), u (top), v (left), -v (right), normalised by psi(0, 0) = 0.

    Vertex V_jk, j,k = 0..N, is stored at k * (N + 1) + j.
    """

    def __init__(self, mesh: UniformMesh, quadrature_points: int = 6) -> None:
        self.mesh = mesh
        self.rule = gauss_rule(quadrature_points)
        self.line_nodes, self.line_weights = gauss_line_rule(quadrature_points)
        n = mesh.n
        self.cell_vertices = np.column_stack(
            [(mesh.cell_k + dk) * (n + 1) + (mesh.cell_j + dj) for dj, dk in _Q1_OFFSETS]
        )
        self.__stiffness = None

    @property
    def vertex_count(self) -> int:
        return (self.mesh.n + 1) ** 2

    def stiffness(self) -> sp.csr_matrix:
        if self.__stiffness is None:
            shape = (self.mesh.cell_count, 4, 4)
            rows = np.broadcast_to(self.cell_vertices[:, :, None], shape).ravel()
            cols = np.broadcast_to(self.cell_vertices[:, None, :], shape).ravel()
            values = np.broadcast_to(_Q1_STIFFNESS, shape).ravel()
            size = self.vertex_count
            self.__stiffness = sp.coo_matrix((values, (rows, cols)), shape=(size, size)).tocsr()
        return self.__stiffness

    def _boundary_edges(self) -> Dict[str, Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
        """
        Per side: boundary cells, reference points on the side, and the vertex ids at the
        start/end of each edge (in the direction of the edge parameter t).
        """
        n = self.mesh.n
        t = self.line_nodes
        ones = np.ones_like(t)
        idx = np.arange(1, n + 1)
        stride = n + 1
        return {
            "bottom": (
                idx - 1,
                np.column_stack((t, -ones)),
                idx - 1,
                idx,
            ),
            "top": (
                (n - 1) * n + idx - 1,
                np.column_stack((t, ones)),
                n * stride + idx - 1,
                n * stride + idx,
            ),
            "left": (
                (idx - 1) * n,
                np.column_stack((-ones, t)),
                (idx - 1) * stride,
                idx * stride,
            ),
            "right": (
                (idx - 1) * n + (n - 1),
                np.column_stack((ones, t)),
                (idx - 1) * stride + n,
                idx * stride + n,
            ),
        }

    @staticmethod
    def _normal_derivative(side: str, values: np.ndarray) -> np.ndarray:
        u, v = values[..., 0], values[..., 1]
        return {"bottom": -u, "top": u, "left": v, "right": -v}[side]

    def _assemble_rhs(
        self,
        vorticity: np.ndarray,
        boundary_values: Callable[[str, np.ndarray, np.ndarray], np.ndarray],
    ) -> np.ndarray:
        """
        :param vorticity: omega at the quadrature points of every cell, shape (N^2, m)
        :param boundary_values: (side, cells, ref_points) -> velocity trace, shape (cells, m1, 2)
        """
        cell_map = AffineMap.reference_cell(self.mesh)
        wj = self.rule.weights * cell_map.jacobian_determinant
        local = vorticity @ (_q1_values(self.rule.points) * wj[:, None])
        rhs = np.bincount(
            self.cell_vertices.ravel(), weights=local.ravel(), minlength=self.vertex_count
        )

        ds = cell_map.edge_jacobian * self.line_weights
        start_shape = 0.5 * (1.0 - self.line_nodes)
        end_shape = 0.5 * (1.0 + self.line_nodes)
        for side, (cells, ref_points, start, end) in self._boundary_edges().items():
            flux = self._normal_derivative(side, boundary_values(side, cells, ref_points))
            rhs += np.bincount(start, weights=flux @ (start_shape * ds), minlength=self.vertex_count)
            rhs += np.bincount(end, weights=flux @ (end_shape * ds), minlength=self.vertex_count)
        return rhs

    def _solve(self, rhs: np.ndarray) -> np.ndarray:
        scale = max(1.0, float(np.abs(rhs).sum()))
        if abs(rhs.sum()) > COMPATIBILITY_TOLERANCE * scale:
            raise NeumannIncompatibilityError(
                message=f"The Neumann data is incompatible with the source (defect {rhs.sum():.3e})."
            )
        rhs = rhs - rhs.mean()
        stiffness = self.stiffness()
        # psi(0, 0) = 0 pins the additive constant
        reduced = stiffness[1:, 1:].tocsc()
        psi = np.zeros(self.vertex_count)
        psi[1:] = spsolve(reduced, rhs[1:])
        return psi

    def solve(self, velocity: VelocityField) -> np.ndarray:
        grads = velocity.gradient_local(self.rule.points)
        vorticity = grads[:, :, 1, 0] - grads[:, :, 0, 1]

        def boundary_values(side, cells, ref_points):
            return velocity.evaluate_cells(cells, ref_points)

        return self._solve(self._assemble_rhs(vorticity, boundary_values))

    def solve_exact(
        self,
        vorticity: Callable[[np.ndarray, np.ndarray], np.ndarray],
        velocity: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]],
    ) -> np.ndarray:
        """
        Same problem for analytic data omega(x, y) and (u, v)(x, y)
        """
        centers = self.mesh.cell_centers
        half = 0.5 * self.mesh.h
        x = centers[:, 0, None] + half * self.rule.points[None, :, 0]
        y = centers[:, 1, None] + half * self.rule.points[None, :, 1]
        omega = np.broadcast_to(vorticity(x, y), x.shape)

        def boundary_values(side, cells, ref_points):
            bx = centers[cells, 0, None] + half * ref_points[None, :, 0]
            by = centers[cells, 1, None] + half * ref_points[None, :, 1]
            u, v = velocity(bx, by)
            return np.stack(np.broadcast_arrays(u, v), axis=-1)

        return self._solve(self._assemble_rhs(omega, boundary_values))

    def grid(self, psi: np.ndarray) -> np.ndarray:
        """
        psi reshaped to [k, j]
        """
        n = self.mesh.n
        return np.asarray(psi).reshape(n + 1, n + 1)

    def at_centers(self, psi: np.ndarray) -> np.ndarray:
        return np.asarray(psi)[self.cell_vertices].mean(axis=1)


def stream_function(velocity: VelocityField, quadrature_points: int = 6) -> np.ndarray:
    return StreamFunction(velocity.mesh, quadrature_points).solve(velocity)
