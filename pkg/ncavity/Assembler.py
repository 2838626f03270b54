from __future__ import annotations

from typing import Callable, Tuple

import numpy as np
import scipy.sparse as sp

from ncavity.AffineMap import AffineMap
from ncavity.BoundaryLifting import BoundaryLifting
from ncavity.P1NCBasis import CORNER_SIGNS, local_values
from ncavity.PressureField import pressure_constraint_rows
from ncavity.QuadratureRule import gauss_rule
from ncavity.SaddleSystem import SaddleSystem
from ncavity.UniformMesh import UniformMesh
from ncavity.VelocityField import VelocityField
from ncavity.exceptions.InvalidParameterError import InvalidParameterError


class Assembler:
    """
    Element-loop assembly of the broken forms

        a_h(u, v)    = sum_Q int_Q grad u : grad v
        b_h(v, q)    = -sum_Q int_Q (div v) q
        c_h(w; u, v) = sum_Q int_Q (w . grad) u . v

    over the P1-nonconforming velocity space with unknowns ordered [xi; eta].
    """

    def __init__(
        self,
        mesh: UniformMesh,
        lifting: BoundaryLifting = None,
        quadrature_points: int = 6,
    ) -> None:
        self.mesh = mesh
        self.lifting = lifting
        self.rule = gauss_rule(quadrature_points)
        self.jacobian = AffineMap.reference_cell(mesh).jacobian_determinant
        self.__phi = local_values(self.rule.points)
        self.__stiffness = None
        self.__divergence = None

    @property
    def scalar_size(self) -> int:
        return self.mesh.interior_vertex_count

    def _scatter_matrix(self, local: np.ndarray) -> sp.csr_matrix:
        """
        Sums per-cell 4 x 4 matrices [cell, test corner, trial corner] into a scalar block
        """
        corners = self.mesh.cell_corners
        rows = np.broadcast_to(corners[:, :, None], local.shape)
        cols = np.broadcast_to(corners[:, None, :], local.shape)
        keep = (rows >= 0) & (cols >= 0)
        m = self.scalar_size
        return sp.coo_matrix((local[keep], (rows[keep], cols[keep])), shape=(m, m)).tocsr()

    def _scatter_vector(self, local: np.ndarray) -> np.ndarray:
        corners = self.mesh.cell_corners
        keep = corners >= 0
        return np.bincount(corners[keep], weights=local[keep], minlength=self.scalar_size)

    def scalar_stiffness(self) -> sp.csr_matrix:
        if self.__stiffness is None:
            # grad phi_a . grad phi_b * h^2 = sx_a sx_b + sy_a sy_b
            local = CORNER_SIGNS @ CORNER_SIGNS.T
            self.__stiffness = self._scatter_matrix(
                np.broadcast_to(local, (self.mesh.cell_count, 4, 4)).copy()
            )
        return self.__stiffness

    def assemble_a(self, nu: float) -> sp.csr_matrix:
        if nu <= 0.0:
            raise InvalidParameterError(message=f"The viscosity must be positive, got {nu}.")
        stiffness = nu * self.scalar_stiffness()
        return sp.block_diag((stiffness, stiffness), format="csr")

    def assemble_b(self) -> sp.csr_matrix:
        if self.__divergence is None:
            mesh = self.mesh
            corners = mesh.cell_corners
            m = self.scalar_size
            cells = np.broadcast_to(np.arange(mesh.cell_count)[:, None], corners.shape)
            keep = corners >= 0
            rows = np.concatenate((cells[keep], cells[keep]))
            cols = np.concatenate((corners[keep], corners[keep] + m))
            # -int_Q d(phi_a)/dx = -h sx_a, and likewise for the eta block
            sx = np.broadcast_to(CORNER_SIGNS[:, 0], corners.shape)[keep]
            sy = np.broadcast_to(CORNER_SIGNS[:, 1], corners.shape)[keep]
            values = -mesh.h * np.concatenate((sx, sy))
            self.__divergence = sp.coo_matrix(
                (values, (rows, cols)), shape=(mesh.cell_count, 2 * m)
            ).tocsr()
        return self.__divergence

    def assemble_constraints(self) -> sp.csr_matrix:
        return pressure_constraint_rows(self.mesh)

    def _transport_at_quadrature(self, transport: VelocityField) -> np.ndarray:
        assert transport.mesh.n == self.mesh.n, "TRANSPORT_FIELD_MESH_MISMATCH"
        return transport.evaluate_local(self.rule.points)

    def assemble_convection(self, transport: VelocityField) -> sp.csr_matrix:
        """
        c_h(w; u, v) = v^T N_w u for the frozen transport field w
        """
        m = self.scalar_size
        if transport is None:
            return sp.csr_matrix((2 * m, 2 * m))
        w = self._transport_at_quadrature(transport)
        # s[c, b, d] = int_Q phi_b w_d
        s = np.einsum("q,qb,cqd->cbd", self.rule.weights * self.jacobian, self.__phi, w)
        local = np.einsum("cbd,ad->cba", s, CORNER_SIGNS) / self.mesh.h
        block = self._scatter_matrix(local)
        return sp.block_diag((block, block), format="csr")

    def assemble_rhs(self, nu: float, transport: VelocityField = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        f = -a_h(u_b, .) - c_h(w; u_b, .), g_Q = int_Q div u_b
        """
        m = self.scalar_size
        f = np.zeros(2 * m)
        g = np.zeros(self.mesh.cell_count)
        if self.lifting is None:
            return f, g

        points = self.rule.points
        wj = self.rule.weights * self.jacobian
        grad_lift = self.lifting.gradients(points)

        # -nu int grad u_b . grad phi_b, grad phi_b = s_b / h
        diffusion = np.einsum("q,cqd,bd->cb", wj, grad_lift, CORNER_SIGNS) / self.mesh.h
        local = -nu * diffusion
        if transport is not None:
            w = self._transport_at_quadrature(transport)
            advective = np.einsum("cqd,cqd->cq", w, grad_lift)
            local -= np.einsum("q,qb,cq->cb", wj, self.__phi, advective)

        f[:m] = self._scatter_vector(local)
        g[:] = grad_lift[:, :, 0] @ wj
        return f, g

    def assemble_load(self, forcing: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
        """
        int_Omega f . v for a body force given as forcing(x, y) -> (f1, f2)
        """
        m = self.scalar_size
        points = self.rule.points
        wj = self.rule.weights * self.jacobian
        centers = self.mesh.cell_centers
        x = centers[:, 0, None] + 0.5 * self.mesh.h * points[None, :, 0]
        y = centers[:, 1, None] + 0.5 * self.mesh.h * points[None, :, 1]
        f1, f2 = forcing(x, y)
        f1 = np.broadcast_to(f1, x.shape)
        f2 = np.broadcast_to(f2, x.shape)
        weighted = self.__phi * wj[:, None]
        load = np.zeros(2 * m)
        load[:m] = self._scatter_vector(f1 @ weighted)
        load[m:] = self._scatter_vector(f2 @ weighted)
        return load

    def assemble_system(
        self,
        nu: float,
        transport: VelocityField = None,
        with_convection: bool = True,
        forcing: Callable = None,
    ) -> SaddleSystem:
        """
        :param nu: Kinematic viscosity
        :param transport: Frozen transport field w (including the lifting); None drops convection
        :param with_convection: Set to False for the Stokes system
        :param forcing: Optional body force added to the momentum right-hand side
        """
        A = self.assemble_a(nu)
        convective = with_convection and transport is not None
        N = self.assemble_convection(transport) if convective else None
        f, g = self.assemble_rhs(nu, transport if convective else None)
        if forcing is not None:
            f = f + self.assemble_load(forcing)
        return SaddleSystem(
            A=A,
            B=self.assemble_b(),
            C=self.assemble_constraints(),
            f=f,
            g=g,
            N=N,
            nu=nu,
        )
