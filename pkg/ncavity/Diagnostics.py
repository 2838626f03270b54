from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ncavity.AffineMap import AffineMap
from ncavity.PressureField import PressureField
from ncavity.QuadratureRule import gauss_line_rule, gauss_rule
from ncavity.StreamFunction import StreamFunction
from ncavity.VelocityField import VelocityField
from ncavity.constants.ReferenceTable import ReferenceTable
from ncavity.exceptions.EmptyRegionError import EmptyRegionError
from ncavity.exceptions.InvalidParameterError import InvalidParameterError

MESH_LINE_TOLERANCE = 1e-12

SECONDARY_REGIONS = {
    "bottom_left": (0.0, 0.25, 0.0, 0.25),
    "bottom_right": (0.75, 1.0, 0.0, 0.25),
    "top_left": (0.0, 0.25, 0.75, 1.0),
}


@dataclass(frozen=True)
class VortexRecord:
    psi: float
    omega: float
    x: float
    y: float


@dataclass
class DiagnosticsReport:
    n: int
    flow_rate_u: float
    flow_rate_v: float
    vorticity_integral: float
    max_cell_divergence: float
    cell_divergence: np.ndarray
    psi: np.ndarray
    psi_centers: np.ndarray
    omega_centers: np.ndarray
    primary_vortex: VortexRecord
    secondary_vortices: Dict[str, VortexRecord] = field(default_factory=dict)
    # Q_u and Q_v on the lines half a cell either side of the centre
    offset_flow_rates: Dict[str, float] = field(default_factory=dict)
    u_profile: Optional[List[Tuple[float, float]]] = None
    v_profile: Optional[List[Tuple[float, float]]] = None

    def to_dict(self) -> dict:
        """
        JSON-ready summary; the grids are left out (they go to CSV)
        """
        divergence = self.cell_divergence
        n = self.n
        k, j = np.divmod(np.arange(n * n), n)
        red_mask = (j + k) % 2 == 0
        h3 = (1.0 / n) ** 3
        red_signs = np.unique(np.sign(divergence[red_mask]))
        black_signs = np.unique(np.sign(divergence[~red_mask]))
        divergence_by_color = {
            "red_mean": float(divergence[red_mask].mean()),
            "black_mean": float(divergence[~red_mask].mean()),
            "sign_alternates": bool(
                len(red_signs) == 1 and len(black_signs) == 1 and red_signs[0] == -black_signs[0] != 0
            ),
        }
        return {
            "n": self.n,
            "flow_rate_u": self.flow_rate_u,
            "flow_rate_v": self.flow_rate_v,
            "offset_flow_rates": dict(self.offset_flow_rates),
            "vorticity_integral": self.vorticity_integral,
            "compatibility_defect": abs(self.vorticity_integral + 1.0),
            "max_cell_divergence": self.max_cell_divergence,
            "divergence_law_defect": float(np.max(np.abs(np.abs(divergence) - h3))),
            "cell_divergence": divergence_by_color,
            "primary_vortex": asdict(self.primary_vortex),
            "secondary_vortices": {
                name: asdict(record) for name, record in self.secondary_vortices.items()
            },
            "u_profile": self.u_profile,
            "v_profile": self.v_profile,
        }


class Diagnostics:
    """
    Accuracy indicators and post-processing of a discrete velocity field
    """

    def __init__(
        self,
        velocity: VelocityField,
        pressure: PressureField = None,
        quadrature_points: int = 6,
    ) -> None:
        self.velocity = velocity
        self.pressure = pressure
        self.mesh = velocity.mesh
        self.rule = gauss_rule(quadrature_points)
        self.line_nodes, self.line_weights = gauss_line_rule(quadrature_points)
        self.stream = StreamFunction(self.mesh, quadrature_points)
        self.__psi = None

    @property
    def _cell_weights(self) -> np.ndarray:
        return self.rule.weights * AffineMap.reference_cell(self.mesh).jacobian_determinant

    def _line_columns(self, c: float) -> List[Tuple[int, float]]:
        """
        (column or row number, reference coordinate) pairs whose cells carry the line at c.
        A mesh line yields its two one-sided traces, any other line a single interior one.
        """
        n, h = self.mesh.n, self.mesh.h
        scaled = c * n
        nearest = int(round(scaled))
        if abs(scaled - nearest) <= MESH_LINE_TOLERANCE * n:
            if nearest in (0, n):
                raise InvalidParameterError(message=f"The line at {c} coincides with the cavity wall.")
            return [(nearest, 1.0), (nearest + 1, -1.0)]
        column = int(np.floor(scaled)) + 1
        return [(column, 2.0 * (c - (column - 0.5) * h) / h)]

    def _trace_integral(self, axis: str, line: int, ref: float) -> float:
        n = self.mesh.n
        t = self.line_nodes
        fixed = np.full_like(t, ref)
        idx = np.arange(n)
        if axis == "vertical":
            cells = idx * n + (line - 1)
            points = np.column_stack((fixed, t))
            component = 0
        else:
            cells = (line - 1) * n + idx
            points = np.column_stack((t, fixed))
            component = 1
        values = self.velocity.evaluate_cells(cells, points)[..., component]
        return float(np.sum(values @ self.line_weights) * AffineMap.reference_cell(self.mesh).edge_jacobian)

    def flow_rate_traces(self, axis: str, c: float) -> Tuple[float, float]:
        """
        Signed integrals of u(c, y) dy (axis="vertical") or v(x, c) dx (axis="horizontal")
        from the left/lower and right/upper sides of the line
        """
        if axis not in ("vertical", "horizontal"):
            raise InvalidParameterError(message=f"axis must be 'vertical' or 'horizontal', got {axis!r}.")
        if not 0.0 < c < 1.0:
            raise InvalidParameterError(message=f"The line coordinate must lie in (0, 1), got {c}.")
        traces = [self._trace_integral(axis, line, ref) for line, ref in self._line_columns(c)]
        if len(traces) == 1:
            traces = traces * 2
        return traces[0], traces[1]

    def flow_rate(self, axis: str, c: float) -> float:
        lower, upper = self.flow_rate_traces(axis, c)
        return abs(0.5 * (lower + upper))

    def vorticity_integral(self) -> float:
        grads = self.velocity.gradient_local(self.rule.points)
        omega = grads[:, :, 1, 0] - grads[:, :, 0, 1]
        return float(np.sum(omega @ self._cell_weights))

    def cell_divergence(self) -> Tuple[np.ndarray, float]:
        grads = self.velocity.gradient_local(self.rule.points)
        divergence = (grads[:, :, 0, 0] + grads[:, :, 1, 1]) @ self._cell_weights
        return divergence, float(np.max(np.abs(divergence)))

    def vorticity_at_centers(self) -> np.ndarray:
        grads = self.velocity.gradient_local(np.zeros((1, 2)))[:, 0]
        return grads[:, 1, 0] - grads[:, 0, 1]

    def stream_function(self) -> np.ndarray:
        if self.__psi is None:
            self.__psi = self.stream.solve(self.velocity)
        return self.__psi

    def stream_at_centers(self, psi: np.ndarray = None) -> np.ndarray:
        return self.stream.at_centers(self.stream_function() if psi is None else psi)

    def locate_vortex(
        self,
        psi_centers: np.ndarray,
        omega_centers: np.ndarray,
        region: Sequence[float] = (0.0, 1.0, 0.0, 1.0),
        mode: str = "min",
    ) -> VortexRecord:
        """
        Extremum of psi over the cell centers inside region = (x0, x1, y0, y1).
        Ties go to the first cell in row-major order.
        """
        if mode not in ("min", "max"):
            raise InvalidParameterError(message=f"mode must be 'min' or 'max', got {mode!r}.")
        x0, x1, y0, y1 = region
        centers = self.mesh.cell_centers
        inside = np.flatnonzero(
            (centers[:, 0] >= x0) & (centers[:, 0] <= x1) & (centers[:, 1] >= y0) & (centers[:, 1] <= y1)
        )
        if len(inside) == 0:
            raise EmptyRegionError(message=f"No cell center lies in the region {tuple(region)}.")
        values = np.asarray(psi_centers)[inside]
        pick = inside[np.argmin(values) if mode == "min" else np.argmax(values)]
        return VortexRecord(
            psi=float(psi_centers[pick]),
            omega=float(omega_centers[pick]),
            x=float(centers[pick, 0]),
            y=float(centers[pick, 1]),
        )

    def secondary_vortices(self, psi_centers: np.ndarray, omega_centers: np.ndarray) -> Dict[str, VortexRecord]:
        return {
            name: self.locate_vortex(psi_centers, omega_centers, region, mode="max")
            for name, region in SECONDARY_REGIONS.items()
        }

    def _candidates(self, coordinate: float) -> List[int]:
        n = self.mesh.n
        scaled = coordinate * n
        nearest = int(round(scaled))
        if abs(scaled - nearest) <= MESH_LINE_TOLERANCE * n:
            return [c for c in (nearest, nearest + 1) if 1 <= c <= n]
        return [int(np.floor(scaled)) + 1]

    def point_value(self, x: float, y: float) -> np.ndarray:
        """
        Velocity at (x, y), averaged over every cell whose closure contains the point
        """
        values = [
            self.velocity.evaluate((x, y), (j, k))
            for j in self._candidates(x)
            for k in self._candidates(y)
        ]
        return np.mean(values, axis=0)

    def centerline_profiles(
        self,
        y_stations: Sequence[float] = None,
        x_stations: Sequence[float] = None,
    ) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]]]:
        """
        u(0.5, y) and v(x, 0.5); boundary stations return the Dirichlet data
        """
        if y_stations is None:
            y_stations = ReferenceTable.u_stations(interior_only=False)
        if x_stations is None:
            x_stations = ReferenceTable.v_stations(interior_only=False)

        u_profile = []
        for y in y_stations:
            if y <= 0.0:
                value = 0.0
            elif y >= 1.0:
                value = 1.0
            else:
                value = float(self.point_value(0.5, y)[0])
            u_profile.append((float(y), value))

        v_profile = []
        for x in x_stations:
            if x <= 0.0 or x >= 1.0:
                value = 0.0
            else:
                value = float(self.point_value(x, 0.5)[1])
            v_profile.append((float(x), value))

        return u_profile, v_profile

    def broken_h1_error(self, exact_gradient: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
        """
        :param exact_gradient: (x, y) -> array [..., component, direction]
        """
        x, y = self._quadrature_coordinates()
        difference = self.velocity.gradient_local(self.rule.points) - exact_gradient(x, y)
        return float(np.sqrt(np.sum(np.sum(difference ** 2, axis=(2, 3)) @ self._cell_weights)))

    def velocity_l2_error(self, exact_velocity: Callable) -> float:
        x, y = self._quadrature_coordinates()
        u, v = exact_velocity(x, y)
        values = self.velocity.evaluate_local(self.rule.points)
        squared = (values[..., 0] - u) ** 2 + (values[..., 1] - v) ** 2
        return float(np.sqrt(np.sum(squared @ self._cell_weights)))

    def pressure_l2_error(self, exact_pressure: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
        if self.pressure is None:
            raise InvalidParameterError(message="No pressure field was provided.")
        x, y = self._quadrature_coordinates()
        squared = (self.pressure.gamma[:, None] - exact_pressure(x, y)) ** 2
        return float(np.sqrt(np.sum(squared @ self._cell_weights)))

    def _quadrature_coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        centers = self.mesh.cell_centers
        half = 0.5 * self.mesh.h
        x = centers[:, 0, None] + half * self.rule.points[None, :, 0]
        y = centers[:, 1, None] + half * self.rule.points[None, :, 1]
        return x, y

    def diagnose(self, profiles: bool = True) -> DiagnosticsReport:
        divergence, max_divergence = self.cell_divergence()
        psi = self.stream_function()
        psi_centers = self.stream_at_centers(psi)
        omega_centers = self.vorticity_at_centers()
        u_profile, v_profile = self.centerline_profiles() if profiles else (None, None)
        half = 0.5 * self.mesh.h
        offset_flow_rates = {
            f"flow_rate_{name}(0.5{sign}h/2)": self.flow_rate(axis, 0.5 + factor * half)
            for name, axis in (("u", "vertical"), ("v", "horizontal"))
            for sign, factor in (("-", -1.0), ("+", 1.0))
        }
        return DiagnosticsReport(
            n=self.mesh.n,
            flow_rate_u=self.flow_rate("vertical", 0.5),
            flow_rate_v=self.flow_rate("horizontal", 0.5),
            vorticity_integral=self.vorticity_integral(),
            max_cell_divergence=max_divergence,
            cell_divergence=divergence,
            psi=psi,
            psi_centers=psi_centers,
            omega_centers=omega_centers,
            primary_vortex=self.locate_vortex(psi_centers, omega_centers, mode="min"),
            secondary_vortices=self.secondary_vortices(psi_centers, omega_centers),
            offset_flow_rates=offset_flow_rates,
            u_profile=u_profile,
            v_profile=v_profile,
        )


def diagnose(velocity: VelocityField, pressure: PressureField = None, profiles: bool = True) -> DiagnosticsReport:
    return Diagnostics(velocity, pressure).diagnose(profiles=profiles)
