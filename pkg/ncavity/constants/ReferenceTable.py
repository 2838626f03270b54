"""
Published lid-driven cavity reference data.

Every value is tagged with the table it comes from so that the benchmark summary
can name the provenance of each comparison. ``None`` marks a gap in the source
table (printed as "NA" there).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True)
class ReferenceValue:
    quantity: str
    value: Optional[float]
    table: str
    column: str


# Velocity/pressure DOF counts of the P1-nonconforming x checkerboard-free P0 pair.
# The N=128 entry is printed as 32256 in the source, 2*(N-1)^2 = 32258.
DOF_COUNTS = {
    16: (450, 254),
    32: (1922, 1022),
    64: (7938, 4094),
    128: (32256, 16382),
}

PROFILE_COLUMNS = ("botella_peyret", "bruneau_saad", "guermond_minev", "nc_256", "nc_512")

# u(0.5, y) at Re=1000
U_CENTERLINE_RE1000 = (
    (0.0000, 0.0000000, 0.00000, 0.0000000, 0.0000000, 0.0000000),
    (0.0312, -0.2279225, None, -0.2279177, -0.2274204, -0.2276650),
    (0.0391, -0.2936869, -0.29330, -0.2936814, -0.2930076, -0.2933552),
    (0.0469, -0.3553213, None, -0.3553154, -0.3545665, -0.3549485),
    (0.0547, -0.4103754, -0.41018, -0.4103691, -0.4096654, -0.4100002),
    (0.0937, -0.5264392, None, -0.5264320, -0.5271749, -0.5264518),
    (0.1406, -0.4264545, -0.42645, -0.4264492, -0.4276315, -0.4265356),
    (0.1953, -0.3202137, None, -0.3202068, -0.3209943, -0.3200577),
    (0.5000, 0.0257995, 0.02580, 0.0257987, 0.0256839, 0.0257175),
    (0.7656, 0.3253592, None, 0.3253529, 0.3259697, 0.3252217),
    (0.7734, 0.3339924, 0.33398, 0.3339860, 0.3346373, 0.3338694),
    (0.8437, 0.3769189, None, 0.3769119, 0.3778450, 0.3769140),
    (0.9062, 0.3330442, 0.33290, 0.3330381, 0.3339829, 0.3331021),
    (0.9219, 0.3099097, None, 0.3099041, 0.3108006, 0.3099725),
    (0.9297, 0.2962703, 0.29622, 0.2962650, 0.2971221, 0.2963312),
    (0.9375, 0.2807056, None, 0.2807005, 0.2815029, 0.2807605),
    (1.0000, 0.0000000, 0.00000, 0.0000000, 0.0000000, 0.0000000),
)

# v(x, 0.5) at Re=1000. The x=1 row is printed as -1 in every column of the
# source and the 512-mesh value at x=0.5 carries a flipped sign; neither gates.
V_CENTERLINE_RE1000 = (
    (1.0000, -1.0000000, -1.00000, -1.0000000, -1.0000000, -1.0000000),
    (0.9766, -0.6644227, None, -0.6644194, -0.6666343, -0.6648562),
    (0.9688, -0.5808359, -0.58031, -0.5808318, -0.5831751, -0.5812660),
    (0.9609, -0.5169277, None, -0.5169214, -0.5190905, -0.5172781),
    (0.9531, -0.4723329, -0.47239, -0.4723260, -0.4741970, -0.4725743),
    (0.8516, -0.3372212, None, -0.3372128, -0.3380993, -0.3370508),
    (0.7344, -0.1886747, -0.18861, -0.1886680, -0.1890994, -0.1884232),
    (0.6172, -0.0570178, None, -0.0570151, -0.0570951, -0.0569011),
    (0.5000, 0.0620561, 0.06205, 0.0620535, 0.0622962, -0.0619466),
    (0.4531, 0.1081999, None, 0.1081955, 0.1085611, 0.1080176),
    (0.2813, 0.2803696, 0.28040, 0.2803632, 0.2811184, 0.2802013),
    (0.1719, 0.3885691, None, 0.3885624, 0.3894565, 0.3885914),
    (0.1016, 0.3004561, 0.30029, 0.3004504, 0.3006758, 0.3004357),
    (0.0703, 0.2228955, None, 0.2228928, 0.2228075, 0.2228534),
    (0.0625, 0.2023300, 0.20227, 0.2023277, 0.2021815, 0.2022834),
    (0.0547, 0.1812881, None, 0.1812863, 0.1810885, 0.1812376),
    (0.0000, 0.0000000, 0.00000, 0.0000000, 0.0000000, 0.0000000),
)

# Re -> (psi_min, omega, (x, y)) for the nonconforming element on the 256 mesh
PRIMARY_VORTEX = {
    100: (-0.103531, 3.16206, (0.6152, 0.7363)),
    400: (-0.114071, 2.29821, (0.5527, 0.6035)),
    1000: (-0.119186, 2.07216, (0.5293, 0.5645)),
    2500: (-0.122151, 1.98912, (0.5215, 0.5449)),
    3200: (-0.122713, 1.97778, (0.5176, 0.5410)),
    5000: (-0.123658, 1.96650, (0.5137, 0.5371)),
}

# Ghia et al. rows of the same table, kept for the literature comparison
PRIMARY_VORTEX_GHIA = {
    100: (-0.103423, 3.16646, (0.6172, 0.7344)),
    400: (-0.113909, 2.29469, (0.5547, 0.6055)),
    1000: (-0.117929, 2.04968, (0.5313, 0.5625)),
    3200: (-0.120377, 1.98860, (0.5165, 0.5469)),
    5000: (-0.118966, 1.86016, (0.5117, 0.5352)),
}

SECONDARY_REGIONS = ("bottom_left", "bottom_right", "top_left")

# Re -> {region: (psi_max, (x, y))}
SECONDARY_VORTICES = {
    100: {
        "bottom_left": (1.7368e-06, (0.0332, 0.0332)),
        "bottom_right": (1.2597e-05, (0.9434, 0.0605)),
        "top_left": None,
    },
    400: {
        "bottom_left": (1.4100e-05, (0.0488, 0.0488)),
        "bottom_right": (6.4495e-04, (0.8848, 0.1230)),
        "top_left": None,
    },
    1000: {
        "bottom_left": (2.3223e-04, (0.0840, 0.0762)),
        "bottom_right": (1.7319e-03, (0.8652, 0.1113)),
        "top_left": None,
    },
    2500: {
        "bottom_left": (9.2779e-04, (0.0840, 0.1113)),
        "bottom_right": (2.6661e-03, (0.8340, 0.0918)),
        "top_left": (3.3918e-04, (0.0410, 0.8887)),
    },
    3200: {
        "bottom_left": (1.1104e-03, (0.0801, 0.1191)),
        "bottom_right": (2.8323e-03, (0.8223, 0.0840)),
        "top_left": (7.0750e-04, (0.0527, 0.8965)),
    },
    5000: {
        "bottom_left": (1.3660e-03, (0.0723, 0.1387)),
        "bottom_right": (3.0641e-03, (0.8027, 0.0723)),
        "top_left": (1.4566e-03, (0.0645, 0.9082)),
    },
}

# Re -> (Q_u at x=0.5, Q_v at y=0.5) on the 256 mesh
FLOW_RATES = {
    100: (1.9039e-16, 1.2514e-13),
    400: (2.1554e-16, 1.3347e-13),
    1000: (3.5996e-17, 1.1037e-14),
    2500: (2.4373e-16, 1.5280e-13),
    3200: (2.1814e-16, 5.1092e-14),
    5000: (3.5562e-16, 1.2311e-13),
}

# Re -> (|int omega + 1|, max cell divergence) on the 256 mesh
INCOMPRESSIBILITY = {
    100: (2.8866e-15, 5.9605e-08),
    400: (2.2204e-16, 5.9605e-08),
    1000: (2.6645e-15, 5.9605e-08),
    2500: (1.1102e-15, 5.9605e-08),
    3200: (3.9968e-15, 5.9605e-08),
    5000: (1.4433e-15, 5.9605e-08),
}

# Entries known to be misprinted in the source tables; compared but never gating.
# Keys are (table, N, quantity) or (table, quantity, column).
KNOWN_MISPRINTS = frozenset(
    {
        ("dof_counts", 128, "velocity_dofs"),
        ("v_centerline_re1000", "v(0.5000)", "nc_512"),
    }
)

STREAM_FUNCTION_LEVELS = (
    -0.1175, -0.1150, -0.11, -0.1, -0.09, -0.07, -0.05, -0.03, -0.01,
    -1.0e-04, -1.0e-05, -1.0e-07, -1.0e-10, 1.0e-08, 1.0e-07,
    1.0e-06, 1.0e-05, 5.0e-05, 1.0e-04, 2.5e-04, 5.0e-04,
    1.0e-03, 1.5e-03, 3.0e-03,
)

VORTICITY_LEVELS = (
    -5.0, -4.0, -3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0,
)


class ReferenceTable:
    """
    Lookup helpers over the embedded tables. All methods return ``ReferenceValue``
    objects (or plain tuples for station lists) so callers never touch the raw layout.
    """

    DOF_TABLE = "dof_counts"
    U_PROFILE_TABLE = "u_centerline_re1000"
    V_PROFILE_TABLE = "v_centerline_re1000"
    PRIMARY_TABLE = "primary_vortex"
    SECONDARY_TABLE = "secondary_vortices"
    FLOW_RATE_TABLE = "flow_rates"
    INCOMPRESSIBILITY_TABLE = "incompressibility"
    CONTOUR_TABLE = "contour_levels"

    @staticmethod
    def dof_counts(n: int) -> Union[tuple, None]:
        return DOF_COUNTS.get(int(n))

    @staticmethod
    def u_stations(interior_only: bool = True) -> tuple:
        rows = U_CENTERLINE_RE1000[1:-1] if interior_only else U_CENTERLINE_RE1000
        return tuple(row[0] for row in rows)

    @staticmethod
    def v_stations(interior_only: bool = True) -> tuple:
        rows = V_CENTERLINE_RE1000[1:-1] if interior_only else V_CENTERLINE_RE1000
        return tuple(row[0] for row in rows)

    @classmethod
    def u_profile(cls, y: float, column: str = "botella_peyret") -> ReferenceValue:
        return cls._profile_value(U_CENTERLINE_RE1000, cls.U_PROFILE_TABLE, "u", y, column)

    @classmethod
    def v_profile(cls, x: float, column: str = "botella_peyret") -> ReferenceValue:
        return cls._profile_value(V_CENTERLINE_RE1000, cls.V_PROFILE_TABLE, "v", x, column)

    @staticmethod
    def _profile_value(rows, table, name, station, column) -> ReferenceValue:
        assert column in PROFILE_COLUMNS, "UNKNOWN_PROFILE_COLUMN"
        index = PROFILE_COLUMNS.index(column) + 1
        for row in rows:
            if abs(row[0] - station) < 5e-5:
                return ReferenceValue(
                    quantity=f"{name}({station:.4f})",
                    value=row[index],
                    table=table,
                    column=column,
                )
        return ReferenceValue(
            quantity=f"{name}({station:.4f})", value=None, table=table, column=column
        )

    @classmethod
    def primary_vortex(cls, re: float, source: str = "nc_256") -> dict:
        data = PRIMARY_VORTEX if source == "nc_256" else PRIMARY_VORTEX_GHIA
        row = data.get(_re_key(re))
        psi, omega, location = row if row is not None else (None, None, (None, None))
        return {
            "psi_min": ReferenceValue("psi_min", psi, cls.PRIMARY_TABLE, source),
            "omega": ReferenceValue("omega", omega, cls.PRIMARY_TABLE, source),
            "x": ReferenceValue("x", location[0], cls.PRIMARY_TABLE, source),
            "y": ReferenceValue("y", location[1], cls.PRIMARY_TABLE, source),
        }

    @classmethod
    def secondary_vortex(cls, re: float, region: str) -> dict:
        assert region in SECONDARY_REGIONS, "UNKNOWN_SECONDARY_REGION"
        row = SECONDARY_VORTICES.get(_re_key(re), {}).get(region)
        psi, location = row if row is not None else (None, (None, None))
        return {
            "psi_max": ReferenceValue(f"{region}.psi_max", psi, cls.SECONDARY_TABLE, "nc_256"),
            "x": ReferenceValue(f"{region}.x", location[0], cls.SECONDARY_TABLE, "nc_256"),
            "y": ReferenceValue(f"{region}.y", location[1], cls.SECONDARY_TABLE, "nc_256"),
        }

    @classmethod
    def flow_rates(cls, re: float) -> dict:
        row = FLOW_RATES.get(_re_key(re), (None, None))
        return {
            "q_u": ReferenceValue("q_u(0.5)", row[0], cls.FLOW_RATE_TABLE, "nc_256"),
            "q_v": ReferenceValue("q_v(0.5)", row[1], cls.FLOW_RATE_TABLE, "nc_256"),
        }

    @classmethod
    def incompressibility(cls, re: float) -> dict:
        row = INCOMPRESSIBILITY.get(_re_key(re), (None, None))
        return {
            "compatibility": ReferenceValue(
                "|int omega + 1|", row[0], cls.INCOMPRESSIBILITY_TABLE, "nc_256"
            ),
            "max_cell_divergence": ReferenceValue(
                "max |int div u|", row[1], cls.INCOMPRESSIBILITY_TABLE, "nc_256"
            ),
        }

    @staticmethod
    def contour_levels() -> dict:
        return {
            "stream_function": list(STREAM_FUNCTION_LEVELS),
            "vorticity": list(VORTICITY_LEVELS),
        }


def _re_key(re: float):
    key = int(round(float(re)))
    return key if abs(key - float(re)) < 1e-9 else None
