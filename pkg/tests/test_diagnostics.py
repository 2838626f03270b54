import numpy as np
import pytest

from ncavity import BoundaryLifting, Diagnostics, UniformMesh, VelocityField
from ncavity.Diagnostics import diagnose
from ncavity.StreamFunction import StreamFunction
from ncavity.constants.ReferenceTable import ReferenceTable
from ncavity.exceptions.EmptyRegionError import EmptyRegionError
from ncavity.exceptions.InvalidParameterError import InvalidParameterError
from ncavity.exceptions.NeumannIncompatibilityError import NeumannIncompatibilityError


def _single_xi(mesh: UniformMesh, j: int, k: int) -> VelocityField:
    xi = np.zeros(mesh.interior_vertex_count)
    xi[mesh.vertex_index(j, k)] = 1.0
    return VelocityField(mesh, xi=xi)


def _random_field(mesh: UniformMesh, seed: int = 29) -> VelocityField:
    rng = np.random.default_rng(seed)
    m = mesh.interior_vertex_count
    return VelocityField(mesh, rng.normal(size=m), rng.normal(size=m), BoundaryLifting(mesh))


def test_flow_rate_of_a_single_basis_function(mesh4: UniformMesh):
    diagnostics = Diagnostics(_single_xi(mesh4, 2, 2))
    left, right = diagnostics.flow_rate_traces("vertical", 0.5)
    assert left == pytest.approx(2.0 * mesh4.h, abs=1e-14)
    assert right == pytest.approx(2.0 * mesh4.h, abs=1e-14)
    assert diagnostics.flow_rate("vertical", 0.5) == pytest.approx(0.5, abs=1e-14)
    assert diagnostics.flow_rate("horizontal", 0.5) == pytest.approx(0.0, abs=1e-14)


def test_flow_rate_traces_agree_on_mesh_lines(mesh8: UniformMesh):
    diagnostics = Diagnostics(_random_field(mesh8))
    for c in (0.25, 0.5, 0.625):
        for axis in ("vertical", "horizontal"):
            lower, upper = diagnostics.flow_rate_traces(axis, c)
            assert lower == pytest.approx(upper, abs=1e-12)


def test_flow_rate_validation(mesh4: UniformMesh):
    diagnostics = Diagnostics(VelocityField(mesh4))
    with pytest.raises(InvalidParameterError):
        diagnostics.flow_rate("diagonal", 0.5)
    with pytest.raises(InvalidParameterError):
        diagnostics.flow_rate("vertical", 1.0)
    # Within round-off of a wall
    with pytest.raises(InvalidParameterError):
        diagnostics.flow_rate("vertical", 1.0 - 1e-14)
    with pytest.raises(InvalidParameterError):
        diagnostics.flow_rate("horizontal", 1e-14)
    assert diagnostics.flow_rate("horizontal", 1e-3) == 0.0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_vorticity_compatibility(mesh8: UniformMesh, seed):
    assert Diagnostics(_random_field(mesh8, seed)).vorticity_integral() == pytest.approx(-1.0, abs=1e-12)


def test_lifting_divergence(mesh8: UniformMesh):
    lid_only = VelocityField(mesh8, lifting=BoundaryLifting(mesh8))
    divergence, largest = Diagnostics(lid_only).cell_divergence()
    h = mesh8.h
    assert divergence[mesh8.red_mask].sum() == pytest.approx(-0.5 * h, abs=1e-14)
    assert divergence[mesh8.cell_index(1, 8)] == pytest.approx(0.5 * h, abs=1e-14)
    assert divergence.sum() == pytest.approx(0.0, abs=1e-14)
    assert largest == pytest.approx(0.5 * h)


def test_stream_function_of_rigid_rotation():
    mesh = UniformMesh(16)
    stream = StreamFunction(mesh)
    psi = stream.solve_exact(
        lambda x, y: np.full_like(x, 2.0),
        lambda x, y: (-(y - 0.5), x - 0.5),
    )
    grid = stream.grid(psi)
    assert grid.shape == (17, 17)
    assert grid[0, 0] == 0.0

    t = np.linspace(0.0, 1.0, 17)
    x, y = np.meshgrid(t, t, indexing="xy")
    exact = 0.25 - 0.5 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)
    assert np.max(np.abs(grid - exact)) <= 1e-3
    # The extremum sits at the centre vertex
    assert np.unravel_index(np.argmax(grid), grid.shape) == (8, 8)


def test_incompatible_neumann_data(mesh4: UniformMesh):
    stream = StreamFunction(mesh4)
    with pytest.raises(NeumannIncompatibilityError):
        stream.solve_exact(lambda x, y: np.ones_like(x), lambda x, y: (0.0 * x, 0.0 * y))


def test_stream_function_of_discrete_field(mesh8: UniformMesh):
    diagnostics = Diagnostics(_random_field(mesh8))
    psi = diagnostics.stream_function()
    assert psi.shape == (81,)
    assert psi[0] == 0.0
    assert diagnostics.stream_function() is psi
    assert diagnostics.stream_at_centers().shape == (64,)


def test_locate_vortex_ties_and_regions(mesh8: UniformMesh):
    diagnostics = Diagnostics(VelocityField(mesh8))
    flat = np.zeros(64)
    omega = np.arange(64, dtype=float)

    first = diagnostics.locate_vortex(flat, omega, mode="min")
    assert (first.x, first.y) == (0.0625, 0.0625)
    assert first.omega == 0.0

    corner = diagnostics.locate_vortex(flat, omega, region=(0.75, 1.0, 0.0, 0.25), mode="max")
    assert (corner.x, corner.y) == (0.8125, 0.0625)

    psi = np.zeros(64)
    psi[mesh8.cell_index(5, 6)] = -0.3
    vortex = diagnostics.locate_vortex(psi, omega)
    assert vortex.psi == -0.3
    assert (vortex.x, vortex.y) == (0.5625, 0.6875)

    with pytest.raises(EmptyRegionError):
        diagnostics.locate_vortex(flat, omega, region=(0.5, 0.52, 0.5, 0.52))
    with pytest.raises(InvalidParameterError):
        diagnostics.locate_vortex(flat, omega, mode="saddle")


def test_secondary_vortices(mesh8: UniformMesh):
    diagnostics = Diagnostics(VelocityField(mesh8))
    psi = np.zeros(64)
    psi[mesh8.cell_index(1, 1)] = 1e-5
    records = diagnostics.secondary_vortices(psi, np.zeros(64))
    assert set(records) == {"bottom_left", "bottom_right", "top_left"}
    assert records["bottom_left"].psi == 1e-5


def test_point_value_averages_on_mesh_lines(mesh4: UniformMesh):
    diagnostics = Diagnostics(_single_xi(mesh4, 2, 2))
    # At V_22 every adjacent cell extrapolates its corner function to 3/2
    assert np.allclose(diagnostics.point_value(0.5, 0.5), [1.5, 0.0])
    assert np.allclose(diagnostics.point_value(0.5, 0.375), [1.0, 0.0])


def test_centerline_profiles_boundary_stations(mesh8: UniformMesh):
    diagnostics = Diagnostics(VelocityField(mesh8, lifting=BoundaryLifting(mesh8)))
    u_profile, v_profile = diagnostics.centerline_profiles()
    assert len(u_profile) == len(ReferenceTable.u_stations(interior_only=False))
    assert len(v_profile) == len(ReferenceTable.v_stations(interior_only=False))
    u_values = dict(u_profile)
    v_values = dict(v_profile)
    assert u_values[0.0] == 0.0
    assert u_values[1.0] == 1.0
    assert v_values[0.0] == 0.0
    assert v_values[1.0] == 0.0


def test_cavity_indicators(cavity_re100_n16):
    solver, velocity, pressure, _ = cavity_re100_n16
    report = diagnose(velocity, pressure, profiles=True)
    h = solver.mesh.h

    assert report.flow_rate_u <= 1e-10
    assert report.flow_rate_v <= 1e-10
    assert abs(report.vorticity_integral + 1.0) <= 1e-10
    assert report.max_cell_divergence == pytest.approx(h ** 3)
    assert set(report.offset_flow_rates) == {
        "flow_rate_u(0.5-h/2)", "flow_rate_u(0.5+h/2)", "flow_rate_v(0.5-h/2)", "flow_rate_v(0.5+h/2)"
    }
    assert max(report.offset_flow_rates.values()) <= 1e-10

    primary = report.primary_vortex
    assert -0.12 <= primary.psi <= -0.08
    assert primary.omega < 0.0
    assert 0.5 <= primary.x <= 0.7
    assert 0.65 <= primary.y <= 0.82

    summary = report.to_dict()
    assert summary["cell_divergence"]["sign_alternates"] is True
    assert summary["divergence_law_defect"] <= 1e-11 * h ** 3 + 1e-13
    assert summary["compatibility_defect"] <= 1e-10
    assert len(summary["u_profile"]) == 17
    assert "psi" not in summary


def test_report_without_profiles(mesh8: UniformMesh):
    report = Diagnostics(_random_field(mesh8)).diagnose(profiles=False)
    assert report.u_profile is None
    assert report.psi_centers.shape == (64,)
    assert report.omega_centers.shape == (64,)
