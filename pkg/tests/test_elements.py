import numpy as np
import pytest

from ncavity import BoundaryLifting, UniformMesh
from ncavity.AffineMap import AffineMap
from ncavity.DSSYReference import DSSYReference, dssy_ref_eval, theta, theta_derivative
from ncavity.P1NCBasis import P1NCBasis, local_gradients, local_values, p1nc_gradient
from ncavity.QuadratureRule import gauss_line_rule, gauss_rule
from ncavity.exceptions.IndexOutOfRangeError import IndexOutOfRangeError
from ncavity.exceptions.InvalidParameterError import InvalidParameterError

REFERENCE_EDGES = (
    # (fixed coordinate index, fixed value, midpoint)
    (0, 1.0, (1.0, 0.0)),
    (1, 1.0, (0.0, 1.0)),
    (0, -1.0, (-1.0, 0.0)),
    (1, -1.0, (0.0, -1.0)),
)


def _edge_points(axis, value, t):
    fixed = np.full_like(t, value)
    return np.column_stack((fixed, t)) if axis == 0 else np.column_stack((t, fixed))


def test_theta_values():
    assert theta(1, 0.0) == 0.0
    assert theta(1, 1.0) == pytest.approx(-2.0 / 3.0, abs=1e-15)
    assert theta(2, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert theta(0, 0.5) == pytest.approx(0.25)
    with pytest.raises(InvalidParameterError):
        theta(3, 0.5)


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_theta_is_even(ell):
    t = np.linspace(-1.0, 1.0, 11)
    assert np.allclose(theta(ell, t), theta(ell, -t), atol=1e-15)
    assert np.allclose(theta_derivative(ell, t), -theta_derivative(ell, -t), atol=1e-15)


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_kronecker_duality(ell):
    dssy = DSSYReference(ell)
    for j in range(1, 5):
        values = dssy.value(j, DSSYReference.NODES)
        expected = np.zeros(4)
        expected[j - 1] = 1.0
        assert np.allclose(values, expected, atol=1e-14, rtol=0.0), f"DSSY_{j}_NOT_DUAL"


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_partition_of_unity(ell):
    dssy = DSSYReference(ell)
    points = np.random.default_rng(7).uniform(-1.0, 1.0, size=(25, 2))
    total = sum(dssy.value(j, points) for j in range(1, 5))
    assert np.allclose(total, 1.0, atol=1e-13, rtol=0.0)


def test_top_node_values():
    value, gradient = dssy_ref_eval(2, (0.0, 1.0))
    assert value == pytest.approx(1.0, abs=1e-14)
    assert gradient.shape == (2,)
    assert dssy_ref_eval(2, (0.0, -1.0))[0] == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(InvalidParameterError):
        dssy_ref_eval(5, (0.0, 0.0))


@pytest.mark.parametrize("ell", [1, 2])
def test_mean_value_property(ell):
    dssy = DSSYReference(ell)
    t, w = gauss_line_rule(4)
    for j in range(1, 5):
        for axis, value, midpoint in REFERENCE_EDGES:
            mean = 0.5 * np.dot(w, dssy.value(j, _edge_points(axis, value, t)))
            assert abs(mean - dssy.value(j, np.array(midpoint))) <= 1e-13


def test_mean_value_property_fails_without_mean_free_theta():
    dssy = DSSYReference(0)
    t, w = gauss_line_rule(4)
    axis, value, midpoint = REFERENCE_EDGES[0]
    mean = 0.5 * np.dot(w, dssy.value(1, _edge_points(axis, value, t)))
    assert abs(mean - dssy.value(1, np.array(midpoint))) > 1e-3


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_gradient_matches_finite_differences(ell):
    dssy = DSSYReference(ell)
    points = np.random.default_rng(11).uniform(-0.9, 0.9, size=(20, 2))
    step = 1e-6
    ex = np.array([step, 0.0])
    ey = np.array([0.0, step])
    for j in range(1, 5):
        fd_x = (dssy.value(j, points + ex) - dssy.value(j, points - ex)) / (2.0 * step)
        fd_y = (dssy.value(j, points + ey) - dssy.value(j, points - ey)) / (2.0 * step)
        gradient = dssy.gradient(j, points)
        assert np.allclose(gradient[:, 0], fd_x, atol=1e-8, rtol=0.0)
        assert np.allclose(gradient[:, 1], fd_y, atol=1e-8, rtol=0.0)


def test_gauss_rule():
    assert gauss_rule(1).size == 1
    assert np.allclose(gauss_rule(1).points, [[0.0, 0.0]])
    assert gauss_rule(1).weights[0] == pytest.approx(4.0)
    for n_g in range(1, 9):
        assert gauss_rule(n_g).weights.sum() == pytest.approx(4.0, abs=1e-13)
    assert gauss_rule(2).integrate(lambda x, y: x ** 2 * y ** 2) == pytest.approx(4.0 / 9.0, abs=1e-14)
    assert gauss_rule(3).integrate(lambda x, y: theta(1, x)) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(InvalidParameterError):
        gauss_line_rule(0)


def test_local_p1nc_functions():
    midpoints = np.array([[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    values = local_values(midpoints)
    # Rows: bottom, right, top, left midpoints. Columns: corners BL, BR, TR, TL
    expected = np.array(
        [
            [1.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 1.0],
            [1.0, 0.0, 0.0, 1.0],
        ]
    )
    assert np.allclose(values, expected)
    assert np.allclose(local_values(np.zeros((1, 2))), 0.5)
    assert np.allclose(local_gradients(0.25).sum(axis=0), 0.0)


def test_p1nc_gradient(mesh4: UniformMesh):
    assert np.allclose(p1nc_gradient(mesh4, (1, 1), (1, 1)), [4.0, 4.0])
    assert np.allclose(p1nc_gradient(mesh4, (1, 1), (2, 1)), [-4.0, 4.0])
    assert np.allclose(p1nc_gradient(mesh4, (1, 1), (2, 2)), [-4.0, -4.0])
    assert np.allclose(p1nc_gradient(mesh4, (1, 1), (1, 2)), [4.0, -4.0])
    with pytest.raises(InvalidParameterError):
        p1nc_gradient(mesh4, (1, 1), (3, 3))


def test_p1nc_basis(mesh4: UniformMesh):
    basis = P1NCBasis(mesh4, 2, 2)
    assert basis.index == mesh4.vertex_index(2, 2)
    cells = basis.supporting_cells()
    assert cells == [(2, 2), (3, 2), (3, 3), (2, 3)]
    assert np.allclose(sum(basis.gradient(*c) for c in cells), 0.0)
    # Value 1 at the midpoints of the four edges meeting at V_22, 0 at the far ones
    assert basis.value(0.5, 0.375, 2, 2) == pytest.approx(1.0)
    assert basis.value(0.375, 0.5, 2, 2) == pytest.approx(1.0)
    assert basis.value(0.25, 0.375, 2, 2) == pytest.approx(0.0)
    assert basis.value(0.625, 0.5, 3, 3) == pytest.approx(1.0)
    assert basis.value(0.625, 0.75, 3, 3) == pytest.approx(0.0)
    with pytest.raises(IndexOutOfRangeError):
        P1NCBasis(mesh4, 0, 2)


def test_affine_map(mesh4: UniformMesh):
    affine = AffineMap(mesh4, 2, 3)
    assert affine.jacobian_determinant == pytest.approx(0.25 * 0.25 / 4.0)
    assert affine.gradient_scale == pytest.approx(8.0)
    physical = affine.to_physical(DSSYReference.NODES)
    assert np.allclose(physical, [[0.5, 0.625], [0.375, 0.75], [0.25, 0.625], [0.375, 0.5]])
    assert np.allclose(affine.to_reference(physical), DSSYReference.NODES)
    assert affine.contains((0.5, 0.75))
    assert not affine.contains((0.6, 0.75))


def test_reference_cell_map_scalings(mesh4: UniformMesh):
    reference = AffineMap.reference_cell(mesh4)
    other = AffineMap(mesh4, 3, 4)
    assert reference.jacobian_determinant == other.jacobian_determinant == pytest.approx(mesh4.h ** 2 / 4.0)
    assert reference.gradient_scale == other.gradient_scale == pytest.approx(2.0 / mesh4.h)
    assert reference.edge_jacobian == pytest.approx(mesh4.h / 2.0)
    assert np.allclose(reference.to_physical((0.0, 0.0)), mesh4.cell_center(1, 1))


def test_lifting_gradient_uses_map_scaling(mesh4: UniformMesh):
    lifting = BoundaryLifting(mesh4)
    points = np.array([[0.2, -0.3], [-0.5, 0.6], [0.0, 0.9]])
    scale = AffineMap.reference_cell(mesh4).gradient_scale
    eps = 1e-6
    gradients = lifting.gradients(points)
    for d in range(2):
        shift = np.zeros(2)
        shift[d] = eps
        fd = (lifting.values(points + shift) - lifting.values(points - shift)) / (2.0 * eps) * scale
        assert np.allclose(gradients[..., d], fd, atol=1e-5)
