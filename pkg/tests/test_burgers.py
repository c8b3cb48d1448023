import math

import numpy as np
import pytest

from projrom.burgers import (
    BurgersFom,
    BurgersParams,
    BurgersSampleMesh,
    burgers_apply_jacobian,
    burgers_velocity,
    godunov_flux,
)
from projrom.errors import ContractViolation, TopologyError
from projrom.fom import check_jacobian_action
from projrom.hyper import build_stencil_closure, select_sample_indices


def upwind_velocity(params, u):
    """Loop form of the positive-state upwind scheme."""
    dx = params.dx
    f = np.empty_like(u)
    for i in range(u.size):
        left = params.gamma if i == 0 else u[i - 1]
        x = (i + 0.5) * dx
        f[i] = -(0.5 * u[i] ** 2 - 0.5 * left**2) / dx + params.alpha * math.exp(params.beta * x)
    return f


def test_uniform_flow_without_source_is_steady():
    p = BurgersParams(alpha=0.0, gamma=1.0, num_cells=10)
    np.testing.assert_array_equal(burgers_velocity(p, np.ones(10)), np.zeros(10))


def test_hand_evaluated_four_cells():
    p = BurgersParams(num_cells=4)
    f = burgers_velocity(p, np.ones(4))
    expected = [
        (0.5 * 25 - 0.5 * 1) / 25 + 0.02 * math.exp(0.02 * 12.5),
        0.02 * math.exp(0.02 * 37.5),
        0.02 * math.exp(0.02 * 62.5),
        0.02 * math.exp(0.02 * 87.5),
    ]
    np.testing.assert_allclose(f, expected, rtol=1e-14)


def test_positive_state_reduces_to_upwind(rng):
    p = BurgersParams(num_cells=40)
    u = 0.5 + 4 * rng.random(40)
    np.testing.assert_allclose(burgers_velocity(p, u), upwind_velocity(p, u), rtol=1e-13, atol=1e-13)


def test_godunov_flux_branches():
    assert godunov_flux(2.0, 3.0) == 2.0
    assert godunov_flux(-2.0, -3.0) == 4.5
    assert godunov_flux(-1.0, 1.0) == 0.0  # rarefaction through zero
    assert godunov_flux(2.0, -3.0) == 4.5  # shock, larger side wins


def test_jacobian_hand_differentiated():
    p = BurgersParams(num_cells=3)
    dx = p.dx
    J = burgers_apply_jacobian(p, np.ones(3), 0.0, np.eye(3))
    expected = np.array([[-1, 0, 0], [1, -1, 0], [0, 1, -1]]) / dx
    np.testing.assert_allclose(J, expected, rtol=1e-15)
    np.testing.assert_array_equal(burgers_apply_jacobian(p, np.ones(3), 0.0, np.zeros((3, 2))), 0.0)


def test_sparse_and_dense_agree(rng):
    p = BurgersParams(num_cells=30)
    u = 1 + rng.random(30)
    B = rng.standard_normal((30, 6))
    sparse = BurgersFom(p, "sparse").apply_jacobian(u, 0.0, B)
    dense = BurgersFom(p, "dense").apply_jacobian(u, 0.0, B)
    np.testing.assert_allclose(sparse, dense, rtol=0, atol=1e-14 * np.abs(sparse).max())


def test_jacobian_finite_differences(rng):
    fom = BurgersFom(BurgersParams(num_cells=32))
    assert check_jacobian_action(fom, 1 + rng.random(32), 0.0, rng.standard_normal((32, 3)), 1e-6) < 1e-5


def test_bad_inputs():
    p = BurgersParams(num_cells=4)
    with pytest.raises(ContractViolation):
        burgers_velocity(p, np.ones(5))
    with pytest.raises(ContractViolation):
        BurgersParams(num_cells=1)
    with pytest.raises(ContractViolation):
        BurgersFom(p, "banded")


def _sample_mesh(n, cells, left=1, right=0):
    p = BurgersParams(num_cells=n)
    topo = build_stencil_closure(np.array(cells), n, left, right)
    return p, topo, BurgersSampleMesh(p, topo)


def test_sample_full_coverage_equals_full(rng):
    n = 16
    p, topo, sm = _sample_mesh(n, np.arange(n))
    u = 1 + rng.random(n)
    np.testing.assert_array_equal(sm.velocity(u[topo.state_cells]), burgers_velocity(p, u))
    B = rng.standard_normal((n, 3))
    np.testing.assert_allclose(
        sm.apply_jacobian(u, 0.0, B), burgers_apply_jacobian(p, u, 0.0, B), rtol=0, atol=1e-14 * np.abs(B).max() * n
    )


@pytest.mark.parametrize("cell", [0, 5, 15])
def test_single_cell_rows(rng, cell):
    n = 16
    p, topo, sm = _sample_mesh(n, [cell])
    u = 1 + rng.random(n)
    full = burgers_velocity(p, u)
    assert abs(sm.velocity(u[topo.state_cells])[0] - full[cell]) <= 1e-14 * abs(full[cell])


def test_random_sample_rows_match_full(rng):
    n = 200
    p = BurgersParams(num_cells=n)
    idx = select_sample_indices(n, 0.1, 7, forced=(0, n - 1))
    for widths in [(1, 0), (1, 1), (2, 2)]:
        topo = build_stencil_closure(idx, n, *widths)
        sm = BurgersSampleMesh(p, topo)
        u = 1 + 4 * rng.random(n)
        B = rng.standard_normal((n, 4))
        f = sm.velocity(u[topo.state_cells])
        np.testing.assert_allclose(f, burgers_velocity(p, u)[idx.indices], rtol=1e-14, atol=0)
        JB = sm.apply_jacobian(u[topo.state_cells], 0.0, B[topo.state_cells])
        full = burgers_apply_jacobian(p, u, 0.0, B)[idx.indices]
        np.testing.assert_allclose(JB, full, rtol=0, atol=1e-14 * np.abs(full).max())


def test_sample_jacobian_single_column_vs_two_diagonal_rows(rng):
    n = 50
    p, topo, sm = _sample_mesh(n, [0, 10, 11, 30, 49])
    u = 1 + rng.random(n)
    b = rng.standard_normal(n)
    JB = sm.apply_jacobian(u[topo.state_cells], 0.0, b[topo.state_cells][:, None])[:, 0]
    for j, i in enumerate([0, 10, 11, 30, 49]):
        row = -u[i] * b[i] / p.dx + (u[i - 1] * b[i - 1] / p.dx if i > 0 else 0.0)
        assert JB[j] == pytest.approx(row, rel=1e-14)


def test_missing_neighbour_is_topology_error():
    p = BurgersParams(num_cells=8)
    topo = build_stencil_closure(np.array([3]), 8, 0, 0)
    with pytest.raises(TopologyError):
        BurgersSampleMesh(p, topo)
