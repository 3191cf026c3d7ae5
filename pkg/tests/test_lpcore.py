"""Simplex solver and positive-support matching."""

import numpy as np
import pytest

from npcmaj import lpcore
from npcmaj.errors import NotSquare


def test_lp_minimize_simple():
    lp = lpcore.LinearProgram(np.array([1.0, 0.0]),
                              np.array([[1.0, 1.0]]), np.array([1.0]))
    out = lpcore.lp_solve(lp)
    assert out.status == lpcore.OPTIMAL
    np.testing.assert_allclose(out.solution, [0.0, 1.0], atol=1e-10)
    assert out.objective_value == pytest.approx(0.0, abs=1e-12)


def test_lp_infeasible():
    lp = lpcore.LinearProgram(np.array([0.0]), np.array([[1.0]]), np.array([-1.0]))
    out = lpcore.lp_solve(lp)
    assert out.status == lpcore.INFEASIBLE


def test_lp_unbounded():
    # minimize -u1 with u1 free upward: u1 - u2 = 0 keeps both growing
    lp = lpcore.LinearProgram(np.array([-1.0, 0.0]),
                              np.array([[1.0, -1.0]]), np.array([0.0]))
    out = lpcore.lp_solve(lp)
    assert out.status == lpcore.UNBOUNDED


def test_lp_solution_satisfies_constraints():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m, n = 3, 6
        E = rng.normal(size=(m, n))
        u0 = rng.uniform(size=n)  # make a feasible nonnegative point
        e = E @ u0
        c = rng.normal(size=n)
        out = lpcore.lp_solve(lpcore.LinearProgram(c, E, e))
        if out.status == lpcore.OPTIMAL:
            scale = max(np.abs(e).max(), 1.0)
            assert np.max(np.abs(E @ out.solution - e)) <= 1e-8 * scale
            assert out.solution.min() >= -1e-10
            assert out.iterations < 1_000_000


def test_transport_lp_value():
    # monotone coupling between {0, 2} and {1, 3} costs 1.0 in squared metric
    cost = np.array([[1.0, 9.0], [1.0, 1.0]]).ravel()
    E = np.array([
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 1.0],
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
    ])
    e = np.array([0.5, 0.5, 0.5, 0.5])
    out = lpcore.lp_solve(lpcore.LinearProgram(cost, E, e))
    assert out.status == lpcore.OPTIMAL
    assert out.objective_value == pytest.approx(1.0, abs=1e-10)


def test_feasibility_wrapper():
    sol = lpcore.feasibility(np.array([[1.0, 1.0]]), np.array([1.0]))
    assert sol is not None and abs(sol.sum() - 1.0) <= 1e-8
    assert lpcore.feasibility(np.array([[1.0]]), np.array([-1.0])) is None
    empty = lpcore.feasibility(np.zeros((0, 1)), np.zeros(0))
    np.testing.assert_allclose(empty, [0.0])


def test_matching_identity():
    assert lpcore.positive_support_matching(np.eye(3)) == (0, 1, 2)


def test_matching_uniform_prefers_lexicographic():
    assert lpcore.positive_support_matching(np.full((3, 3), 1.0 / 3.0)) == (0, 1, 2)


def test_matching_hall_violation():
    assert lpcore.positive_support_matching(np.array([[1.0, 0.0], [1.0, 0.0]])) is None


def test_matching_requires_square():
    with pytest.raises(NotSquare):
        lpcore.positive_support_matching(np.ones((2, 3)))


def test_matching_is_bijection_above_threshold():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        D = rng.uniform(size=(n, n)) * (rng.uniform(size=(n, n)) > 0.4)
        perm = lpcore.positive_support_matching(D, threshold=1e-12)
        if perm is not None:
            assert sorted(perm) == list(range(n))
            assert all(D[i, perm[i]] > 1e-12 for i in range(n))
