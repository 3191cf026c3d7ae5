"""Convex-functional registry and the inequality checkers."""

import math

import numpy as np
import pytest

import npcmaj as nm
from npcmaj import inequalities, sampling, stochastic
from npcmaj.barycenter import discrete_measure
from npcmaj.errors import (
    AlphaOutOfRange, ArityMismatch, InvalidCertificate, NotSymmetric, UnknownGauge,
)

from conftest import random_points


E1 = nm.Euclidean(1)


def _pts(space, *vals):
    return [nm.point(space, [float(v)]) for v in vals]


def _cert_1_3_vs_0_4():
    return nm.verify_majorization(
        E1, _pts(E1, 1, 3), [0.5, 0.5], _pts(E1, 0, 4), [0.5, 0.5],
        np.array([[0.75, 0.25], [0.25, 0.75]]))


# ---------------------------------------------------------------------------
# registry contract


def test_registry_contains_expected_shapes(npc_space):
    reg = nm.builtin_registry(npc_space)
    ids = [f.id for f in reg]
    assert "dist_anchor0" in ids
    assert "sq_dist_anchor0" in ids
    assert "expm1_dist_anchor0" in ids
    assert "hinge_dist_anchor0" in ids
    for alpha in (1, 2, 3):
        assert f"dispersion_alpha{alpha}" in ids
    assert "sum_sq_dist_anchor0" in ids
    symmetric = [f for f in reg if f.arity == 0]
    assert all(f.symmetric for f in symmetric)


def test_registry_euclidean_extras():
    ids = [f.id for f in nm.builtin_registry(nm.Euclidean(2))]
    assert "l1_norm" in ids and "even_poly" in ids


def test_registry_evaluators_are_finite(npc_space):
    rng = sampling.trial_rng(51)
    pts = random_points(npc_space, rng, 3)
    for f in nm.builtin_registry(npc_space):
        val = f(pts[0]) if f.arity == 1 else f(tuple(pts))
        assert math.isfinite(val)


def test_symmetric_functionals_exactly_permutation_invariant(npc_space):
    rng = sampling.trial_rng(53)
    pts = random_points(npc_space, rng, 4)
    for f in nm.builtin_registry(npc_space):
        if f.arity != 0:
            continue
        base = f(tuple(pts))
        for _ in range(5):
            perm = rng.permutation(4)
            assert f(tuple(pts[i] for i in perm)) == base


# ---------------------------------------------------------------------------
# geodesic convexity


def test_geodesic_convexity_registry(npc_space):
    for f in nm.builtin_registry(npc_space):
        if f.arity != 1:
            continue
        report = nm.check_geodesic_convexity(npc_space, f, trials=300, seed=1)
        assert report.violations == 0, f.id


def test_geodesic_convexity_negative_control():
    sp = nm.Euclidean(2)
    concave = inequalities.ConvexFunctional(
        "neg_sq_norm", "euclidean", 1,
        lambda p: -float(np.dot(p.payload, p.payload)), "convex")
    report = nm.check_geodesic_convexity(sp, concave, trials=300, seed=1)
    assert report.violations > 0


def test_geodesic_convexity_arity_guard():
    sp = nm.Euclidean(2)
    f = [f for f in nm.builtin_registry(sp) if f.arity == 0][0]
    with pytest.raises(ArityMismatch):
        nm.check_geodesic_convexity(sp, f)


# ---------------------------------------------------------------------------
# Jensen


def test_jensen_point_mass_slack_zero():
    sp = nm.Euclidean(1)
    f = [f for f in nm.builtin_registry(sp) if f.arity == 1][0]
    m = discrete_measure(sp, _pts(sp, 3.0), [1.0])
    out = nm.check_jensen(sp, f, m)
    assert out.ok and out.slack == pytest.approx(0.0, abs=1e-12)


def test_jensen_square_example():
    sp = nm.Euclidean(1)
    sq = inequalities.ConvexFunctional(
        "sq", "euclidean", 1, lambda p: float(p.payload[0] ** 2), "convex")
    m = discrete_measure(sp, _pts(sp, -1.0, 1.0), [0.5, 0.5])
    out = nm.check_jensen(sp, sq, m)
    assert out.ok and out.slack == pytest.approx(-1.0)


def test_jensen_random(npc_space):
    reg = [f for f in nm.builtin_registry(npc_space) if f.arity == 1]
    for trial in range(50):
        rng = sampling.trial_rng(500, trial)
        k = int(rng.integers(2, 5))
        m = discrete_measure(npc_space, random_points(npc_space, rng, k),
                             sampling.random_weights(rng, k))
        for f in reg:
            assert nm.check_jensen(npc_space, f, m).ok


# ---------------------------------------------------------------------------
# majorization inequality (certificate form)


def test_convex_order_reflexive_slack_zero(npc_space):
    rng = sampling.trial_rng(57)
    ys = random_points(npc_space, rng, 3)
    lam = [0.2, 0.3, 0.5]
    cert = nm.verify_majorization(npc_space, ys, lam, ys, lam, np.eye(3))
    for f in nm.builtin_registry(npc_space):
        if f.arity == 1:
            out = nm.check_convex_order(cert, f)
            assert out.ok and abs(out.slack) <= 1e-10


def test_convex_order_hand_example():
    cert = _cert_1_3_vs_0_4()
    f = inequalities.ConvexFunctional(
        "abs_shift", "euclidean", 1, lambda p: abs(float(p.payload[0]) - 2.0), "convex")
    out = nm.check_convex_order(cert, f)
    # 0.5(1 + 1) = 1 on the x side, 0.5(2 + 2) = 2 on the y side
    assert out.ok and out.slack == pytest.approx(-1.0)


def test_convex_order_rejects_invalid_certificate():
    bad = nm.verify_majorization(
        E1, _pts(E1, 3, 2), [0.5, 0.5], _pts(E1, 0, 4), [0.5, 0.5],
        np.array([[0.25, 0.75], [0.75, 0.25]]))
    assert not bad.valid
    f = [f for f in nm.builtin_registry(E1) if f.arity == 1][0]
    with pytest.raises(InvalidCertificate):
        nm.check_convex_order(bad, f)


# ---------------------------------------------------------------------------
# distance-vector weak majorization and gauges


def test_distance_weak_majorization_hand_example():
    z = nm.point(E1, [0.0])
    assert nm.check_distance_weak_majorization(
        E1, _pts(E1, 1, 3), _pts(E1, 0, 4), z)


def test_distance_weak_majorization_reflexive(npc_space):
    rng = sampling.trial_rng(59)
    xs = random_points(npc_space, rng, 3)
    z = sampling.random_point(npc_space, rng)
    assert nm.check_distance_weak_majorization(npc_space, xs, xs, z)


def test_gauges_reproduce_partial_sums():
    z = nm.point(E1, [0.0])
    xs, ys = _pts(E1, 1, 3), _pts(E1, 0, 4)
    assert nm.check_gauge(E1, xs, ys, z, "l1")
    assert nm.check_gauge(E1, xs, ys, z, "top1")
    assert nm.check_gauge(E1, xs, ys, z, "top2")
    # l2: sqrt(10) <= 4
    assert nm.check_gauge(E1, xs, ys, z, "l2")
    assert nm.check_gauge(E1, xs, ys, z, "linf")


def test_unknown_gauge_rejected():
    z = nm.point(E1, [0.0])
    with pytest.raises(UnknownGauge):
        nm.check_gauge(E1, _pts(E1, 1), _pts(E1, 1), z, "l3")
    with pytest.raises(UnknownGauge):
        nm.check_gauge(E1, _pts(E1, 1), _pts(E1, 1), z, "top9")


def test_gauge_consistency_with_weak_majorization(npc_space):
    # whenever the distance vectors are weakly majorized, every gauge agrees
    for trial in range(100):
        rng = sampling.trial_rng(600, trial)
        n = int(rng.integers(2, 4))
        A = sampling.random_doubly_stochastic(rng, n)
        ys = random_points(npc_space, rng, n)
        xs, _mu, cert = nm.synthesize_majorized(npc_space, ys, [1.0 / n] * n, A)
        z = sampling.random_point(npc_space, rng)
        assert nm.check_distance_weak_majorization(npc_space, xs, ys, z)
        for g in ("l1", "l2", "linf") + tuple(f"top{k}" for k in range(1, n + 1)):
            assert nm.check_gauge(npc_space, xs, ys, z, g)


# ---------------------------------------------------------------------------
# entropy comparison


def test_entropy_sign_pinned_by_scalar_oracle():
    # Exhaustive scalar oracle: for doubly stochastic mixtures with all
    # values >= 1/e, the x-side sum of t*ln(t) never exceeds the y-side sum.
    # This pins the direction the checker must enforce.
    rng = np.random.default_rng(0)
    worst = -np.inf
    for _ in range(5000):
        n = int(rng.integers(2, 5))
        y = rng.uniform(1.0 / math.e, 6.0, size=n)
        A = sampling.random_doubly_stochastic(rng, n)
        x = A @ y
        sx = float(np.sum(x * np.log(x)))
        sy = float(np.sum(y * np.log(y)))
        worst = max(worst, sx - sy)
    assert worst <= 1e-12


def test_entropy_check_on_certificate_distances():
    # distances to a remote anchor inherit weak majorization, and with all
    # of them >= 1/e the t*ln(t) comparison holds in the <= direction
    for trial in range(100):
        rng = sampling.trial_rng(700, trial)
        n = int(rng.integers(2, 4))
        A = sampling.random_doubly_stochastic(rng, n)
        ys = random_points(nm.HalfPlane(), rng, n)
        xs, _mu, _cert = nm.synthesize_majorized(nm.HalfPlane(), ys, [1.0 / n] * n, A)
        z = nm.point(nm.HalfPlane(), [0.0, 1e4])  # far anchor: distances > 1/e
        out = nm.check_entropy_product(nm.HalfPlane(), xs, ys, z)
        assert out.status == "ok"


def test_entropy_check_skips_below_floor():
    sp = E1
    xs = _pts(sp, 0.1)
    out = nm.check_entropy_product(sp, xs, xs, nm.point(sp, [0.2]))
    assert out.status == "skip"


def test_entropy_equality_reflexive():
    sp = E1
    xs = _pts(sp, 1.0, 3.0)
    out = nm.check_entropy_product(sp, xs, xs, nm.point(sp, [5.0]))
    assert out.status == "ok" and out.slack == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# dispersion and symmetric functionals


def test_dispersion_hand_example():
    cert = _cert_1_3_vs_0_4()
    out = nm.check_dispersion(cert, 1.0)
    assert out.ok and out.slack == pytest.approx(2.0 - 4.0)


def test_dispersion_alpha_guard():
    cert = _cert_1_3_vs_0_4()
    with pytest.raises(AlphaOutOfRange):
        nm.check_dispersion(cert, 0.5)


def test_dispersion_random_spd():
    sp = nm.Spd(2)
    for trial in range(100):
        rng = sampling.trial_rng(800, trial)
        n = int(rng.integers(2, 4))
        A = sampling.random_doubly_stochastic(rng, n)
        ys = random_points(sp, rng, n)
        _xs, _mu, cert = nm.synthesize_majorized(sp, ys, [1.0 / n] * n, A)
        assert nm.check_dispersion(cert, 2.0).ok


def test_schur_agrees_with_dispersion():
    cert = _cert_1_3_vs_0_4()
    reg = {f.id: f for f in nm.builtin_registry(E1)}
    for alpha in (1, 2, 3):
        schur = nm.check_schur(cert, reg[f"dispersion_alpha{alpha}"])
        disp = nm.check_dispersion(cert, float(alpha))
        assert schur.slack == pytest.approx(disp.slack, abs=1e-12)


def test_schur_rejects_asymmetric_functional():
    cert = _cert_1_3_vs_0_4()
    rigged = inequalities.ConvexFunctional(
        "order_dependent", "euclidean", 0,
        lambda pts: float(pts[0].payload[0]), "symmetric_convex_on_power",
        symmetric=True)
    with pytest.raises(NotSymmetric):
        nm.check_schur(cert, rigged)


# ---------------------------------------------------------------------------
# fuzz harness


def test_fuzz_deterministic():
    sp = nm.Euclidean(2)
    a = nm.fuzz_suite(sp, seed=5, trials=10)
    b = nm.fuzz_suite(sp, seed=5, trials=10)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_fuzz_zero_violations(npc_space):
    reports = nm.fuzz_suite(npc_space, seed=42, trials=25)
    assert sum(r.violations for r in reports) == 0


def test_fuzz_detects_injected_concave_functional():
    sp = nm.Euclidean(2)
    rng = sampling.trial_rng(12345)
    anchor = sampling.random_point(sp, rng)
    concave = inequalities.ConvexFunctional(
        "neg_sq_dist", "euclidean", 1,
        lambda p: -nm.distance(sp, p, anchor) ** 2, "convex")
    reports = nm.fuzz_suite(sp, seed=9, trials=30, extra_functionals=[concave],
                            suites={"jensen"})
    bad = [r for r in reports if "neg_sq_dist" in r.functional]
    assert bad and sum(r.violations for r in bad) > 0
    assert all(r.instances for r in bad if r.violations)


def test_fuzz_suite_filter():
    sp = nm.Euclidean(2)
    reports = nm.fuzz_suite(sp, seed=3, trials=5, suites={"schur"})
    assert reports
    for r in reports:
        assert r.functional.startswith("schur:") or r.functional == "synthesis"


def test_check_report_csv_shape():
    sp = nm.Euclidean(2)
    reports = nm.fuzz_suite(sp, seed=3, trials=5, suites={"dispersion"})
    header_cols = inequalities.CSV_HEADER.split(",")
    for r in reports:
        assert len(r.to_csv_row().split(",")) == len(header_cols)
