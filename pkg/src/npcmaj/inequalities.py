"""Generalized convex functionals and checkers for every proved inequality:
Jensen, convex-order monotonicity, distance-vector weak majorization, the
entropy product, dispersion sums, Schur-type symmetric functionals, and
symmetric gauges.  A seeded fuzz harness drives them all."""

import math
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from .barycenter import barycenter as solve_barycenter, discrete_measure
from . import geometry, sampling, stochastic
from .errors import (
    AlphaOutOfRange,
    ArityMismatch,
    InvalidCertificate,
    NotConverged,
    NotSymmetric,
    PreconditionNotMet,
    UnknownGauge,
)

VIOLATION_TOL = 1e-8
ENTROPY_FLOOR = 1.0 / math.e


@dataclass(frozen=True)
class ConvexFunctional:
    """A geodesically convex functional on one space kind.

    ``arity`` is 1 for functionals on M, or 0 for symmetric functionals on
    any finite power M^n (the evaluator then takes a tuple of points).
    """

    id: str
    space_kind: str
    arity: int
    evaluator: Callable
    convexity_kind: str
    symmetric: bool = False

    def __call__(self, arg):
        return float(self.evaluator(arg))


Slack = namedtuple("Slack", ["ok", "slack", "scale"])
EntropyOutcome = namedtuple("EntropyOutcome", ["status", "slack"])


@dataclass
class CheckReport:
    functional: str
    space: str
    trials: int = 0
    violations: int = 0
    worst_slack: float = -np.inf
    instances: List[int] = field(default_factory=list)
    skips: int = 0

    def record(self, slack, ok, seed):
        self.trials += 1
        self.worst_slack = max(self.worst_slack, slack)
        if not ok:
            self.violations += 1
            if seed not in self.instances:
                self.instances.append(seed)

    def record_skip(self, seed):
        self.trials += 1
        self.skips += 1

    def to_json(self):
        return {
            "functional": self.functional,
            "space": self.space,
            "trials": self.trials,
            "violations": self.violations,
            "worst_slack": self.worst_slack,
            "seeds": list(self.instances),
            "skips": self.skips,
        }

    def to_csv_row(self):
        seeds = ";".join(str(s) for s in self.instances)
        return (f"{self.functional},{self.space},{self.trials},"
                f"{self.violations},{self.worst_slack!r},{seeds}")


CSV_HEADER = "functional,space,trials,violations,worst_slack,seeds"


def builtin_registry(space, n_anchors=2, anchor_seed=12345):
    """Convex functionals known to hold on ``space``.

    Anchors z for the distance-based entries are sampled deterministically
    from ``anchor_seed``.
    """
    rng = sampling.trial_rng(anchor_seed)
    anchors = [sampling.random_point(space, rng) for _ in range(n_anchors)]
    kind = space.kind
    entries = []

    def dist_to(z):
        return lambda p: geometry.distance(space, p, z)

    for k, z in enumerate(anchors):
        d = dist_to(z)
        entries.append(ConvexFunctional(
            f"dist_anchor{k}", kind, 1, d, "convex"))
        entries.append(ConvexFunctional(
            f"sq_dist_anchor{k}", kind, 1, lambda p, d=d: d(p) ** 2, "convex"))
        entries.append(ConvexFunctional(
            f"expm1_dist_anchor{k}", kind, 1, lambda p, d=d: math.expm1(min(d(p), 50.0)),
            "convex_nondecreasing_of_distance"))
        entries.append(ConvexFunctional(
            f"hinge_dist_anchor{k}", kind, 1, lambda p, d=d: max(d(p) - 1.0, 0.0),
            "convex_nondecreasing_of_distance"))

    def _sym_dist(p, q):
        # distance can differ in the last ulp under argument swap (e.g. the
        # trace metric diagonalizes AB^{-1}); take the min so pair terms are
        # exactly order-independent
        return min(geometry.distance(space, p, q), geometry.distance(space, q, p))

    for alpha in (1, 2, 3):
        def dispersion(pts, a=alpha):
            # sorted fsum keeps the value exactly permutation-invariant
            vals = [_sym_dist(pts[i], pts[j]) ** a
                    for i in range(len(pts)) for j in range(i + 1, len(pts))]
            return math.fsum(sorted(vals))
        entries.append(ConvexFunctional(
            f"dispersion_alpha{alpha}", kind, 0, dispersion,
            "symmetric_convex_on_power", symmetric=True))

    z0 = anchors[0]
    entries.append(ConvexFunctional(
        "sum_sq_dist_anchor0", kind, 0,
        lambda pts: math.fsum(sorted(geometry.distance(space, p, z0) ** 2 for p in pts)),
        "symmetric_convex_on_power", symmetric=True))

    if kind == "euclidean":
        entries.append(ConvexFunctional(
            "l1_norm", kind, 1, lambda p: float(np.sum(np.abs(p.payload))), "convex"))
        entries.append(ConvexFunctional(
            "even_poly", kind, 1,
            lambda p: float(np.sum(p.payload ** 4 + p.payload ** 2)), "convex"))
    return entries


def check_geodesic_convexity(space, functional, trials=1000, seed=0, tol=VIOLATION_TOL):
    """Sample random geodesics and verify phi(gamma(t)) <= chord value."""
    if functional.arity != 1:
        raise ArityMismatch("geodesic convexity check needs an arity-1 functional")
    report = CheckReport(functional.id, space.kind)
    for trial in range(trials):
        rng = sampling.trial_rng(seed, trial)
        p = sampling.random_point(space, rng)
        q = sampling.random_point(space, rng)
        t = float(rng.uniform())
        fp, fq = functional(p), functional(q)
        ft = functional(geometry.geodesic_point(space, p, q, t))
        scale = max(abs(fp), abs(fq), abs(ft), 1.0)
        slack = ft - ((1.0 - t) * fp + t * fq)
        report.record(slack, slack <= tol * scale, trial)
    return report


def check_jensen(space, functional, measure, tol=VIOLATION_TOL):
    """Jensen's inequality: f(bar(mu)) <= sum_i w_i f(x_i)."""
    if functional.arity != 1:
        raise ArityMismatch("Jensen check needs an arity-1 functional")
    res = solve_barycenter(space, measure)
    if not res.converged:
        raise NotConverged("barycenter solver did not converge")
    rhs = float(sum(w * functional(a) for w, a in zip(measure.weights, measure.atoms)))
    lhs = functional(res.point)
    scale = max(max((abs(functional(a)) for a in measure.atoms), default=0.0), 1.0)
    slack = lhs - rhs
    return Slack(slack <= tol * scale, slack, scale)


def check_convex_order(certificate, functional, tol=VIOLATION_TOL):
    """sum_i lam_i f(x_i) <= sum_j mu_j f(y_j) for a valid certificate."""
    if not certificate.valid:
        raise InvalidCertificate("certificate is not valid")
    if functional.arity != 1:
        raise ArityMismatch("needs an arity-1 functional")
    lhs = float(sum(w * functional(a) for w, a in zip(certificate.lam, certificate.x_atoms)))
    rhs = float(sum(w * functional(a) for w, a in zip(certificate.mu, certificate.y_atoms)))
    vals = [abs(functional(a)) for a in certificate.x_atoms + certificate.y_atoms]
    scale = max(max(vals, default=0.0), 1.0)
    slack = lhs - rhs
    return Slack(slack <= tol * scale, slack, scale)


def _distance_vectors(space, x_atoms, y_atoms, z):
    dx = [geometry.distance(space, a, z) for a in x_atoms]
    dy = [geometry.distance(space, a, z) for a in y_atoms]
    return np.array(dx), np.array(dy)


def check_distance_weak_majorization(space, x_atoms, y_atoms, z, tol=1e-8):
    """(d(x_i, z))_i is weakly majorized by (d(y_i, z))_i."""
    dx, dy = _distance_vectors(space, x_atoms, y_atoms, z)
    return stochastic.weakly_majorizes(dx, dy, tol=tol)


def check_entropy_product(space, x_atoms, y_atoms, z, tol=VIOLATION_TOL):
    """Entropy product comparison on distance vectors, all distances >= 1/e.

    Since t*log(t) is convex and nondecreasing on [1/e, inf), weak
    majorization of the distance vectors gives
    sum d(x)log d(x) <= sum d(y)log d(y), i.e. the product of d^d values on
    the x side is bounded by the y side.  The comparison is done in the log
    domain.  Instances failing the distance floor are reported as skips.
    """
    dx, dy = _distance_vectors(space, x_atoms, y_atoms, z)
    if np.any(dx < ENTROPY_FLOOR) or np.any(dy < ENTROPY_FLOOR):
        return EntropyOutcome("skip", 0.0)
    sx = float(np.sum(dx * np.log(dx)))
    sy = float(np.sum(dy * np.log(dy)))
    scale = max(abs(sx), abs(sy), 1.0)
    slack = sx - sy
    return EntropyOutcome("ok" if slack <= tol * scale else "violation", slack)


def check_dispersion(certificate, alpha, tol=VIOLATION_TOL):
    """sum_{i<j} d^alpha(x_i, x_j) <= sum_{i<j} d^alpha(y_i, y_j)."""
    if alpha < 1.0:
        raise AlphaOutOfRange("alpha must be >= 1")
    if not certificate.valid:
        raise InvalidCertificate("certificate is not valid")
    space = certificate.space

    def total(atoms):
        s = 0.0
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                s += geometry.distance(space, atoms[i], atoms[j]) ** alpha
        return s

    lhs = total(certificate.x_atoms)
    rhs = total(certificate.y_atoms)
    scale = max(certificate.scale ** alpha, 1.0)
    slack = lhs - rhs
    return Slack(slack <= tol * scale, slack, scale)


def _assert_symmetric(functional, atoms, rng):
    for _ in range(3):
        perm = rng.permutation(len(atoms))
        a = functional(tuple(atoms))
        b = functional(tuple(atoms[i] for i in perm))
        if a != b:
            raise NotSymmetric(f"{functional.id} changes under permutation")


def check_schur(certificate, functional, tol=VIOLATION_TOL, rng=None):
    """Symmetric convex functionals on M^n are monotone under majorization."""
    if not certificate.valid:
        raise InvalidCertificate("certificate is not valid")
    if functional.arity != 0 or not functional.symmetric:
        raise NotSymmetric(f"{functional.id} is not a symmetric power functional")
    if rng is None:
        rng = sampling.trial_rng(0)
    _assert_symmetric(functional, list(certificate.y_atoms), rng)
    lhs = functional(tuple(certificate.x_atoms))
    rhs = functional(tuple(certificate.y_atoms))
    scale = max(abs(lhs), abs(rhs), 1.0)
    slack = lhs - rhs
    return Slack(slack <= tol * scale, slack, scale)


def _gauge(gauge_id, v):
    v = np.abs(np.asarray(v, dtype=float))
    if gauge_id == "l1":
        return float(np.sum(v))
    if gauge_id == "l2":
        return float(np.sqrt(np.sum(v ** 2)))
    if gauge_id == "linf":
        return float(np.max(v))
    if gauge_id.startswith("top"):
        try:
            k = int(gauge_id[3:])
        except ValueError:
            raise UnknownGauge(f"unknown gauge {gauge_id!r}")
        if not 1 <= k <= v.size:
            raise UnknownGauge(f"top-k gauge with k={k} out of range")
        return float(np.sum(np.sort(v)[::-1][:k]))
    raise UnknownGauge(f"unknown gauge {gauge_id!r}")


def check_gauge(space, x_atoms, y_atoms, z, gauge_id, tol=VIOLATION_TOL):
    """Symmetric gauge monotonicity on the two distance vectors."""
    dx, dy = _distance_vectors(space, x_atoms, y_atoms, z)
    gx = _gauge(gauge_id, dx)
    gy = _gauge(gauge_id, dy)
    scale = max(gx, gy, 1.0)
    return bool(gx <= gy + tol * scale)


GAUGES = ("l1", "l2", "linf")


def _random_certificate(space, rng, equal_weight, tol):
    if equal_weight:
        n = int(rng.integers(2, 4))
        A = sampling.random_doubly_stochastic(rng, n)
        lam = np.full(n, 1.0 / n)
    else:
        m = int(rng.integers(1, 4))
        n = int(rng.integers(2, 4))
        A = sampling.random_row_stochastic(rng, m, n)
        lam = sampling.random_weights(rng, m)
    y = [sampling.random_point(space, rng) for _ in range(A.shape[1])]
    _xs, _mu, cert = stochastic.synthesize_majorized(space, y, lam, A, tol=tol)
    return cert


def fuzz_suite(space, seed=0, trials=100, tol=VIOLATION_TOL,
               extra_functionals=(), suites=None):
    """Synthesize random certificates and run every applicable checker.

    Deterministic given ``seed``; each trial draws from its own derived RNG
    stream.  Returns a list of CheckReports.  ``suites`` optionally restricts
    to a subset of {"jensen", "convex_order", "distvec", "gauge", "entropy",
    "dispersion", "schur"}.
    """
    registry = list(builtin_registry(space)) + list(extra_functionals)
    arity1 = [f for f in registry if f.arity == 1]
    symmetric = [f for f in registry if f.arity == 0 and f.symmetric]
    want = (lambda s: True) if suites is None else (lambda s: s in suites)

    reports = {}

    def rep(name):
        if name not in reports:
            reports[name] = CheckReport(name, space.kind)
        return reports[name]

    for trial in range(trials):
        rng = sampling.trial_rng(seed, trial)
        try:
            cert = _random_certificate(space, rng, equal_weight=False, tol=tol)
            eq_cert = _random_certificate(space, rng, equal_weight=True, tol=tol)
        except Exception:
            rep("synthesis").record_skip(trial)
            continue
        if not (cert.valid and eq_cert.valid):
            rep("synthesis").record_skip(trial)
            continue

        anchor = sampling.random_point(space, rng)

        if want("convex_order"):
            for f in arity1:
                out = check_convex_order(cert, f, tol=tol)
                rep(f"convex_order:{f.id}").record(out.slack, out.ok, trial)
        if want("jensen"):
            measure = discrete_measure(space, cert.y_atoms, cert.mu)
            for f in arity1:
                out = check_jensen(space, f, measure, tol=tol)
                rep(f"jensen:{f.id}").record(out.slack, out.ok, trial)
        if want("distvec"):
            ok = check_distance_weak_majorization(
                space, eq_cert.x_atoms, eq_cert.y_atoms, anchor)
            rep("distvec:distance_weak_majorization").record(0.0 if ok else 1.0, ok, trial)
        if want("gauge"):
            n = len(eq_cert.x_atoms)
            for g in GAUGES + tuple(f"top{k}" for k in range(1, n + 1)):
                ok = check_gauge(space, eq_cert.x_atoms, eq_cert.y_atoms, anchor, g, tol=tol)
                rep(f"gauge:{g}").record(0.0 if ok else 1.0, ok, trial)
        if want("entropy"):
            out = check_entropy_product(space, eq_cert.x_atoms, eq_cert.y_atoms, anchor, tol=tol)
            r = rep("entropy:product")
            if out.status == "skip":
                r.record_skip(trial)
            else:
                r.record(out.slack, out.status == "ok", trial)
        if want("dispersion"):
            for alpha in (1.0, 2.0, 3.0):
                out = check_dispersion(eq_cert, alpha, tol=tol)
                rep(f"dispersion:alpha{alpha:g}").record(out.slack, out.ok, trial)
        if want("schur"):
            for f in symmetric:
                out = check_schur(eq_cert, f, tol=tol, rng=rng)
                rep(f"schur:{f.id}").record(out.slack, out.ok, trial)

    return list(reports.values())
