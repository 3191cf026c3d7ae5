"""Majorization of discrete measures: predicates, certificates, decision,
Birkhoff decomposition, and the Rado necessity probe."""

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .barycenter import _pairwise_scale, barycenter as solve_barycenter, discrete_measure
from . import geometry, lpcore
from .errors import (
    DimensionMismatch,
    EmptyInput,
    LengthMismatch,
    MatchingFailed,
    NoCertificate,
    NotDoublyStochastic,
    NotEuclidean,
    NotProbabilityVector,
    SolverNotConverged,
    TooLarge,
)

WEIGHT_TOL = 1e-9


def _scale_of(values):
    top = max((abs(float(v)) for v in values), default=0.0)
    return max(top, 1e-12)


def hlp_majorizes(x, y, tol=1e-9):
    """Classical Hardy-Littlewood-Polya majorization x < y on real vectors."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("majorization needs nonempty vectors")
    if x.size != y.size:
        raise LengthMismatch(f"lengths {x.size} != {y.size}")
    scale = _scale_of(np.concatenate([x, y]))
    sx = np.cumsum(np.sort(x)[::-1])
    sy = np.cumsum(np.sort(y)[::-1])
    if np.any(sx[:-1] > sy[:-1] + tol * scale):
        return False
    return abs(sx[-1] - sy[-1]) <= tol * scale


def weakly_majorizes(x, y, tol=1e-9):
    """Weak majorization: sorted partial sums only, no total-sum equality."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size == 0:
        raise EmptyInput("majorization needs nonempty vectors")
    if x.size != y.size:
        raise LengthMismatch(f"lengths {x.size} != {y.size}")
    scale = _scale_of(np.concatenate([x, y]))
    sx = np.cumsum(np.sort(x)[::-1])
    sy = np.cumsum(np.sort(y)[::-1])
    return bool(np.all(sx <= sy + tol * scale))


def validate_row_stochastic(A, tol=WEIGHT_TOL):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if np.any(A < -1e-12):
        raise NotProbabilityVector("matrix has a negative entry")
    if np.any(np.abs(A.sum(axis=1) - 1.0) > tol):
        raise NotProbabilityVector("matrix rows must sum to 1")
    return A


def _check_prob_vector(w, name, tol=WEIGHT_TOL):
    w = np.asarray(w, dtype=float).ravel()
    if np.any(w < -1e-12) or abs(w.sum() - 1.0) > tol:
        raise NotProbabilityVector(f"{name} is not a probability vector")
    return np.clip(w, 0.0, None)


def pushforward_weights(A, lam):
    """mu_j = sum_i A[i, j] * lam_i."""
    A = validate_row_stochastic(A)
    lam = _check_prob_vector(lam, "lambda")
    if lam.size != A.shape[0]:
        raise DimensionMismatch(f"lambda has length {lam.size}, A has {A.shape[0]} rows")
    mu = A.T @ lam
    return _check_prob_vector(mu, "pushforward")


@dataclass(frozen=True)
class MajorizationCertificate:
    """Checkable witness of the barycentric majorization relation."""

    space: geometry.Space
    A: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    x_atoms: Tuple[geometry.Point, ...]
    y_atoms: Tuple[geometry.Point, ...]
    residuals: np.ndarray
    pushforward_error: float
    tol: float
    valid: bool
    solver_converged: bool

    @property
    def scale(self):
        return max(
            _pairwise_scale(self.space, list(self.x_atoms) + list(self.y_atoms)), 1e-12
        )

    def equal_weight(self):
        m, n = self.A.shape
        return m == n and np.allclose(self.lam, 1.0 / m) and np.allclose(self.mu, 1.0 / n)


def verify_majorization(space, x_atoms, lam, y_atoms, mu, A, tol=1e-8,
                        ignore_zero_weight_rows=False):
    """Check conditions (pushforward + per-row barycenter) and build a certificate.

    Rows with zero lambda-weight are still required to satisfy the barycenter
    condition unless ``ignore_zero_weight_rows`` is set.
    """
    A = validate_row_stochastic(A)
    lam = _check_prob_vector(lam, "lambda")
    mu = _check_prob_vector(mu, "mu")
    x_atoms = tuple(x_atoms)
    y_atoms = tuple(y_atoms)
    m, n = A.shape
    if len(x_atoms) != m or lam.size != m or len(y_atoms) != n or mu.size != n:
        raise DimensionMismatch("atoms/weights dimensions inconsistent with A")
    geometry._require(space, *x_atoms, *y_atoms)

    push_err = float(np.max(np.abs(A.T @ lam - mu)))
    scale = max(_pairwise_scale(space, list(x_atoms) + list(y_atoms)), 1e-12)

    residuals = np.zeros(m)
    converged = True
    for i in range(m):
        if ignore_zero_weight_rows and lam[i] == 0.0:
            residuals[i] = 0.0
            continue
        row = A[i] / A[i].sum()
        res = solve_barycenter(space, discrete_measure(space, y_atoms, row))
        converged = converged and res.converged
        residuals[i] = geometry.distance(space, x_atoms[i], res.point)
    valid = converged and push_err <= tol and float(np.max(residuals)) <= tol * scale
    residuals.setflags(write=False)
    return MajorizationCertificate(
        space=space, A=A, lam=lam, mu=mu, x_atoms=x_atoms, y_atoms=y_atoms,
        residuals=residuals, pushforward_error=push_err, tol=tol, valid=valid,
        solver_converged=converged,
    )


def synthesize_majorized(space, y_atoms, lam, A, tol=1e-8):
    """Build the x-atoms as row barycenters; returns (x_atoms, mu, certificate)."""
    A = validate_row_stochastic(A)
    lam = _check_prob_vector(lam, "lambda")
    y_atoms = tuple(y_atoms)
    if A.shape[0] != lam.size or A.shape[1] != len(y_atoms):
        raise DimensionMismatch("A dimensions inconsistent with weights/atoms")
    xs = []
    for i in range(A.shape[0]):
        row = A[i] / A[i].sum()
        res = solve_barycenter(space, discrete_measure(space, y_atoms, row))
        if not res.converged:
            raise SolverNotConverged(f"row {i} barycenter did not converge")
        xs.append(res.point)
    mu = pushforward_weights(A, lam)
    cert = verify_majorization(space, xs, lam, y_atoms, mu, A, tol=tol)
    return tuple(xs), mu, cert


def decide_majorization_euclidean(x_atoms, lam, y_atoms, mu, tol=1e-8):
    """LP feasibility over row-stochastic matrices; returns a witness A or None."""
    x_atoms = tuple(x_atoms)
    y_atoms = tuple(y_atoms)
    space = x_atoms[0].space
    if space.kind != "euclidean":
        raise NotEuclidean("the decision procedure only applies in Euclidean space")
    geometry._require(space, *x_atoms, *y_atoms)
    lam = _check_prob_vector(lam, "lambda")
    mu = _check_prob_vector(mu, "mu")
    m, n = len(x_atoms), len(y_atoms)
    if lam.size != m or mu.size != n:
        raise DimensionMismatch("weights inconsistent with atom counts")
    dim = space.dim

    nvars = m * n
    rows = []
    rhs = []
    for i in range(m):  # row sums
        r = np.zeros(nvars)
        r[i * n:(i + 1) * n] = 1.0
        rows.append(r)
        rhs.append(1.0)
    for j in range(n):  # weight pushforward
        r = np.zeros(nvars)
        for i in range(m):
            r[i * n + j] = lam[i]
        rows.append(r)
        rhs.append(mu[j])
    Y = np.vstack([p.payload for p in y_atoms])  # n x dim
    for i in range(m):  # barycentric moment equations, per coordinate
        for k in range(dim):
            r = np.zeros(nvars)
            r[i * n:(i + 1) * n] = Y[:, k]
            rows.append(r)
            rhs.append(float(x_atoms[i].payload[k]))
    sol = lpcore.feasibility(np.vstack(rows), np.array(rhs))
    if sol is None:
        return None
    A = np.clip(sol.reshape(m, n), 0.0, None)
    A = A / A.sum(axis=1, keepdims=True)
    return A


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: Tuple[Tuple[float, Tuple[int, ...]], ...]

    def reconstruct(self):
        n = len(self.terms[0][1])
        out = np.zeros((n, n))
        for w, perm in self.terms:
            out[np.arange(n), list(perm)] += w
        return out


def birkhoff_decompose(D, tol=1e-9):
    """Decompose a doubly stochastic matrix into permutation matrices.

    Iterated extraction: find a positive-support matching, subtract the
    minimum selected entry, zero out dust, repeat.  Term count is at most
    (n-1)^2 + 1.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise NotDoublyStochastic("matrix must be square")
    n = D.shape[0]
    if np.any(D < -1e-12):
        raise NotDoublyStochastic("matrix has a negative entry")
    if np.any(np.abs(D.sum(axis=1) - 1.0) > tol) or np.any(np.abs(D.sum(axis=0) - 1.0) > tol):
        raise NotDoublyStochastic("row and column sums must equal 1")

    R = np.clip(D, 0.0, None)
    remaining = 1.0
    terms = []
    while remaining > 1e-12:
        perm = lpcore.positive_support_matching(R, threshold=1e-12)
        if perm is None:
            raise MatchingFailed(
                "no positive-support matching; tolerance breakdown on input"
            )
        w = float(min(R[i, perm[i]] for i in range(n)))
        w = min(w, remaining)
        terms.append((w, perm))
        for i in range(n):
            R[i, perm[i]] -= w
        R[R < 1e-12] = 0.0
        remaining -= w
    total = sum(w for w, _ in terms)
    terms = tuple((w / total, p) for w, p in terms)
    return BirkhoffDecomposition(terms)


@dataclass(frozen=True)
class RadoProbeResult:
    necessity_holds: bool
    hull_coefficients: Optional[np.ndarray]
    birkhoff_residual: Optional[float]


def rado_probe(space, x_tuple, y_tuple, tol=1e-6, A=None):
    """Probe the necessity direction of Rado's characterization.

    Euclidean: LP membership of the stacked x-tuple in the convex hull of the
    n! permutations of the y-tuple, returning mixing weights when a member.
    Curved spaces: requires a doubly stochastic witness ``A``; decomposes it
    and checks that each x_i is the barycenter of the permuted y-atoms under
    the decomposition weights.  The converse direction is never asserted.
    """
    x_tuple = tuple(x_tuple)
    y_tuple = tuple(y_tuple)
    n = len(x_tuple)
    if n != len(y_tuple):
        raise LengthMismatch("x and y tuples must have equal lengths")
    if n > 6:
        raise TooLarge("factorial blow-up guard: n must be <= 6")
    geometry._require(space, *x_tuple, *y_tuple)
    scale = max(_pairwise_scale(space, list(x_tuple) + list(y_tuple)), 1e-12)

    hull = None
    member = None
    if space.kind == "euclidean":
        perms = list(itertools.permutations(range(n)))
        dim = space.dim
        nvars = len(perms)
        rows = [np.ones(nvars)]
        rhs = [1.0]
        for i in range(n):
            for k in range(dim):
                r = np.array([float(y_tuple[p[i]].payload[k]) for p in perms])
                rows.append(r)
                rhs.append(float(x_tuple[i].payload[k]))
        sol = lpcore.feasibility(np.vstack(rows), np.array(rhs))
        member = sol is not None
        hull = None if sol is None else np.clip(sol, 0.0, None) / max(sol.sum(), 1e-300)

    birkhoff_residual = None
    if A is not None:
        decomp = birkhoff_decompose(A)
        worst = 0.0
        for i in range(n):
            atoms = [y_tuple[perm[i]] for _w, perm in decomp.terms]
            w = np.array([wk for wk, _p in decomp.terms])
            res = solve_barycenter(space, discrete_measure(space, atoms, w / w.sum()))
            if not res.converged:
                raise SolverNotConverged(f"slot {i} barycenter did not converge")
            worst = max(worst, geometry.distance(space, res.point, x_tuple[i]))
        birkhoff_residual = worst

    if space.kind == "euclidean":
        holds = bool(member) and (birkhoff_residual is None or birkhoff_residual <= tol * scale)
    else:
        if A is None:
            raise NoCertificate("curved-space probe needs a doubly stochastic witness A")
        holds = birkhoff_residual <= tol * scale
    return RadoProbeResult(holds, hull, birkhoff_residual)
