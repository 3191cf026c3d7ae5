"""Discrete optimal transport: exact 1-D quantile W2, LP-based W2 on R^N,
1-D Wasserstein barycenters, and majorization transferred to P2(R)."""

from dataclasses import dataclass

import numpy as np

from . import geometry, lpcore, measures1d, stochastic
from .errors import InvalidMeasure, TooLarge
from .inequalities import ConvexFunctional
from .measures1d import (  # noqa: F401  (public re-exports)
    DiscreteMeasure1D,
    barycenter_1d,
    dirac,
    make_measure,
    w2_quantile,
)

MAX_PLAN_SIZE = 10_000


@dataclass(frozen=True)
class Coupling:
    plan: np.ndarray
    row_marginals: np.ndarray
    col_marginals: np.ndarray
    cost: float


def w2_lp(atoms_mu, weights_mu, atoms_nu, weights_nu):
    """W2 between discrete measures on R^N by solving the transport LP.

    Atom arrays have shape (m, N) and (n, N); 1-D inputs may be flat.
    Returns (distance, Coupling).
    """
    X = np.asarray(atoms_mu, dtype=float)
    Y = np.asarray(atoms_nu, dtype=float)
    if X.ndim == 1:  # flat input means atoms on the real line
        X = X.reshape(-1, 1)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    wx = np.asarray(weights_mu, dtype=float).ravel()
    wy = np.asarray(weights_nu, dtype=float).ravel()
    m, n = X.shape[0], Y.shape[0]
    if wx.size != m or wy.size != n:
        raise InvalidMeasure("weights inconsistent with atom counts")
    if abs(wx.sum() - 1.0) > 1e-9 or abs(wy.sum() - 1.0) > 1e-9:
        raise InvalidMeasure("weights must sum to 1")
    if m * n > MAX_PLAN_SIZE:
        raise TooLarge(f"transport plan would have {m * n} > {MAX_PLAN_SIZE} entries")

    cost = np.zeros((m, n))
    for i in range(m):
        diff = Y - X[i]
        cost[i] = np.sum(diff * diff, axis=1)

    nvars = m * n
    rows = []
    rhs = []
    for i in range(m):
        r = np.zeros(nvars)
        r[i * n:(i + 1) * n] = 1.0
        rows.append(r)
        rhs.append(wx[i])
    for j in range(n):
        r = np.zeros(nvars)
        r[j::n] = 1.0
        rows.append(r)
        rhs.append(wy[j])
    lp = lpcore.LinearProgram(cost.ravel(), np.vstack(rows), np.array(rhs))
    out = lpcore.lp_solve(lp)
    if out.status != lpcore.OPTIMAL:
        raise InvalidMeasure(f"transport LP ended with status {out.status}")
    plan = np.clip(out.solution.reshape(m, n), 0.0, None)
    value = float(np.sum(plan * cost))
    return float(np.sqrt(max(value, 0.0))), Coupling(plan, wx, wy, value)


def w2_quantile_measures(mu, nu):
    """Quantile-form W2 for DiscreteMeasure1D inputs (exact)."""
    return measures1d.w2_quantile(mu, nu)


def w_functional_registry():
    """Functionals on P2(R) that are convex along barycenters.

    Potential energies for convex V, the quadratic interaction energy, and
    the second moment.  Internal energy needs densities and is excluded.
    """

    def potential(V):
        return lambda p: float(np.dot(p.payload.weights, V(p.payload.atoms)))

    def interaction_sq(p):
        a = p.payload.atoms
        w = p.payload.weights
        diff = a[:, None] - a[None, :]
        return float(w @ (diff ** 2) @ w)

    return [
        ConvexFunctional("potential_sq", "wasserstein1d", 1,
                         potential(lambda t: t ** 2), "convex"),
        ConvexFunctional("potential_abs", "wasserstein1d", 1,
                         potential(np.abs), "convex"),
        ConvexFunctional("potential_hinge", "wasserstein1d", 1,
                         potential(lambda t: np.maximum(t - 0.5, 0.0)), "convex"),
        ConvexFunctional("second_moment", "wasserstein1d", 1,
                         lambda p: p.payload.second_moment(), "convex"),
        ConvexFunctional("interaction_sq", "wasserstein1d", 1,
                         interaction_sq, "convex"),
    ]


def w_majorization(measures_y, lam, A, tol=1e-8):
    """Majorization relation with M = P2(R): synthesize and certify.

    Returns (x_measures, mu, certificate); the x-side measures come out as
    exact quantile-average barycenters of the rows of A.
    """
    measures_y = [m if isinstance(m, measures1d.DiscreteMeasure1D)
                  else measures1d.make_measure(*m) for m in measures_y]
    support = max(m.atoms.size for m in measures_y)
    space = geometry.Wasserstein1D(support)
    y_atoms = [geometry.Point(space, m) for m in measures_y]
    xs, mu, cert = stochastic.synthesize_majorized(space, y_atoms, lam, A, tol=tol)
    return [p.payload for p in xs], mu, cert
