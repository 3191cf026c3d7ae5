"""Dense two-phase primal simplex and bipartite matching kernels.

Everything here targets desk-scale instances (a few thousand variables at
most): the tableau is dense, pivoting uses Bland's rule so cycling is
impossible, and tolerances are tuned for well-scaled stochastic matrices.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotSquare

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-8
MAX_PIVOTS = 1_000_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """minimize c @ u  subject to  E @ u = e,  u >= 0."""

    c: np.ndarray
    E: np.ndarray
    e: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.E = np.atleast_2d(np.asarray(self.E, dtype=float))
        self.e = np.asarray(self.e, dtype=float).ravel()
        if self.E.shape != (self.e.size, self.c.size):
            raise DimensionMismatch(
                f"E has shape {self.E.shape}, expected {(self.e.size, self.c.size)}"
            )
        for arr in (self.c, self.E, self.e):
            if not np.all(np.isfinite(arr)):
                raise NonFinite("linear program contains non-finite entries")


@dataclass
class LpOutcome:
    status: str
    solution: np.ndarray = None
    objective_value: float = np.nan
    iterations: int = 0


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _simplex(T, basis, cost, pivot_budget):
    """Bland-rule simplex on tableau T (rows: constraints, last col: rhs).

    Returns (status, pivots) where status is OPTIMAL or UNBOUNDED.
    """
    m = T.shape[0]
    ncols = T.shape[1] - 1
    pivots = 0
    while True:
        cb = cost[basis]
        # reduced costs: c_j - cb @ T[:, j]
        red = cost[:ncols] - cb @ T[:, :ncols]
        entering = -1
        for j in range(ncols):
            if red[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL, pivots
        # ratio test with Bland tie-break on the leaving basic variable index
        best_ratio = np.inf
        leaving = -1
        for r in range(m):
            a = T[r, entering]
            if a > PIVOT_TOL:
                ratio = T[r, -1] / a
                if ratio < best_ratio - 1e-15 or (
                    abs(ratio - best_ratio) <= 1e-15
                    and (leaving < 0 or basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            return UNBOUNDED, pivots
        _pivot(T, basis, leaving, entering)
        pivots += 1
        if pivots > pivot_budget:
            raise RuntimeError("simplex pivot budget exceeded")


def lp_solve(lp, pivot_budget=MAX_PIVOTS):
    """Two-phase primal simplex with Bland's anti-cycling rule."""
    m, n = lp.E.shape
    E = lp.E.copy()
    e = lp.e.copy()
    neg = e < 0.0
    E[neg] *= -1.0
    e[neg] *= -1.0

    # phase 1: artificial basis
    T = np.zeros((m, n + m + 1))
    T[:, :n] = E
    T[:, n:n + m] = np.eye(m)
    T[:, -1] = e
    basis = list(range(n, n + m))
    cost1 = np.concatenate([np.zeros(n), np.ones(m), [0.0]])
    status, p1 = _simplex(T, basis, cost1, pivot_budget)
    feas_scale = max(1.0, float(np.max(np.abs(e))) if e.size else 1.0)
    phase1_obj = float(cost1[basis] @ T[:, -1])
    if phase1_obj > FEAS_TOL * feas_scale:
        return LpOutcome(INFEASIBLE, iterations=p1)

    # drive leftover artificials out of the basis (degenerate / redundant rows)
    drop_rows = []
    for r in range(m):
        if basis[r] >= n:
            found = False
            for j in range(n):
                if abs(T[r, j]) > PIVOT_TOL:
                    _pivot(T, basis, r, j)
                    found = True
                    break
            if not found:
                drop_rows.append(r)
    if drop_rows:
        keep = [r for r in range(m) if r not in drop_rows]
        T = T[keep]
        basis = [basis[r] for r in keep]
        m = len(keep)

    # phase 2 on original columns
    T2 = np.hstack([T[:, :n], T[:, -1:]])
    cost2 = np.concatenate([lp.c, [0.0]])
    status, p2 = _simplex(T2, basis, cost2, pivot_budget)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, iterations=p1 + p2)
    u = np.zeros(n)
    for r, b in enumerate(basis):
        if b < n:
            u[b] = T2[r, -1]
    u[np.abs(u) < 1e-14] = np.abs(u[np.abs(u) < 1e-14])
    return LpOutcome(OPTIMAL, solution=u, objective_value=float(lp.c @ u),
                     iterations=p1 + p2)


def feasibility(E, e, pivot_budget=MAX_PIVOTS):
    """Find any nonnegative solution of E @ u = e, or report infeasibility.

    Returns the solution vector or None.
    """
    E = np.atleast_2d(np.asarray(E, dtype=float))
    e = np.asarray(e, dtype=float).ravel()
    if E.size == 0 or E.shape[0] == 0:
        return np.zeros(E.shape[1] if E.ndim == 2 else 0)
    lp = LinearProgram(np.zeros(E.shape[1]), E, e)
    out = lp_solve(lp, pivot_budget=pivot_budget)
    if out.status != OPTIMAL:
        return None
    return out.solution


def _kuhn_match(adj, n, fixed):
    """Perfect-matching feasibility on rows not yet fixed, honoring ``fixed``."""
    match_col = [-1] * n  # column -> row
    for r, c in fixed.items():
        match_col[c] = r

    def try_row(r, seen):
        for c in range(n):
            if adj[r][c] and not seen[c]:
                seen[c] = True
                owner = match_col[c]
                if owner == -1 or (owner not in fixed and try_row(owner, seen)):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if r in fixed:
            continue
        if r not in match_col:
            seen = [c in {fixed[k] for k in fixed} for c in range(n)]
            if not try_row(r, seen):
                return False
    return True


def positive_support_matching(D, threshold=1e-12):
    """Lexicographically smallest permutation pi with D[i, pi(i)] > threshold.

    Returns a tuple of column indices, or None when no perfect matching exists
    on the support graph.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise NotSquare("matching requires a square matrix")
    n = D.shape[0]
    adj = D > threshold
    fixed = {}
    for r in range(n):
        placed = False
        for c in range(n):
            if adj[r][c] and c not in fixed.values():
                trial = dict(fixed)
                trial[r] = c
                if _kuhn_match(adj, n, trial):
                    fixed[r] = c
                    placed = True
                    break
        if not placed:
            return None
    return tuple(fixed[r] for r in range(n))
