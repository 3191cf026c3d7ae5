"""Discrete probability measures on the real line and exact quantile calculus.

Everything here is piecewise-constant quantile arithmetic on merged breakpoint
grids, so the 2-Wasserstein distance, geodesics, and barycenters are computed
exactly (no sampling, no iteration).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeasure
from .kernels import quantile_w2_squared

_MERGE_REL = 1e-12


@dataclass(frozen=True)
class DiscreteMeasure1D:
    """Finitely supported probability measure on R with strictly sorted atoms."""

    atoms: np.ndarray
    weights: np.ndarray

    @property
    def cumulative(self):
        c = np.cumsum(self.weights)
        c[-1] = 1.0
        return c

    def second_moment(self):
        return float(np.dot(self.weights, self.atoms ** 2))

    def mean(self):
        return float(np.dot(self.weights, self.atoms))

    def shifted(self, c):
        return DiscreteMeasure1D(self.atoms + c, self.weights.copy())


def make_measure(atoms, weights):
    """Canonicalize and validate a 1-D discrete measure.

    Atoms are sorted ascending; atoms closer than 1e-12 * scale are merged
    with their weights summed; zero-weight atoms are dropped.
    """
    atoms = np.asarray(atoms, dtype=float).ravel()
    weights = np.asarray(weights, dtype=float).ravel()
    if atoms.size == 0:
        raise InvalidMeasure("measure needs at least one atom")
    if atoms.shape != weights.shape:
        raise InvalidMeasure("atoms and weights length mismatch")
    if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(weights))):
        raise InvalidMeasure("non-finite atom or weight")
    if np.any(weights < -1e-12):
        raise InvalidMeasure("negative weight")
    s = weights.sum()
    if abs(s - 1.0) > 1e-12 * max(1.0, abs(s)):
        raise InvalidMeasure(f"weights sum to {s!r}, expected 1")
    order = np.argsort(atoms, kind="stable")
    atoms = atoms[order]
    weights = np.clip(weights[order], 0.0, None)

    scale = max(1.0, float(np.max(np.abs(atoms))))
    merged_a = []
    merged_w = []
    for a, w in zip(atoms, weights):
        if merged_a and a - merged_a[-1] <= _MERGE_REL * scale:
            merged_w[-1] += w
        else:
            merged_a.append(a)
            merged_w.append(w)
    atoms = np.array(merged_a)
    weights = np.array(merged_w)
    keep = weights > 0.0
    if not np.any(keep):
        raise InvalidMeasure("all weights are zero")
    atoms = atoms[keep]
    weights = weights[keep]
    weights = weights / weights.sum()
    atoms.setflags(write=False)
    weights.setflags(write=False)
    return DiscreteMeasure1D(atoms, weights)


def dirac(x):
    return make_measure([x], [1.0])


def w2_quantile(mu, nu):
    """Exact W2 distance via the monotone (quantile) coupling."""
    sq = quantile_w2_squared(mu.atoms, mu.cumulative, nu.atoms, nu.cumulative)
    return float(np.sqrt(max(sq, 0.0)))


def merged_grid(measures):
    """Union of cumulative breakpoints; returns (cums, dt) with cums[-1] == 1."""
    cums = np.unique(np.concatenate([m.cumulative for m in measures] + [np.array([1.0])]))
    cums = cums[(cums > 0.0) & (cums <= 1.0)]
    prev = np.concatenate([[0.0], cums[:-1]])
    return cums, cums - prev


def quantiles_on_grid(measure, cums):
    """Quantile values of ``measure`` on the intervals ending at ``cums``."""
    prev = np.concatenate([[0.0], cums[:-1]])
    mid = 0.5 * (prev + cums)
    idx = np.searchsorted(measure.cumulative, mid)
    idx = np.clip(idx, 0, measure.atoms.size - 1)
    return measure.atoms[idx]


def barycenter_1d(measures, weights):
    """Wasserstein barycenter of 1-D measures: the weighted quantile average."""
    weights = np.asarray(weights, dtype=float)
    cums, dt = merged_grid(measures)
    vals = np.zeros_like(cums)
    for lam, m in zip(weights, measures):
        if lam != 0.0:
            vals += lam * quantiles_on_grid(m, cums)
    return make_measure(vals, dt)


def geodesic_1d(mu, nu, t):
    """McCann interpolation between 1-D measures (quantile interpolation)."""
    return barycenter_1d([mu, nu], [1.0 - t, t])


def log_map_1d(base, target):
    """Tangent representation of ``target`` at ``base``: (grid cums, displacement)."""
    cums, _dt = merged_grid([base, target])
    vals = quantiles_on_grid(target, cums) - quantiles_on_grid(base, cums)
    return cums, vals


def exp_map_1d(base, cums, vals):
    prev = np.concatenate([[0.0], cums[:-1]])
    new_q = quantiles_on_grid(base, cums) + vals
    return make_measure(new_q, cums - prev)


def tangent_norm_1d(cums, vals):
    prev = np.concatenate([[0.0], cums[:-1]])
    return float(np.sqrt(np.sum((cums - prev) * vals ** 2)))


def frechet_grad_norm(base, measures, weights):
    """Norm of the tangent mean sum_i w_i * log(base, nu_i) on a common grid."""
    cums, dt = merged_grid([base] + list(measures))
    qb = quantiles_on_grid(base, cums)
    v = np.zeros_like(cums)
    for lam, m in zip(weights, measures):
        if lam != 0.0:
            v += lam * (quantiles_on_grid(m, cums) - qb)
    return float(np.sqrt(np.sum(dt * v ** 2)))
