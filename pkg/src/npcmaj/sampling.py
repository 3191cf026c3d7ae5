"""Seeded random generators for points, weights, and stochastic matrices.

All randomness flows from (seed, trial index) pairs through numpy's
SeedSequence, so parallel and serial fuzzing produce identical streams.
"""

import itertools

import numpy as np

from . import geometry, measures1d


def trial_rng(seed, index=0):
    """Independent, reproducible generator for one fuzz trial."""
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),)))


def random_point(space, rng, spread=1.0):
    k = space.kind
    if k == "euclidean":
        return geometry.point(space, rng.normal(0.0, spread, space.dim))
    if k == "halfplane":
        return geometry.point(
            space, complex(rng.normal(0.0, spread), np.exp(rng.normal(0.0, spread)))
        )
    if k == "spd":
        n = space.order
        g = rng.normal(0.0, spread, (n, n))
        return geometry.point(space, geometry.spd_expm(0.5 * (g + g.T)))
    if k == "product":
        return geometry.Point(
            space, tuple(random_point(f, rng, spread) for f in space.factors)
        )
    if k == "wasserstein1d":
        n = space.support_size
        atoms = np.sort(rng.normal(0.0, spread, n))
        atoms += np.arange(n) * 1e-6  # keep atoms distinct after canonicalization
        return geometry.point(space, (atoms, random_weights(rng, n, positive=True)))
    raise ValueError(f"unknown space kind {k!r}")


def random_weights(rng, n, positive=False):
    """Random probability vector; with ``positive`` every entry stays >= ~1/(10n)."""
    alpha = np.ones(n) * (5.0 if positive else 1.0)
    w = rng.dirichlet(alpha)
    if positive:
        w = 0.9 * w + 0.1 / n
    w = w / w.sum()
    return w


def random_row_stochastic(rng, m, n):
    return np.vstack([rng.dirichlet(np.ones(n)) for _ in range(m)])


def random_doubly_stochastic(rng, n, terms=None):
    """Random convex combination of permutation matrices."""
    if terms is None:
        terms = n + 2
    perms = [rng.permutation(n) for _ in range(terms)]
    w = rng.dirichlet(np.ones(terms))
    out = np.zeros((n, n))
    for wk, pk in zip(w, perms):
        out[np.arange(n), pk] += wk
    return out


def all_permutations(n):
    return list(itertools.permutations(range(n)))


def random_measure_1d(rng, max_atoms=4, spread=1.0):
    n = int(rng.integers(1, max_atoms + 1))
    atoms = np.sort(rng.normal(0.0, spread, n)) + np.arange(n) * 1e-6
    return measures1d.make_measure(atoms, random_weights(rng, n, positive=True))
