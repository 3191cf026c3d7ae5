"""Weighted Frechet/Karcher barycenters of discrete measures on NPC spaces."""

from collections import namedtuple
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import geometry, measures1d
from .errors import (
    InvalidMeasure,
    LengthMismatch,
    NonFinite,
    NotConverged,
    SpaceMismatch,
)
from .geometry import Point, combine_tangents, distance, exp_map, log_map, tangent_norm

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure on a Space."""

    space: geometry.Space
    atoms: Tuple[Point, ...]
    weights: np.ndarray


def discrete_measure(space, atoms, weights):
    atoms = tuple(atoms)
    if not atoms:
        raise InvalidMeasure("measure needs at least one atom")
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.size != len(atoms):
        raise InvalidMeasure("atoms and weights length mismatch")
    if not np.all(np.isfinite(weights)):
        raise InvalidMeasure("non-finite weight")
    if np.any(weights < -1e-12):
        raise InvalidMeasure("negative weight")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise InvalidMeasure(f"weights sum to {weights.sum()!r}, expected 1")
    for a in atoms:
        if not isinstance(a, Point):
            raise InvalidMeasure("atoms must be Point instances")
        if a.space != space:
            raise SpaceMismatch("atom belongs to a different space")
    weights = np.clip(weights, 0.0, None)
    weights.setflags(write=False)
    return DiscreteMeasure(space, atoms, weights)


@dataclass(frozen=True)
class BarycenterResult:
    point: Point
    objective: float
    grad_norm: float
    iterations: int
    converged: bool


def objective(space, measure, z):
    """J(z) = 1/2 * sum_i w_i * d^2(z, x_i)."""
    if measure.space != space:
        raise SpaceMismatch("measure belongs to a different space")
    return 0.5 * float(
        sum(w * distance(space, z, a) ** 2 for w, a in zip(measure.weights, measure.atoms))
    )


def _pairwise_scale(space, atoms):
    scale = 0.0
    for i in range(len(atoms)):
        for j in range(i + 1, len(atoms)):
            scale = max(scale, distance(space, atoms[i], atoms[j]))
    return scale


def _grad_norm_at(space, measure, z):
    if space.kind == "wasserstein1d":
        return measures1d.frechet_grad_norm(
            z.payload, [a.payload for a in measure.atoms], measure.weights
        )
    if space.kind == "product":
        total = 0.0
        for idx, factor in enumerate(space.factors):
            sub = discrete_measure(factor, [a.payload[idx] for a in measure.atoms],
                                   measure.weights)
            total += _grad_norm_at(factor, sub, z.payload[idx]) ** 2
        return float(np.sqrt(total))
    logs = [log_map(space, z, a) for a in measure.atoms]
    mean = combine_tangents(space, z, logs, measure.weights)
    return tangent_norm(space, mean)


def barycenter(space, measure, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
               force_iterative=False):
    """Minimize J over the space.

    Closed forms: Euclidean weighted mean, 1-D Wasserstein quantile average,
    componentwise recursion for products, and the geodesic point for two
    atoms.  Everything else runs the Karcher fixed-point iteration
    z <- exp_z(sum_i w_i log_z(x_i)) from the heaviest atom.  Non-convergence
    is reported in the result, not raised.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be > 0 and max_iter >= 1")
    if measure.space != space:
        raise SpaceMismatch("measure belongs to a different space")

    live = [(w, a) for w, a in zip(measure.weights, measure.atoms) if w > 0.0]
    weights = np.array([w for w, _ in live])
    atoms = [a for _, a in live]
    scale = _pairwise_scale(space, atoms)

    def finish(pt, iters, converged):
        return BarycenterResult(
            point=pt,
            objective=objective(space, measure, pt),
            grad_norm=_grad_norm_at(space, measure, pt),
            iterations=iters,
            converged=converged,
        )

    if len(atoms) == 1 or scale == 0.0:
        return finish(atoms[0], 0, True)

    if not force_iterative:
        if space.kind == "euclidean":
            mean = sum(w * a.payload for w, a in zip(weights, atoms))
            return finish(geometry.point(space, mean), 0, True)
        if space.kind == "wasserstein1d":
            bar = measures1d.barycenter_1d([a.payload for a in atoms], weights)
            return finish(Point(space, bar), 0, True)
        if space.kind == "product":
            comps = []
            iters = 0
            converged = True
            for idx, factor in enumerate(space.factors):
                sub = discrete_measure(factor, [a.payload[idx] for a in atoms], weights)
                res = barycenter(factor, sub, tol=tol, max_iter=max_iter)
                comps.append(res.point)
                iters = max(iters, res.iterations)
                converged = converged and res.converged
            return finish(Point(space, tuple(comps)), iters, converged)
        if len(atoms) == 2:
            pt = geometry.geodesic_point(space, atoms[0], atoms[1], float(weights[1]))
            return finish(pt, 0, True)

    if space.kind == "wasserstein1d":
        # the quantile average is the exact minimizer; iteration adds nothing
        bar = measures1d.barycenter_1d([a.payload for a in atoms], weights)
        return finish(Point(space, bar), 0, True)

    # Karcher fixed point from the heaviest atom (ties: lowest index)
    z = atoms[int(np.argmax(weights))]
    threshold = tol * scale
    step = 1.0
    prev_gn = np.inf
    for it in range(1, max_iter + 1):
        logs = [log_map(space, z, a) for a in atoms]
        mean = combine_tangents(space, z, logs, weights)
        gn = tangent_norm(space, mean)
        if not np.isfinite(gn):
            raise NonFinite("Karcher iteration produced a non-finite gradient")
        if gn <= threshold:
            return finish(z, it - 1, True)
        # the full step can enter a period-2 oscillation in strongly curved
        # regions; halve it whenever the gradient stops decreasing
        if gn >= prev_gn and step > 2.0 ** -8:
            step *= 0.5
        prev_gn = gn
        z = exp_map(space, z, mean if step == 1.0
                    else geometry.scale_tangent(space, mean, step))
    return finish(z, max_iter, False)


CheckOutcome = namedtuple("CheckOutcome", ["ok", "slack"])


def variance_inequality_check(space, measure, z, tol=1e-8):
    """d^2(bar, z) <= sum_i w_i d^2(x_i, z), with slack reported."""
    res = barycenter(space, measure)
    if not res.converged:
        raise NotConverged("barycenter solver did not converge")
    rhs = float(
        sum(w * distance(space, a, z) ** 2 for w, a in zip(measure.weights, measure.atoms))
    )
    lhs = distance(space, res.point, z) ** 2
    scale = max(_pairwise_scale(space, list(measure.atoms) + [z]), 1e-12)
    slack = lhs - rhs
    return CheckOutcome(slack <= tol * scale ** 2, slack)


def mean_contraction_check(space, xs, ys, tol=1e-8):
    """d(mean of x, mean of y) <= average of pairwise distances."""
    if len(xs) != len(ys):
        raise LengthMismatch("x and y lists must have equal lengths")
    n = len(xs)
    w = np.full(n, 1.0 / n)
    bx = barycenter(space, discrete_measure(space, xs, w))
    by = barycenter(space, discrete_measure(space, ys, w))
    if not (bx.converged and by.converged):
        raise NotConverged("barycenter solver did not converge")
    rhs = float(np.mean([distance(space, a, b) for a, b in zip(xs, ys)]))
    lhs = distance(space, bx.point, by.point)
    scale = max(_pairwise_scale(space, list(xs) + list(ys)), 1e-12)
    slack = lhs - rhs
    return CheckOutcome(slack <= tol * scale, slack)
