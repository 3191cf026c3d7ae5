"""Model spaces of global nonpositive curvature.

Supported spaces: Euclidean R^n, the Poincare upper half-plane, symmetric
positive-definite matrices under the trace metric, finite direct products,
and 1-D Wasserstein space over discrete measures.  All distances use closed
forms; numerical geodesic integration appears only in test oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Tuple

import numpy as np

from . import measures1d
from .errors import (
    BaseMismatch,
    InvalidPoint,
    ParameterOutOfRange,
    SpaceMismatch,
)
from .kernels import halfplane_distance, jacobi_eigh

_HP_MIN_IM = 1e-12
_SPD_SYM_REL = 1e-12
_SPD_EIG_REL = 1e-12


@dataclass(frozen=True)
class Space:
    """Tagged geometry descriptor.  Immutable; construct via the factories below."""

    kind: str
    dim: int = 0
    order: int = 0
    factors: Tuple["Space", ...] = ()
    support_size: int = 0


def Euclidean(dim):
    if dim < 1:
        raise ParameterOutOfRange("Euclidean dim must be >= 1")
    return Space("euclidean", dim=int(dim))


def HalfPlane():
    return Space("halfplane")


def Spd(order):
    if order < 1:
        raise ParameterOutOfRange("Spd order must be >= 1")
    return Space("spd", order=int(order))


def Product(*factors):
    if len(factors) < 1:
        raise ParameterOutOfRange("Product needs at least one factor")
    if not all(isinstance(f, Space) for f in factors):
        raise ParameterOutOfRange("Product factors must be Space instances")
    return Space("product", factors=tuple(factors))


def Wasserstein1D(support_size):
    if support_size < 1:
        raise ParameterOutOfRange("Wasserstein1D support_size must be >= 1")
    return Space("wasserstein1d", support_size=int(support_size))


@dataclass(frozen=True)
class Point:
    space: Space
    payload: Any

    def __eq__(self, other):
        if not isinstance(other, Point) or self.space != other.space:
            return NotImplemented
        return distance(self.space, self, other) == 0.0

    def __hash__(self):
        return hash(self.space)


@dataclass(frozen=True)
class TangentVector:
    base: Point
    components: Any


# ---------------------------------------------------------------------------
# validation / construction

def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_payload(space, payload):
    """Return (normalized_payload, None) or (None, diagnostic string)."""
    k = space.kind
    if k == "euclidean":
        try:
            a = np.asarray(payload, dtype=float).ravel()
        except (TypeError, ValueError):
            return None, "payload is not a real vector"
        if a.size != space.dim:
            return None, f"expected vector of length {space.dim}, got {a.size}"
        if not np.all(np.isfinite(a)):
            return None, "non-finite coordinate"
        return _frozen(a), None
    if k == "halfplane":
        if isinstance(payload, complex):
            z = payload
        else:
            try:
                re, im = payload
                z = complex(float(re), float(im))
            except (TypeError, ValueError):
                return None, "payload is not a complex number or (re, im) pair"
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None, "non-finite coordinate"
        if z.imag < _HP_MIN_IM:
            return None, "im <= 0"
        return z, None
    if k == "spd":
        try:
            m = np.asarray(payload, dtype=float)
        except (TypeError, ValueError):
            return None, "payload is not a real matrix"
        n = space.order
        if m.shape != (n, n):
            return None, f"expected {n}x{n} matrix, got shape {m.shape}"
        if not np.all(np.isfinite(m)):
            return None, "non-finite entry"
        top = max(float(np.max(np.abs(m))), 1e-300)
        if float(np.max(np.abs(m - m.T))) > _SPD_SYM_REL * top:
            return None, "not symmetric"
        sym = 0.5 * (m + m.T)
        w, _ = jacobi_eigh(sym)
        if w[0] < _SPD_EIG_REL * max(w[-1], 0.0) or w[0] <= 0.0:
            return None, "eigenvalue <= 0"
        return _frozen(sym), None
    if k == "product":
        if len(payload) != len(space.factors):
            return None, f"expected {len(space.factors)} components, got {len(payload)}"
        comps = []
        for idx, (factor, item) in enumerate(zip(space.factors, payload)):
            if isinstance(item, Point):
                if item.space != factor:
                    return None, f"component {idx} belongs to a different space"
                comps.append(item)
            else:
                sub, diag = _check_payload(factor, item)
                if diag is not None:
                    return None, f"component {idx}: {diag}"
                comps.append(Point(factor, sub))
        return tuple(comps), None
    if k == "wasserstein1d":
        from .errors import InvalidMeasure
        if isinstance(payload, measures1d.DiscreteMeasure1D):
            return payload, None
        try:
            atoms, weights = payload
            return measures1d.make_measure(atoms, weights), None
        except (InvalidMeasure, TypeError, ValueError) as exc:
            return None, f"invalid 1-D measure: {exc}"
    raise ParameterOutOfRange(f"unknown space kind {k!r}")


def point(space, payload):
    """Validate ``payload`` and wrap it as a Point of ``space``."""
    norm, diag = _check_payload(space, payload)
    if diag is not None:
        raise InvalidPoint(diag)
    return Point(space, norm)


def validate_point(space, p):
    """Return 'ok' or the specific violated invariant as a diagnostic string."""
    if isinstance(p, Point):
        if p.space != space:
            return "point belongs to a different space"
        p = p.payload
    _, diag = _check_payload(space, p)
    return "ok" if diag is None else diag


def _require(space, *pts):
    for p in pts:
        if not isinstance(p, Point):
            raise InvalidPoint("expected a Point; build one with point(space, payload)")
        if p.space != space:
            raise SpaceMismatch(f"point of {p.space.kind} used in {space.kind}")


# ---------------------------------------------------------------------------
# SPD helpers (all via the in-repo Jacobi eigensolver)

def _spd_apply(mat, func):
    w, v = jacobi_eigh(mat)
    return (v * func(w)) @ v.T


def spd_sqrt(mat):
    return _spd_apply(mat, np.sqrt)


def spd_inv_sqrt(mat):
    return _spd_apply(mat, lambda w: 1.0 / np.sqrt(w))


def spd_logm(mat):
    return _spd_apply(mat, np.log)


def spd_expm(mat):
    return _spd_apply(mat, np.exp)


def _spd_distance(a, b):
    c = spd_inv_sqrt(b) @ a @ spd_inv_sqrt(b)
    w, _ = jacobi_eigh(0.5 * (c + c.T))
    w = np.clip(w, 1e-300, None)
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


# ---------------------------------------------------------------------------
# half-plane helpers

def _hp_dist(z, w):
    return float(halfplane_distance(z.real, z.imag, w.real, w.imag))


def _hp_log(z0, z1):
    """Euclidean 2-vector at z0 whose metric norm equals d(z0, z1)."""
    d = _hp_dist(z0, z1)
    if d == 0.0:
        return np.zeros(2)
    x0, y0 = z0.real, z0.imag
    x1, y1 = z1.real, z1.imag
    span = max(abs(x0), abs(x1), y0, y1)
    if abs(x1 - x0) <= 1e-13 * span:
        sign = 1.0 if y1 >= y0 else -1.0
        return d * np.array([0.0, sign * y0])
    # geodesic is the semicircle through z0, z1 centered at (c, 0)
    c = (x1 * x1 + y1 * y1 - x0 * x0 - y0 * y0) / (2.0 * (x1 - x0))
    r = math.hypot(x0 - c, y0)
    sigma = 1.0 if x1 > x0 else -1.0
    u = sigma * (y0 / r) * np.array([y0, -(x0 - c)])
    return d * u


def _hp_exp(z0, v):
    x0, y0 = z0.real, z0.imag
    s = math.hypot(v[0], v[1]) / y0  # metric norm of v
    if s < 1e-300:
        return z0
    u = np.asarray(v, dtype=float) / s  # Euclidean length y0
    if abs(u[0]) <= 1e-13 * y0:
        sign = 1.0 if u[1] >= 0.0 else -1.0
        return complex(x0, y0 * math.exp(sign * s))
    sigma = 1.0 if u[0] > 0.0 else -1.0
    c = x0 + y0 * u[1] / u[0]
    r = math.hypot(x0 - c, y0)
    t0 = math.atanh(max(-1.0 + 1e-16, min(1.0 - 1e-16, sigma * (x0 - c) / r)))
    t1 = t0 + s
    x = c + sigma * r * math.tanh(t1)
    y = r / math.cosh(t1)
    if y <= 0.0 or not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidPoint("half-plane exponential left the upper half-plane")
    return complex(x, y)


# ---------------------------------------------------------------------------
# public operations

def distance(space, p, q):
    """Geodesic distance between two points of ``space``."""
    _require(space, p, q)
    return _distance(space, p, q)


def _distance(space, p, q):
    k = space.kind
    if k == "euclidean":
        return float(np.linalg.norm(p.payload - q.payload))
    if k == "halfplane":
        return _hp_dist(p.payload, q.payload)
    if k == "spd":
        return _spd_distance(p.payload, q.payload)
    if k == "product":
        return math.sqrt(
            sum(_distance(f, a, b) ** 2 for f, a, b in zip(space.factors, p.payload, q.payload))
        )
    if k == "wasserstein1d":
        return measures1d.w2_quantile(p.payload, q.payload)
    raise ParameterOutOfRange(f"unknown space kind {k!r}")


def log_map(space, base, p):
    """Inverse exponential: tangent vector at ``base`` pointing to ``p``."""
    _require(space, base, p)
    k = space.kind
    if k == "euclidean":
        comp = p.payload - base.payload
    elif k == "halfplane":
        comp = _hp_log(base.payload, p.payload)
    elif k == "spd":
        b_half = spd_sqrt(base.payload)
        b_inv_half = spd_inv_sqrt(base.payload)
        inner = b_inv_half @ p.payload @ b_inv_half
        comp = b_half @ spd_logm(0.5 * (inner + inner.T)) @ b_half
        comp = 0.5 * (comp + comp.T)
    elif k == "product":
        comp = tuple(
            log_map(f, a, b) for f, a, b in zip(space.factors, base.payload, p.payload)
        )
    elif k == "wasserstein1d":
        comp = measures1d.log_map_1d(base.payload, p.payload)
    else:
        raise ParameterOutOfRange(f"unknown space kind {k!r}")
    return TangentVector(base, comp)


def exp_map(space, base, v):
    """Exponential map: follow the geodesic from ``base`` with initial vector ``v``."""
    _require(space, base)
    if not isinstance(v, TangentVector):
        raise BaseMismatch("expected a TangentVector")
    if v.base.space != space or v.base is not base and v.base != base:
        raise BaseMismatch("tangent vector is based at a different point")
    k = space.kind
    if k == "euclidean":
        return point(space, base.payload + v.components)
    if k == "halfplane":
        return Point(space, _hp_exp(base.payload, v.components))
    if k == "spd":
        b_half = spd_sqrt(base.payload)
        b_inv_half = spd_inv_sqrt(base.payload)
        inner = b_inv_half @ v.components @ b_inv_half
        out = b_half @ spd_expm(0.5 * (inner + inner.T)) @ b_half
        return point(space, 0.5 * (out + out.T))
    if k == "product":
        return Point(
            space,
            tuple(
                exp_map(f, b, c)
                for f, b, c in zip(space.factors, base.payload, v.components)
            ),
        )
    if k == "wasserstein1d":
        cums, vals = v.components
        return Point(space, measures1d.exp_map_1d(base.payload, cums, vals))
    raise ParameterOutOfRange(f"unknown space kind {k!r}")


def tangent_norm(space, v):
    """Metric norm of a tangent vector (at its base point)."""
    k = space.kind
    if k == "euclidean":
        return float(np.linalg.norm(v.components))
    if k == "halfplane":
        return float(math.hypot(v.components[0], v.components[1]) / v.base.payload.imag)
    if k == "spd":
        b_inv_half = spd_inv_sqrt(v.base.payload)
        return float(np.linalg.norm(b_inv_half @ v.components @ b_inv_half))
    if k == "product":
        return math.sqrt(sum(tangent_norm(f, c) ** 2 for f, c in zip(space.factors, v.components)))
    if k == "wasserstein1d":
        cums, vals = v.components
        return measures1d.tangent_norm_1d(cums, vals)
    raise ParameterOutOfRange(f"unknown space kind {k!r}")


def scale_tangent(space, v, alpha):
    k = space.kind
    if k in ("euclidean", "halfplane", "spd"):
        return TangentVector(v.base, alpha * v.components)
    if k == "product":
        # components of a product tangent are themselves TangentVectors
        return TangentVector(
            v.base,
            tuple(scale_tangent(f, c, alpha)
                  for f, c in zip(space.factors, v.components)),
        )
    if k == "wasserstein1d":
        cums, vals = v.components
        return TangentVector(v.base, (cums, alpha * vals))
    raise ParameterOutOfRange(f"unknown space kind {k!r}")


def combine_tangents(space, base, vectors, weights):
    """Weighted sum of tangent vectors sharing the same base point.

    Not supported for Wasserstein1D (its barycenters are closed-form and never
    need the generic Karcher combination).
    """
    k = space.kind
    if k in ("euclidean", "halfplane", "spd"):
        shape = (2,) if k == "halfplane" else (
            (space.dim,) if k == "euclidean" else (space.order, space.order))
        acc = np.zeros(shape)
        for w, v in zip(weights, vectors):
            if w != 0.0:
                acc = acc + w * v.components
        return TangentVector(base, acc)
    if k == "product":
        comps = []
        for idx, f in enumerate(space.factors):
            sub = combine_tangents(
                f,
                base.payload[idx],
                [v.components[idx] for v in vectors],
                weights,
            )
            comps.append(sub)
        return TangentVector(base, tuple(comps))
    raise ParameterOutOfRange(f"combine_tangents unsupported for {k!r}")


def geodesic_point(space, p, q, t):
    """Point gamma(t) on the unique geodesic from p (t=0) to q (t=1)."""
    _require(space, p, q)
    if not (0.0 <= t <= 1.0):
        raise ParameterOutOfRange(f"t = {t} outside [0, 1]")
    k = space.kind
    if k == "euclidean":
        return Point(space, _frozen((1.0 - t) * p.payload + t * q.payload))
    if k == "product":
        return Point(
            space,
            tuple(geodesic_point(f, a, b, t) for f, a, b in zip(space.factors, p.payload, q.payload)),
        )
    if k == "wasserstein1d":
        return Point(space, measures1d.geodesic_1d(p.payload, q.payload, t))
    if t == 0.0:
        return p
    if t == 1.0:
        return q
    return exp_map(space, p, scale_tangent(space, log_map(space, p, q), t))


def midpoint(space, p, q):
    return geodesic_point(space, p, q, 0.5)
