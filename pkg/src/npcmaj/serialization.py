"""JSON encodings for spaces, points, measures, matrices, and certificates.

Finite doubles round-trip bit-exactly: Python's float repr (used by the json
module) is the shortest decimal that parses back to the same double.
"""

import numpy as np

from . import geometry, measures1d
from .errors import InvalidInstance


def space_to_json(space):
    k = space.kind
    if k == "euclidean":
        return {"kind": "euclidean", "dim": space.dim}
    if k == "halfplane":
        return {"kind": "halfplane"}
    if k == "spd":
        return {"kind": "spd", "order": space.order}
    if k == "product":
        return {"kind": "product", "factors": [space_to_json(f) for f in space.factors]}
    if k == "wasserstein1d":
        return {"kind": "wasserstein1d", "support_size": space.support_size}
    raise InvalidInstance(f"unknown space kind {k!r}")


def space_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidInstance("space descriptor must be an object with a 'kind'")
    k = obj["kind"]
    try:
        if k == "euclidean":
            _reject_unknown(obj, {"kind", "dim"})
            return geometry.Euclidean(obj["dim"])
        if k == "halfplane":
            _reject_unknown(obj, {"kind"})
            return geometry.HalfPlane()
        if k == "spd":
            _reject_unknown(obj, {"kind", "order"})
            return geometry.Spd(obj["order"])
        if k == "product":
            _reject_unknown(obj, {"kind", "factors"})
            return geometry.Product(*[space_from_json(f) for f in obj["factors"]])
        if k == "wasserstein1d":
            _reject_unknown(obj, {"kind", "support_size"})
            return geometry.Wasserstein1D(obj["support_size"])
    except KeyError as exc:
        raise InvalidInstance(f"space descriptor missing field {exc}")
    raise InvalidInstance(f"unknown space kind {k!r}")


def _reject_unknown(obj, allowed):
    extra = set(obj) - allowed
    if extra:
        raise InvalidInstance(f"unknown fields: {sorted(extra)}")


def point_to_json(p):
    k = p.space.kind
    if k == "euclidean":
        return [float(v) for v in p.payload]
    if k == "halfplane":
        return {"re": p.payload.real, "im": p.payload.imag}
    if k == "spd":
        return [[float(v) for v in row] for row in p.payload]
    if k == "product":
        return [point_to_json(c) for c in p.payload]
    if k == "wasserstein1d":
        return {"atoms": [float(a) for a in p.payload.atoms],
                "weights": [float(w) for w in p.payload.weights]}
    raise InvalidInstance(f"unknown space kind {k!r}")


def point_from_json(space, obj):
    k = space.kind
    if k == "halfplane":
        if not isinstance(obj, dict):
            raise InvalidInstance("half-plane point must be {'re': ..., 'im': ...}")
        _reject_unknown(obj, {"re", "im"})
        return geometry.point(space, (obj["re"], obj["im"]))
    if k == "wasserstein1d":
        if not isinstance(obj, dict):
            raise InvalidInstance("measure point must be {'atoms': ..., 'weights': ...}")
        _reject_unknown(obj, {"atoms", "weights"})
        return geometry.point(space, (obj["atoms"], obj["weights"]))
    if k == "product":
        return geometry.point(
            space, tuple(point_from_json(f, o) for f, o in zip(space.factors, obj))
        )
    return geometry.point(space, obj)


def measure_to_json(measure):
    return {
        "space": space_to_json(measure.space),
        "atoms": [point_to_json(a) for a in measure.atoms],
        "weights": [float(w) for w in measure.weights],
    }


def measure1d_to_json(m):
    return {"atoms": [float(a) for a in m.atoms], "weights": [float(w) for w in m.weights]}


def measure1d_from_json(obj):
    _reject_unknown(obj, {"atoms", "weights"})
    return measures1d.make_measure(obj["atoms"], obj["weights"])


def matrix_to_json(A):
    return [[float(v) for v in row] for row in np.atleast_2d(A)]


def certificate_to_json(cert):
    return {
        "space": space_to_json(cert.space),
        "A": matrix_to_json(cert.A),
        "lambda": [float(v) for v in cert.lam],
        "mu": [float(v) for v in cert.mu],
        "x_atoms": [point_to_json(p) for p in cert.x_atoms],
        "y_atoms": [point_to_json(p) for p in cert.y_atoms],
        "residuals": [float(v) for v in cert.residuals],
        "pushforward_error": cert.pushforward_error,
        "tol": cert.tol,
        "valid": cert.valid,
        "solver_converged": cert.solver_converged,
    }


def barycenter_result_to_json(res):
    return {
        "point": point_to_json(res.point),
        "objective": res.objective,
        "grad_norm": res.grad_norm,
        "iterations": res.iterations,
        "converged": res.converged,
    }
