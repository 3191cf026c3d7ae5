"""Command-line front door.

Exit codes: 0 = holds/feasible/converged, 1 = violated/infeasible,
2 = invalid input, 3 = solver non-convergence.
"""

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from .barycenter import barycenter as solve_barycenter, discrete_measure

from . import __version__, geometry, inequalities, serialization
from . import stochastic, wasserstein
from .errors import InvalidInstance, NotConverged, NpcmajError

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_BAD_INPUT = 2
EXIT_NOT_CONVERGED = 3

INSTANCE_FIELDS = {
    "space", "x_atoms", "lambda", "y_atoms", "mu", "A", "D",
    "measure", "measures", "weights", "nu_left", "nu_right", "tol",
}


def parse_space_string(text):
    """Parse compact descriptors like euclidean:2, spd:3, halfplane,
    wasserstein1d:4, or product:euclidean:1,halfplane."""
    if text.startswith("product:"):
        factors = [parse_space_string(part) for part in text[len("product:"):].split(",")]
        return geometry.Product(*factors)
    name, _, arg = text.partition(":")
    if name == "euclidean":
        return geometry.Euclidean(int(arg or 1))
    if name == "halfplane":
        return geometry.HalfPlane()
    if name == "spd":
        return geometry.Spd(int(arg or 2))
    if name == "wasserstein1d":
        return geometry.Wasserstein1D(int(arg or 2))
    raise InvalidInstance(f"unknown space descriptor {text!r}")


def load_instance(path):
    try:
        with open(path, "r") as fh:
            raw = fh.read()
        obj = json.loads(raw)
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")
    if not isinstance(obj, dict):
        raise InvalidInstance("instance file must hold a JSON object")
    unknown = set(obj) - INSTANCE_FIELDS
    if unknown:
        raise InvalidInstance(f"unknown instance fields: {sorted(unknown)}")
    return obj, raw


def _digest(raw, flags):
    h = hashlib.sha256()
    h.update(raw.encode() if isinstance(raw, str) else raw)
    h.update(json.dumps(flags, sort_keys=True).encode())
    return h.hexdigest()


def _emit(report, args):
    if getattr(args, "format", "json") == "csv" and isinstance(report.get("results"), list):
        lines = [inequalities.CSV_HEADER]
        lines += [r.to_csv_row() for r in report["raw_reports"]]
        text = "\n".join(lines) + "\n"
    else:
        payload = dict(report)
        payload.pop("raw_reports", None)
        text = json.dumps(payload, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command, raw, flags, seed, results, t0):
    return {
        "command": command,
        "inputs_digest": _digest(raw, flags),
        "seed": seed,
        "results": results,
        "wall_time_s": time.perf_counter() - t0,
        "version": __version__,
    }


def _space_and_points(obj, *fields):
    space = serialization.space_from_json(obj["space"])
    out = [space]
    for f in fields:
        out.append([serialization.point_from_json(space, p) for p in obj[f]])
    return out


def cmd_barycenter(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    space = serialization.space_from_json(obj["space"])
    m = obj["measure"]
    atoms = [serialization.point_from_json(space, p) for p in m["atoms"]]
    measure = discrete_measure(space, atoms, m["weights"])
    res = solve_barycenter(space, measure, tol=obj.get("tol", args.tol))
    report = _report("barycenter", raw, {"tol": args.tol}, args.seed,
                     serialization.barycenter_result_to_json(res), t0)
    _emit(report, args)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_verify(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    space, xs, ys = _space_and_points(obj, "x_atoms", "y_atoms")
    cert = stochastic.verify_majorization(
        space, xs, obj["lambda"], ys, obj["mu"], np.array(obj["A"]),
        tol=obj.get("tol", args.tol),
        ignore_zero_weight_rows=args.ignore_zero_weight_rows,
    )
    report = _report("verify", raw, {"tol": args.tol}, args.seed,
                     serialization.certificate_to_json(cert), t0)
    _emit(report, args)
    if not cert.solver_converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK if cert.valid else EXIT_VIOLATED


def cmd_synthesize(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    space, ys = _space_and_points(obj, "y_atoms")
    xs, mu, cert = stochastic.synthesize_majorized(
        space, ys, obj["lambda"], np.array(obj["A"]), tol=obj.get("tol", args.tol))
    results = serialization.certificate_to_json(cert)
    report = _report("synthesize", raw, {"tol": args.tol}, args.seed, results, t0)
    _emit(report, args)
    return EXIT_OK if cert.valid else EXIT_VIOLATED


def cmd_decide(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    space, xs, ys = _space_and_points(obj, "x_atoms", "y_atoms")
    A = stochastic.decide_majorization_euclidean(
        xs, obj["lambda"], ys, obj["mu"], tol=obj.get("tol", args.tol))
    results = {"feasible": A is not None,
               "A": None if A is None else serialization.matrix_to_json(A)}
    report = _report("decide", raw, {"tol": args.tol}, args.seed, results, t0)
    _emit(report, args)
    return EXIT_OK if A is not None else EXIT_VIOLATED


def cmd_birkhoff(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    D = np.array(obj["D"], dtype=float)
    decomp = stochastic.birkhoff_decompose(D)
    err = float(np.max(np.abs(decomp.reconstruct() - D)))
    results = {
        "terms": [{"weight": w, "permutation": list(p)} for w, p in decomp.terms],
        "reconstruction_error": err,
    }
    report = _report("birkhoff", raw, {}, args.seed, results, t0)
    _emit(report, args)
    return EXIT_OK


def cmd_rado(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    space, xs, ys = _space_and_points(obj, "x_atoms", "y_atoms")
    A = np.array(obj["A"], dtype=float) if "A" in obj else None
    probe = stochastic.rado_probe(space, xs, ys, tol=obj.get("tol", args.tol), A=A)
    results = {
        "necessity_holds": probe.necessity_holds,
        "hull_coefficients": None if probe.hull_coefficients is None
        else [float(v) for v in probe.hull_coefficients],
        "birkhoff_residual": probe.birkhoff_residual,
    }
    report = _report("rado", raw, {"tol": args.tol}, args.seed, results, t0)
    _emit(report, args)
    return EXIT_OK if probe.necessity_holds else EXIT_VIOLATED


def cmd_wasserstein(args):
    t0 = time.perf_counter()
    obj, raw = load_instance(args.instance)
    results = {}
    if "nu_left" in obj and "nu_right" in obj:
        mu = serialization.measure1d_from_json(obj["nu_left"])
        nu = serialization.measure1d_from_json(obj["nu_right"])
        results["w2"] = wasserstein.w2_quantile(mu, nu)
    if "measures" in obj:
        measures = [serialization.measure1d_from_json(m) for m in obj["measures"]]
        weights = obj.get("weights", [1.0 / len(measures)] * len(measures))
        bar = wasserstein.barycenter_1d(measures, weights)
        results["barycenter"] = serialization.measure1d_to_json(bar)
    if not results:
        raise InvalidInstance(
            "wasserstein needs nu_left/nu_right (distance) or measures (barycenter)")
    report = _report("wasserstein", raw, {}, args.seed, results, t0)
    _emit(report, args)
    return EXIT_OK


def cmd_fuzz(args):
    t0 = time.perf_counter()
    space = parse_space_string(args.space)
    suites = set(args.suite) if args.suite else None
    extra = wasserstein.w_functional_registry() if space.kind == "wasserstein1d" else ()
    reports = inequalities.fuzz_suite(
        space, seed=args.seed, trials=args.trials, tol=args.tol,
        extra_functionals=extra, suites=suites)
    payload = [r.to_json() for r in reports]
    report = _report(
        "fuzz", f"space={args.space}",
        {"trials": args.trials, "tol": args.tol, "suite": sorted(suites) if suites else None},
        args.seed, payload, t0)
    report["raw_reports"] = reports
    _emit(report, args)
    violations = sum(r.violations for r in reports)
    return EXIT_OK if violations == 0 else EXIT_VIOLATED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="npcmaj",
        description="Majorization, barycenters, and convexity checks on NPC "
                    "and Wasserstein spaces.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("instance", help="path to a JSON instance file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)

    p = sub.add_parser("barycenter", help="solve the weighted Frechet mean")
    common(p)
    p.set_defaults(func=cmd_barycenter)

    p = sub.add_parser("verify", help="check a majorization witness matrix")
    common(p)
    p.add_argument("--ignore-zero-weight-rows", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synthesize", help="build x-atoms from y-atoms and A")
    common(p)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("decide", help="LP decision of Euclidean majorization")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("birkhoff", help="decompose a doubly stochastic matrix")
    common(p)
    p.set_defaults(func=cmd_birkhoff)

    p = sub.add_parser("rado", help="probe Rado-necessity of a majorized tuple")
    common(p)
    p.set_defaults(func=cmd_rado)

    p = sub.add_parser("wasserstein", help="1-D W2 distances and barycenters")
    common(p)
    p.set_defaults(func=cmd_wasserstein)

    p = sub.add_parser("fuzz", help="seeded fuzz campaign over all checkers")
    common(p, instance=False)
    p.add_argument("--space", required=True, help="e.g. euclidean:2, halfplane, spd:2")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--suite", action="append", default=None,
                   help="restrict to a named suite (repeatable)")
    p.set_defaults(func=cmd_fuzz)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses code 2 for usage errors, matching our contract
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error: malformed instance: {exc!r}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except NpcmajError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
