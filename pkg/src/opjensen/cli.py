"""Command line front end: ``opjensen {check,gen,search,selftest,calc}``.

Exit codes: 0 pass / witness found, 1 inequality violated or selftest
failure, 2 invalid input, 3 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import __version__
from .convexfn import CONVEX_CATALOG, NONCONVEX_CATALOG, EvaluationError, catalog, midpoint_convexity_probe, parse
from .expectation import cond_expect
from .fields import compress, transform
from .instances import (
    InstanceError,
    canonical_hash,
    dumps,
    instance_from_json,
    instance_to_json,
    loads_json,
    report_to_json,
)
from .jensen import JensenInstance, check_conditional, conditional_measures, search_counterexample
from .jointspec import CubeDomain, apply_function
from .linalg import DEFAULT_POLICY, NumericalError, TolerancePolicy, ValidationError
from .sampling import random_context, random_psd, random_tuple_field, random_unital_field

log = logging.getLogger("opjensen")

EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_EXHAUSTED = 0, 1, 2, 3
PROBE_SAMPLES = 10_000
LIMITS = {"dim": 64, "n": 4, "field_size": 64}


def _policy(args) -> TolerancePolicy:
    changes = {}
    if getattr(args, "tol_atol", None) is not None:
        changes["ineq_atol"] = args.tol_atol
    if getattr(args, "tol_rtol", None) is not None:
        changes["ineq_rtol"] = args.tol_rtol
    return DEFAULT_POLICY.replace(**changes)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _invalid(exc: Exception) -> int:
    obj = exc.to_json() if isinstance(exc, InstanceError) else {"error": "invalid_input", "message": str(exc)}
    sys.stdout.write(dumps(obj))
    return EXIT_INVALID


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def load_instance(path: str, policy: TolerancePolicy):
    obj = loads_json(_read(path))
    inst, seed = instance_from_json(obj, policy)
    return obj, inst, seed


def function_arg(text: str, n: int, rng: np.random.Generator | None = None):
    """``name`` or ``name:p`` from the catalog, otherwise an expression."""
    name, _, param = text.partition(":")
    if name in CONVEX_CATALOG + NONCONVEX_CATALOG:
        params = {}
        if name in ("p_norm", "power_abs"):
            params["p"] = float(param or 2)
        elif name == "quadratic_form":
            params["Q"] = random_psd(rng, n) if rng is not None else np.eye(n)
        return catalog(name, params, n)
    return parse(text, n)


def cmd_check(args) -> int:
    policy = _policy(args)
    try:
        obj, inst, seed = load_instance(args.path, policy)
        convexity = midpoint_convexity_probe(inst.f, inst.dom, PROBE_SAMPLES, seed=seed or 0,
                                             rtol=policy.probe_rtol)
        if convexity.status != "probably_convex":
            log.warning("f is %s on the cube; the inequality may fail", convexity.status.replace("_", " "))
        report = check_conditional(inst, convexity, with_measures=False)
    except OSError as exc:
        return _invalid(InstanceError(f"cannot read {args.path}: {exc.strerror}"))
    except (ValidationError, EvaluationError, NumericalError) as exc:
        return _invalid(exc)
    _emit(dumps(report_to_json(report, policy, canonical_hash(obj), seed)), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_gen(args) -> int:
    for key, value in (("dim", args.dim), ("n", args.n), ("field_size", args.field_size)):
        if not 1 <= value <= LIMITS[key]:
            return _invalid(ValidationError(f"--{key.replace('_', '-')} must be in [1, {LIMITS[key]}]"))
    if not 1 <= args.atoms <= args.dim:
        return _invalid(ValidationError("--atoms must be in [1, dim]"))
    rng = np.random.default_rng(args.seed)
    try:
        f = function_arg(args.function, args.n, rng)
    except ValidationError as exc:
        return _invalid(exc)
    policy = DEFAULT_POLICY
    dom = CubeDomain.uniform(*f.default_cube, args.n)
    ctx = random_context(rng, args.dim, args.atoms, policy=policy)
    field = random_unital_field(rng, args.dim, args.field_size, policy)
    tfield = random_tuple_field(rng, args.dim, args.field_size, dom, policy)
    inst = JensenInstance(ctx, field, tfield, f, dom, policy)
    _emit(dumps(instance_to_json(inst, args.seed)), args.out)
    return EXIT_PASS


def cmd_search(args) -> int:
    policy = _policy(args)
    try:
        cube = json.loads(args.cube)
        dom = CubeDomain(tuple(tuple(iv) for iv in cube))
        f = function_arg(args.function, dom.n)
        dims = [int(d) for d in str(args.dims).split(",")]
        if any(not 1 <= d <= LIMITS["dim"] for d in dims):
            raise ValidationError("--dims entries must be in [1, 64]")
    except (ValueError, TypeError) as exc:
        return _invalid(exc)
    w = search_counterexample(f, dom, dims=dims, trials=args.trials, seed=args.seed, policy=policy)
    if w is None:
        _emit("none\n", args.out)
        return EXIT_EXHAUSTED
    obj = instance_to_json(w.instance, args.seed)
    obj["search"] = {"trial": w.trial, "margin": w.report.min_margin}
    _emit(dumps(obj), args.out)
    return EXIT_PASS


def cmd_selftest(args) -> int:
    from ._parallel import ordered_map
    from .suites import all_suites

    policy = _policy(args)
    suites = all_suites(scale=args.scale, seed=args.seed, policy=policy, cap=args.trials)
    results = ordered_map(lambda run: run(), suites)
    width = max(len(r.name) for r in results)
    print(f"{'suite':<{width}}  {'trials':>6}  {'max dev':>10}  {'limit':>8}  status")
    for r in results:
        status = "ok" if r.passed else f"FAIL (seed, trial) = {r.failing_seed}"
        print(f"{r.name:<{width}}  {r.trials:>6}  {r.max_dev:>10.3e}  {r.limit:>8.1e}  {status}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_FAIL if failed else EXIT_PASS


def _fmt(m) -> str:
    return np.array2string(np.asarray(m), precision=6, suppress_small=True, max_line_width=120)


def cmd_calc(args) -> int:
    policy = _policy(args)
    try:
        _, inst, _ = load_instance(args.path, policy)
        ys = compress(inst.field, inst.tfield, policy)
        out = []
        for t, tup in enumerate(inst.tfield.tuples):
            out.append(f"f(x_{t}) =\n{_fmt(apply_function(inst.f, tup, inst.dom, policy))}")
        for i, y in enumerate(ys, 1):
            out.append(f"y_{i} =\n{_fmt(y)}")
        support = inst.ctx.support
        out.append(f"mu = {_fmt(inst.ctx.measure.weights)}  (supported atoms {support.tolist()})")
        phis = [cond_expect(inst.ctx, y).values.real for y in ys]
        out.append("Phi(y) = " + ", ".join("(" + ", ".join(f"{p[s]:.6g}" for p in phis) + ")" for s in support))
        big = transform(inst.field, inst.tfield, inst.f, inst.dom, policy)
        out.append(f"sum nu a* f(x) a =\n{_fmt(big)}")
        out.append(f"Phi(sum nu a* f(x) a) = {_fmt(cond_expect(inst.ctx, big).values.real[support])}")
        for s, mu in conditional_measures(inst).items():
            out.append(f"mu_{s}: total weight {mu.weights.sum():.12g}, mean {_fmt(mu.mean)}")
        report = check_conditional(inst, with_measures=False)
        out.append("margins = " + _fmt(report.margins))
    except OSError as exc:
        return _invalid(InstanceError(f"cannot read {args.path}: {exc.strerror}"))
    except (ValidationError, EvaluationError, NumericalError) as exc:
        return _invalid(exc)
    print("\n".join(out))
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opjensen", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"opjensen {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def tol_flags(sp):
        sp.add_argument("--tol-atol", type=float, default=None, help="absolute slack of inequality checks")
        sp.add_argument("--tol-rtol", type=float, default=None, help="relative slack of inequality checks")

    sp = sub.add_parser("check", help="check the conditional Jensen inequality for an instance file")
    sp.add_argument("path", help="instance JSON ('-' for stdin)")
    sp.add_argument("--out", help="write the report here instead of stdout")
    tol_flags(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gen", help="generate a random valid instance")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dim", type=int, default=4)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--atoms", type=int, default=2, help="number of partition projections")
    sp.add_argument("--field-size", type=int, default=3, help="number of field atoms")
    sp.add_argument("--function", default="p_norm:2", help="catalog name, optionally name:p")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("search", help="search for a violating instance")
    sp.add_argument("--function", required=True, help="expression in x1..xn or catalog name")
    sp.add_argument("--cube", default="[[-2, 2]]", help="JSON list of [lo, hi] intervals")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dims", default="2", help="comma-separated matrix sizes to draw from")
    sp.add_argument("--out")
    tol_flags(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("selftest", help="run every invariant suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=None, help="cap on trials per suite")
    sp.add_argument("--scale", type=float, default=1.0, help="multiplier on default trial counts")
    tol_flags(sp)
    sp.set_defaults(func=cmd_selftest)

    sp = sub.add_parser("calc", help="print intermediate quantities for an instance")
    sp.add_argument("path")
    tol_flags(sp)
    sp.set_defaults(func=cmd_calc)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
