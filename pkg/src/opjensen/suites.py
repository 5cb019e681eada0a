"""Seeded invariant suites run by ``opjensen selftest`` and the acceptance tests.

Each suite draws its trials from ``default_rng([seed, trial])`` and reports the
largest normalized deviation it saw next to the limit it must stay under.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._parallel import ordered_map
from .convexfn import (
    CONVEX_CATALOG,
    BinOp,
    Call,
    Neg,
    Num,
    Pow,
    Var,
    catalog,
    midpoint_convexity_probe,
    parse,
    to_text,
)
from .expectation import build_context, cond_expect, functional_apply, module_property_check, vector_state_subalgebra
from .fields import compress, transform, trivial_field, TupleField
from .jensen import (
    JensenInstance,
    check_conditional,
    check_direct_sum,
    check_expectation_values,
    check_mond_pecaric,
    search_counterexample,
)
from .jointspec import CubeDomain, apply_function, joint_diagonalize, validate_abelian
from .linalg import DEFAULT_POLICY, TolerancePolicy, eig_hermitian, frobenius_norm, operator_inner, operator_norm
from .sampling import (
    random_commuting_tuple,
    random_context,
    random_hermitian,
    random_psd,
    random_tuple_field,
    random_unit_vector,
    random_unital_field,
    random_unitary,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    max_dev: float
    limit: float
    failing_seed: tuple | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failing_seed is None and self.max_dev <= self.limit


def _run(name: str, trials: int, seed: int, limit: float, trial: Callable[[np.random.Generator], float]) -> SuiteResult:
    start = time.perf_counter()
    devs = ordered_map(lambda i: trial(np.random.default_rng([seed, i])), range(trials))
    devs = np.asarray(devs, dtype=float)
    bad = np.nonzero(~(devs <= limit))[0]
    failing = (seed, int(bad[0])) if bad.size else None
    return SuiteResult(name, trials, float(np.nanmax(devs)) if devs.size else 0.0, limit, failing,
                       time.perf_counter() - start)


def random_instance(rng: np.random.Generator, f_name: str, *, max_dim: int = 8, max_n: int = 3,
                    max_field: int = 5, policy: TolerancePolicy = DEFAULT_POLICY) -> JensenInstance:
    """Random conditional Jensen instance for a catalog function."""
    d = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_n + 1))
    k = int(rng.integers(1, d + 1))
    m = int(rng.integers(1, max_field + 1))
    f = random_catalog_function(rng, f_name, n)
    dom = CubeDomain.uniform(*f.default_cube, n)
    ctx = random_context(rng, d, k, policy=policy)
    field = random_unital_field(rng, d, m, policy)
    tfield = random_tuple_field(rng, d, m, dom, policy)
    return JensenInstance(ctx, field, tfield, f, dom, policy)


def random_catalog_function(rng: np.random.Generator, name: str, n: int):
    if name == "quadratic_form":
        rank = int(rng.integers(1, n + 1))
        return catalog(name, {"Q": random_psd(rng, n, rank), "b": rng.standard_normal(n),
                              "c": float(rng.standard_normal())}, n)
    if name in ("p_norm", "power_abs"):
        return catalog(name, {"p": float(rng.choice([1.0, 1.5, 2.0, 3.0, 4.5]))}, n)
    return catalog(name, {}, n)


def random_affine(rng: np.random.Generator, n: int):
    return catalog("quadratic_form", {"Q": np.zeros((n, n)), "b": rng.standard_normal(n),
                                      "c": float(rng.standard_normal())}, n)


def random_expression(rng: np.random.Generator, n: int, depth: int = 3):
    """Random AST that evaluates finitely on the cube ``[-2, 2]^n``."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.6:
            return Var(int(rng.integers(1, n + 1)))
        return Num(float(np.round(rng.uniform(-3, 3), int(rng.integers(0, 4)))))
    kind = rng.integers(0, 8)
    sub = lambda: random_expression(rng, n, depth - 1)  # noqa: E731
    if kind == 0:
        return BinOp(str(rng.choice(["+", "-", "*"])), sub(), sub())
    if kind == 1:
        # denominator bounded away from zero
        return BinOp("/", sub(), BinOp("+", Num(1.5), Call("abs", (sub(),))))
    if kind == 2:
        return Pow(sub(), int(rng.integers(0, 4)))
    if kind == 3:
        return Neg(sub())
    if kind == 4:
        return Call("log", (BinOp("+", Num(1.0), Pow(sub(), 2)),))
    if kind == 5:
        return Call("sqrt", (Call("abs", (sub(),)),))
    if kind == 6:
        return Call(str(rng.choice(["max", "min"])), tuple(sub() for _ in range(int(rng.integers(1, 4)))))
    return Call("exp", (Call("min", (sub(), Num(3.0))),))


# ---------------------------------------------------------------------------
# core linear algebra


def suite_eig_reconstruction(trials=1000, seed=0, policy=DEFAULT_POLICY, method="lapack"):
    def trial(rng):
        d = int(rng.integers(1, 33))
        h = random_hermitian(rng, d) * rng.uniform(0.01, 100)
        w, u = eig_hermitian(h, policy, method=method)
        res = frobenius_norm((u * w) @ u.conj().T - h) / max(1.0, frobenius_norm(h))
        return max(res, frobenius_norm(u.conj().T @ u - np.eye(d)))
    return _run(f"eig_reconstruction[{method}]", trials, seed, policy.eig_residual_tol, trial)


def suite_eig_trace(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        h = random_hermitian(rng, d)
        w, _ = eig_hermitian(h, policy)
        v = random_unitary(rng, d)
        w2, _ = eig_hermitian(v @ h @ v.conj().T, policy)
        tr = np.trace(h).real
        return max(abs(w.sum() - tr) / max(1.0, abs(tr)), np.max(np.abs(w - w2)) / max(1.0, frobenius_norm(h)))
    return _run("eig_trace_and_similarity", trials, seed, 1e-9, trial)


def suite_inner_real(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        h = random_hermitian(rng, d)
        xi = random_unit_vector(rng, d)
        z = operator_inner(xi, h)
        return abs(z.imag) / max(1.0, abs(z))
    return _run("operator_inner_real", trials, seed, 1e-12, trial)


# ---------------------------------------------------------------------------
# functional calculus


def suite_monomial_oracle(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        n = int(rng.integers(1, 4))
        dom = CubeDomain.uniform(-2, 2, n)
        t = random_commuting_tuple(rng, d, dom, degenerate=rng.random() < 0.3, policy=policy)
        exps = np.zeros(n, dtype=int)
        for _ in range(int(rng.integers(0, 5))):
            exps[rng.integers(n)] += 1
        text = " * ".join(f"x{i + 1}^{e}" for i, e in enumerate(exps))
        got = apply_function(parse(text, n), t, dom, policy)
        want = np.eye(d, dtype=complex)
        for x, e in zip(t, exps):
            want = want @ np.linalg.matrix_power(x, int(e))
        scale = max(1.0, np.prod([frobenius_norm(x) ** e for x, e in zip(t, exps)]))
        return frobenius_norm(got - want) / scale
    return _run("funcalc_monomial_oracle", trials, seed, 1e-8, trial)


def suite_joint_residual(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        n = int(rng.integers(1, 4))
        t = random_commuting_tuple(rng, d, CubeDomain.uniform(-3, 3, n), degenerate=rng.random() < 0.5,
                                   policy=policy)
        sp = joint_diagonalize(t, policy)
        res = max(frobenius_norm(x @ sp.u - sp.u * sp.table[:, i]) / max(1.0, frobenius_norm(x))
                  for i, x in enumerate(t))
        return max(res, frobenius_norm(sp.projectors.sum(axis=0) - np.eye(d)))
    return _run("joint_diagonalization_residual", trials, seed, 1e-10, trial)


def suite_homomorphism(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        n = int(rng.integers(1, 4))
        dom = CubeDomain.uniform(-2, 2, n)
        t = random_commuting_tuple(rng, d, dom, degenerate=rng.random() < 0.3, policy=policy)
        f = parse(f"x1^2 - {float(rng.uniform(-1, 1))!r}*x{n}", n)
        g = parse(f"x{n}^2 + 0.5*x1 + 1", n)
        fg = parse(f"({f.text}) * ({g.text})", n)
        fpg = parse(f"({f.text}) + ({g.text})", n)
        F, G = apply_function(f, t, dom, policy), apply_function(g, t, dom, policy)
        # deviations as fractions of their limits: 1e-8 for products, 1e-9 for sums
        e1 = frobenius_norm(apply_function(fg, t, dom, policy) - F @ G) / max(1.0, frobenius_norm(F) * frobenius_norm(G))
        e2 = frobenius_norm(apply_function(fpg, t, dom, policy) - F - G) / max(1.0, frobenius_norm(F) + frobenius_norm(G))
        return max(e1 / 1e-8, e2 / 1e-9)
    return _run("funcalc_homomorphism", trials, seed, 1.0, trial)


def suite_unitary_covariance(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d = int(rng.integers(1, 17))
        n = int(rng.integers(1, 4))
        dom = CubeDomain.uniform(-2, 2, n)
        t = random_commuting_tuple(rng, d, dom, policy=policy)
        v = random_unitary(rng, d)
        f = catalog("log_sum_exp", {}, n)
        lhs = apply_function(f, [v @ x @ v.conj().T for x in t], dom, policy)
        rhs = v @ apply_function(f, t, dom, policy) @ v.conj().T
        vals = f.evaluate(joint_diagonalize(t, policy).table)
        w = np.linalg.eigvalsh(rhs)
        spill = max(0.0, vals.min() - w.min(), w.max() - vals.max())
        return max(frobenius_norm(lhs - rhs) / max(1.0, frobenius_norm(rhs)), spill / max(1.0, np.abs(vals).max()))
    return _run("funcalc_unitary_covariance", trials, seed, 1e-9, trial)


# ---------------------------------------------------------------------------
# conditional expectation


def _ctx(rng, policy, max_dim=16):
    d = int(rng.integers(1, max_dim + 1))
    return random_context(rng, d, int(rng.integers(1, d + 1)), policy=policy)


def _gauss(rng, d):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def suite_adjointness(trials=1000, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        x = _gauss(rng, ctx.dim)
        phi = cond_expect(ctx, x)
        worst = 0.0
        for m, p in enumerate(ctx.partition.atoms):
            z = np.zeros(ctx.k)
            z[m] = 1.0
            mask = ctx.measure.support_mask
            lhs = np.sum(z[mask] * phi.values[mask] * ctx.measure.weights[mask])
            rhs = functional_apply(ctx, p @ x)
            scale = max(1.0, frobenius_norm(x) * frobenius_norm(p) * frobenius_norm(ctx.functional.rho))
            worst = max(worst, abs(lhs - rhs) / scale)
        return worst
    return _run("phi_adjointness", trials, seed, 1e-10, trial)


def suite_positivity(trials=500, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        g = _gauss(rng, ctx.dim)
        x = g @ g.conj().T
        vals = cond_expect(ctx, x).supported
        return max(0.0, -vals.real.min() / max(1.0, operator_norm(x)), np.abs(vals.imag).max() / max(1.0, operator_norm(x)))
    return _run("phi_positivity", trials, seed, 1e-10, trial)


def suite_unit(trials=500, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        return float(np.abs(cond_expect(ctx, np.eye(ctx.dim)).supported - 1).max())
    return _run("phi_of_identity", trials, seed, 1e-10, trial)


def suite_subalgebra(trials=500, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        z = rng.standard_normal(ctx.k) + 1j * rng.standard_normal(ctx.k)
        vals = cond_expect(ctx, ctx.partition.element(z))
        mask = vals.support_mask
        return float(np.abs(vals.values[mask] - z[mask]).max() / max(1.0, np.abs(z).max()))
    return _run("phi_on_subalgebra", trials, seed, 1e-10, trial)


def suite_bimodule(trials=500, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        x = _gauss(rng, ctx.dim)
        y = rng.standard_normal(ctx.k) + 1j * rng.standard_normal(ctx.k)
        dev = module_property_check(ctx, x, y)
        return dev / max(1.0, frobenius_norm(x) * np.abs(y).max())
    return _run("phi_bimodule", trials, seed, 1e-10, trial)


def suite_linearity(trials=500, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        ctx = _ctx(rng, policy)
        x, y = _gauss(rng, ctx.dim), _gauss(rng, ctx.dim)
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        lhs = cond_expect(ctx, a * x + b * y).supported
        rhs = a * cond_expect(ctx, x).supported + b * cond_expect(ctx, y).supported
        scale = max(1.0, abs(a) * frobenius_norm(x) + abs(b) * frobenius_norm(y))
        return float(np.abs(lhs - rhs).max() / scale)
    return _run("phi_linearity", trials, seed, 1e-12, trial)


# ---------------------------------------------------------------------------
# fields


def suite_transform_affine(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d, n, m = int(rng.integers(1, 9)), int(rng.integers(1, 4)), int(rng.integers(1, 6))
        dom = CubeDomain.uniform(-2, 2, n)
        field = random_unital_field(rng, d, m, policy)
        tf = random_tuple_field(rng, d, m, dom, policy)
        f = random_affine(rng, n)
        b, c = f.catalog[1]["b"], f.catalog[1]["c"]
        got = transform(field, tf, f, dom, policy)
        ys = compress(field, tf, policy)
        want = c * np.eye(d) + sum(bi * y for bi, y in zip(b, ys))
        # linearity in f
        alpha, beta = (float(v) for v in rng.standard_normal(2))
        tg = transform(field, tf, parse("exp(x1)", n), dom, policy)
        th = transform(field, tf, parse(f"x{n}^2", n), dom, policy)
        lin = transform(field, tf, parse(f"{alpha!r}*exp(x1) + {beta!r}*x{n}^2", n), dom, policy)
        lin_scale = max(1.0, abs(alpha) * frobenius_norm(tg) + abs(beta) * frobenius_norm(th))
        # contractivity: ||sum nu a* g(x) a|| <= max |g| over the spectra
        g = catalog("exp_coord", {}, n)
        bound = max(np.abs(g.evaluate(joint_diagonalize(t, policy).table)).max() for t in tf.tuples)
        over = max(0.0, operator_norm(transform(field, tf, g, dom, policy)) - bound) / max(1.0, bound)
        scale = max(1.0, abs(c) + sum(abs(bi) * frobenius_norm(y) for bi, y in zip(b, ys)))
        return max(frobenius_norm(got - want) / scale, frobenius_norm(lin - alpha * tg - beta * th) / lin_scale, over)
    return _run("transform_affine_linear_bound", trials, seed, 1e-10, trial)


# ---------------------------------------------------------------------------
# functions


def suite_parser_roundtrip(trials=50, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        n = int(rng.integers(1, 4))
        text = to_text(random_expression(rng, n))
        f1 = parse(text, n)
        f2 = parse(to_text(f1.tree), n)
        if f2.tree != f1.tree:
            return np.inf
        pts = rng.uniform(-2, 2, size=(100, n))
        a, b = f1.evaluate(pts), f2.evaluate(pts)
        return 0.0 if np.array_equal(a, b) else np.inf
    return _run("parser_roundtrip", trials, seed, 0.0, trial)


def suite_probe_catalog(trials=len(CONVEX_CATALOG), seed=0, policy=DEFAULT_POLICY, samples=10_000):
    def trial_for(i):
        rng = np.random.default_rng([seed, i])
        name = CONVEX_CATALOG[i % len(CONVEX_CATALOG)]
        n = int(rng.integers(1, 4))
        f = random_catalog_function(rng, name, n)
        v = midpoint_convexity_probe(f, CubeDomain.uniform(*f.default_cube, n), samples, seed=i,
                                     rtol=policy.probe_rtol)
        return 0.0 if v.status == "probably_convex" else 1.0
    start = time.perf_counter()
    devs = ordered_map(trial_for, range(trials))
    bad = [i for i, v in enumerate(devs) if v > 0]
    return SuiteResult("probe_convex_catalog", trials, max(devs), 0.0, (seed, bad[0]) if bad else None,
                       time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Jensen


def _slack_ratio(margin: float, slack: float) -> float:
    if margin >= 0:
        return 0.0
    return -margin / slack if slack > 0 else np.inf


def suite_convex(name: str, trials=500, seed=0, policy=DEFAULT_POLICY):
    """Zero violations of the conditional inequality, and every mu_s a probability measure.

    The deviation is the worst of ``-margin / slack`` (must stay <= 1) and the
    probability-measure defects scaled to their limits.
    """
    def trial(rng):
        inst = random_instance(rng, name, policy=policy)
        rep = check_conditional(inst)
        worst = max((_slack_ratio(a.margin, policy.ineq_slack(a.rhs)) for a in rep.atoms), default=0.0)
        for mu in rep.measures.values():
            worst = max(worst, abs(mu.weights.sum() - 1) / 1e-9, -mu.weights.min() / 1e-10)
        return worst
    return _run(f"jensen_convex[{name}]", trials, seed, 1.0, trial)


def suite_expectation_values_consistency(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        inst = random_instance(rng, str(rng.choice(CONVEX_CATALOG)), policy=policy)
        xi = random_unit_vector(rng, inst.ctx.dim)
        ev = check_expectation_values(inst.field, inst.tfield, inst.f, inst.dom, xi, policy)
        vinst = JensenInstance(vector_state_subalgebra(xi, policy), inst.field, inst.tfield, inst.f, inst.dom, policy)
        a0 = check_conditional(vinst, with_measures=False).atom(0)
        scale = max(1.0, abs(ev.rhs[0]), abs(ev.lhs[0]))
        return max(abs(a0.lhs - ev.lhs[0]), abs(a0.rhs - ev.rhs[0])) / scale
    return _run("expectation_values_vs_conditional", trials, seed, 1e-10, trial)


def suite_single_tuple_identity(trials=200, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        d, n = int(rng.integers(1, 9)), int(rng.integers(1, 4))
        f = random_catalog_function(rng, str(rng.choice(CONVEX_CATALOG)), n)
        dom = CubeDomain.uniform(*f.default_cube, n)
        t = random_commuting_tuple(rng, d, dom, policy=policy)
        xi = random_unit_vector(rng, d)
        mp = check_mond_pecaric(t, xi, f, dom, policy)
        ev = check_expectation_values(trivial_field([1.0], d), TupleField.build([t], dom, policy), f, dom, xi, policy)
        exact = mp.lhs[0] == ev.lhs[0] and mp.rhs[0] == ev.rhs[0]
        return 0.0 if exact and mp.passed else np.inf
    return _run("mond_pecaric_vs_trivial_field", trials, seed, 0.0, trial)


def suite_direct_sum(trials=100, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        n = int(rng.integers(1, 4))
        f = random_catalog_function(rng, str(rng.choice(CONVEX_CATALOG)), n)
        dom = CubeDomain.uniform(*f.default_cube, n)
        m = int(rng.integers(1, 5))
        tuples, vecs = [], []
        for _ in range(m):
            d = int(rng.integers(1, 5))
            tuples.append(random_commuting_tuple(rng, d, dom, policy=policy))
            vecs.append(random_unit_vector(rng, d) * rng.uniform(0.1, 1))
        norm = np.sqrt(sum(np.vdot(v, v).real for v in vecs))
        vecs = [v / norm for v in vecs]
        rep = check_direct_sum(tuples, vecs, f, dom, policy)
        if not rep.passed:
            return np.inf
        return rep.extra["route_deviation"] / rep.extra["scale"]
    return _run("direct_sum_routes", trials, seed, 1e-10, trial)


def suite_scale_covariance(trials=100, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        inst = random_instance(rng, str(rng.choice(CONVEX_CATALOG)), policy=policy)
        c = float(np.exp(rng.uniform(-5, 5)))
        ctx2 = build_context(inst.ctx.partition, c * inst.ctx.functional.rho, policy)
        inst2 = JensenInstance(ctx2, inst.field, inst.tfield, inst.f, inst.dom, policy)
        r1 = check_conditional(inst, with_measures=False)
        r2 = check_conditional(inst2, with_measures=False)
        if [a.s for a in r1.atoms] != [a.s for a in r2.atoms] or r1.passed != r2.passed:
            return np.inf
        dev = 0.0
        for a, b in zip(r1.atoms, r2.atoms):
            dev = max(dev, abs(a.lhs - b.lhs) / max(1.0, abs(a.lhs)), abs(a.rhs - b.rhs) / max(1.0, abs(a.rhs)))
        return dev
    return _run("density_scale_covariance", trials, seed, 1e-12, trial)


def suite_affine_equality(trials=100, seed=0, policy=DEFAULT_POLICY):
    def trial(rng):
        inst = random_instance(rng, "quadratic_form", policy=policy)
        n = inst.dom.n
        f = random_affine(rng, n)
        inst = JensenInstance(inst.ctx, inst.field, inst.tfield, f, inst.dom, policy)
        rep = check_conditional(inst, with_measures=False)
        xi = random_unit_vector(rng, inst.ctx.dim)
        ev = check_expectation_values(inst.field, inst.tfield, f, inst.dom, xi, policy)
        mp = check_mond_pecaric(inst.tfield.tuples[0], xi, f, inst.dom, policy)
        worst = 0.0
        for r in (rep, ev, mp):
            for a in r.atoms:
                worst = max(worst, abs(a.margin) / max(1.0, abs(a.rhs), abs(a.lhs)))
        return worst
    return _run("affine_equality", trials, seed, 1e-9, trial)


def suite_falsification(trials=1000, seed=1, policy=DEFAULT_POLICY):
    start = time.perf_counter()
    found = []
    for text, dom in (("x1^3", CubeDomain.uniform(-2, 2, 1)), ("x1*x2", CubeDomain.uniform(-1, 1, 2)),
                      ("x1^2", CubeDomain.uniform(-2, 2, 1))):
        w = search_counterexample(parse(text, dom.n), dom, trials=trials if text != "x1^2" else min(trials, 200),
                                  seed=seed, policy=policy)
        found.append(w is not None)
    ok = found == [True, True, False]
    return SuiteResult("counterexample_search", trials, 0.0 if ok else 1.0, 0.0,
                       None if ok else (seed, -1), time.perf_counter() - start)


def all_suites(scale: float = 1.0, seed: int = 0, policy: TolerancePolicy = DEFAULT_POLICY,
               cap: int | None = None) -> list[Callable[[], SuiteResult]]:
    """Zero-argument callables, one per suite, with trial counts scaled by ``scale``."""
    def n(k):
        k = max(1, int(round(k * scale)))
        return min(k, cap) if cap else k

    def bind(fn, trials, **kw):
        return lambda: fn(trials=n(trials), seed=seed, policy=policy, **kw)

    suites = [
        bind(suite_eig_reconstruction, 1000),
        bind(suite_eig_reconstruction, 50, method="jacobi"),
        bind(suite_eig_trace, 200),
        bind(suite_inner_real, 200),
        bind(suite_monomial_oracle, 200),
        bind(suite_joint_residual, 200),
        bind(suite_homomorphism, 200),
        bind(suite_unitary_covariance, 200),
        bind(suite_adjointness, 1000),
        bind(suite_positivity, 500),
        bind(suite_unit, 500),
        bind(suite_subalgebra, 500),
        bind(suite_bimodule, 500),
        bind(suite_linearity, 500),
        bind(suite_transform_affine, 200),
        bind(suite_parser_roundtrip, 50),
        lambda: suite_probe_catalog(seed=seed, policy=policy),
        *[bind(suite_convex, 500, name=name) for name in CONVEX_CATALOG],
        bind(suite_expectation_values_consistency, 200),
        bind(suite_single_tuple_identity, 200),
        bind(suite_direct_sum, 100),
        bind(suite_scale_covariance, 100),
        bind(suite_affine_equality, 100),
        lambda: suite_falsification(trials=1000, seed=1, policy=policy),
    ]
    return suites
