"""Executable Jensen inequalities for conditional expectations and expectation values.

The central check compares, at every atom ``s`` of positive measure,

    lhs(s) = f(Phi(y_1)(s), ..., Phi(y_n)(s))
    rhs(s) = Phi(sum_t nu_t a_t* f(x_t) a_t)(s)

with ``y = sum_t nu_t a_t* x_t a_t``.  The vector-state, single-atom and
direct-sum variants are specializations with their own direct formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._parallel import first_hit
from .convexfn import ConvexityVerdict, ScalarFunction, as_scalar_function
from .expectation import SubalgebraContext, cond_expect, vector_state_subalgebra
from .fields import DiscreteField, TupleField, compress, direct_sum_embed, transform, trivial_field, validate_unital
from .jointspec import AbelianTuple, CubeDomain, apply_function, joint_diagonalize, validate_abelian
from .linalg import (
    DEFAULT_POLICY,
    NumericalError,
    TolerancePolicy,
    ValidationError,
    as_unit_vector,
    operator_inner,
)
from .sampling import random_commuting_tuple, random_unit_vector


@dataclass(frozen=True, eq=False)
class JensenInstance:
    """Everything one conditional Jensen check needs, validated on construction."""

    ctx: SubalgebraContext
    field: DiscreteField
    tfield: TupleField
    f: ScalarFunction
    dom: CubeDomain
    policy: TolerancePolicy = DEFAULT_POLICY

    def __post_init__(self):
        object.__setattr__(self, "f", as_scalar_function(self.f, self.dom.n))
        if self.tfield.n != self.dom.n:
            raise ValidationError(f"tuples have arity {self.tfield.n}, cube has {self.dom.n}")
        dims = {self.ctx.dim, self.field.dim, self.tfield.dim}
        if len(dims) != 1:
            raise ValidationError(f"dimension mismatch between context, field and tuples: {sorted(dims)}")
        if self.field.size != self.tfield.size:
            raise ValidationError(f"field has {self.field.size} atoms, tuple field has {self.tfield.size}")
        if self.tfield.cube != self.dom:
            # re-validate the tuples against this cube
            object.__setattr__(self, "tfield", TupleField.build(self.tfield.tuples, self.dom, self.policy))
        validate_unital(self.field, self.policy)


@dataclass(frozen=True)
class AtomResult:
    s: int
    mu: float
    lhs: float
    rhs: float
    margin: float
    passed: bool

    def to_json(self) -> dict:
        return {"s": self.s, "mu": self.mu, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin}


@dataclass(frozen=True)
class PointMeasure:
    """A finitely supported measure on R^n: ``points`` (m, n) with ``weights`` (m,)."""

    points: np.ndarray
    weights: np.ndarray

    def integrate(self, f: ScalarFunction, dom: CubeDomain | None = None) -> float:
        pts = self.points if dom is None else dom.clip(self.points)
        return float(self.weights @ f.evaluate(pts))

    @property
    def mean(self) -> np.ndarray:
        return self.weights @ self.points


@dataclass(frozen=True)
class JensenReport:
    atoms: tuple[AtomResult, ...]
    passed: bool
    tolerances: dict
    convexity: ConvexityVerdict | None = None
    measures: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def min_margin(self) -> float:
        return min(a.margin for a in self.atoms)

    @property
    def lhs(self) -> np.ndarray:
        return np.array([a.lhs for a in self.atoms])

    @property
    def rhs(self) -> np.ndarray:
        return np.array([a.rhs for a in self.atoms])

    @property
    def margins(self) -> np.ndarray:
        return np.array([a.margin for a in self.atoms])

    def atom(self, s: int) -> AtomResult:
        for a in self.atoms:
            if a.s == s:
                return a
        raise KeyError(f"atom {s} is not in the report (null or absent)")


def _tolerances(policy: TolerancePolicy) -> dict:
    return {"ineq_atol": policy.ineq_atol, "ineq_rtol": policy.ineq_rtol}


def _report(indices, mus, lhs, rhs, policy, **kw) -> JensenReport:
    atoms = []
    for s, mu, lo, hi in zip(indices, mus, lhs, rhs):
        margin = float(hi - lo)
        atoms.append(AtomResult(int(s), float(mu), float(lo), float(hi), margin,
                                margin >= -policy.ineq_slack(hi)))
    return JensenReport(tuple(atoms), all(a.passed for a in atoms), _tolerances(policy), **kw)


def _lhs_points(points: np.ndarray, dom: CubeDomain, policy: TolerancePolicy) -> np.ndarray:
    inside = dom.contains(points, policy)
    if not np.all(inside):
        bad = np.atleast_2d(points)[~inside][0]
        raise NumericalError(f"compressed mean {tuple(bad)} left the cube {dom.intervals}; "
                             "the inputs are inconsistent")
    return dom.clip(points)


def conditional_measures(inst: JensenInstance) -> dict[int, PointMeasure]:
    """Per supported atom ``s`` the probability measure ``g -> Phi(sum nu a* g(x) a)(s)``.

    Its atoms are the joint eigenvalue points of every ``x_t``; the weight of
    point ``k`` of atom ``t`` is ``nu_t Phi(a_t* u_k u_k* a_t)(s)``.
    """
    ctx, policy = inst.ctx, inst.policy
    rho = ctx.functional.rho
    spectra = [joint_diagonalize(t, policy) for t in inst.tfield.tuples]
    points = np.vstack([sp.table for sp in spectra])
    out = {}
    for s in ctx.support:
        rp = rho @ ctx.partition.atoms[s]
        ws = []
        for nu, a, sp in zip(inst.field.weights, inst.field.maps, spectra):
            b = a @ rp @ a.conj().T
            ws.append(nu * np.einsum("ik,ij,jk->k", sp.u.conj(), b, sp.u).real)
        out[int(s)] = PointMeasure(points, np.concatenate(ws) / ctx.measure.weights[s])
    return out


def check_conditional(inst: JensenInstance, convexity: ConvexityVerdict | None = None,
                      with_measures: bool = True) -> JensenReport:
    """Jensen's inequality for the conditional expectation of ``inst.ctx``, atom by atom."""
    ctx, policy, f, dom = inst.ctx, inst.policy, inst.f, inst.dom
    ys = compress(inst.field, inst.tfield, policy)
    support = ctx.support
    means = np.column_stack([cond_expect(ctx, y).values[support].real for y in ys])
    lhs = f.evaluate(_lhs_points(means, dom, policy)) if support.size else np.empty(0)
    big = transform(inst.field, inst.tfield, f, dom, policy)
    rhs = cond_expect(ctx, big).values[support].real
    measures = conditional_measures(inst) if with_measures else None
    return _report(support, ctx.measure.weights[support], lhs, rhs, policy,
                   convexity=convexity, measures=measures)


def check_expectation_values(field: DiscreteField, tfield: TupleField, f, dom: CubeDomain, xi,
                             policy: TolerancePolicy = DEFAULT_POLICY) -> JensenReport:
    """``f((y_1 xi|xi), ..., (y_n xi|xi)) <= (sum nu_t a_t* f(x_t) a_t xi | xi)``.

    Reported as a single atom ``s = 0`` of weight ``||xi||^2 = 1``.
    """
    f = as_scalar_function(f, dom.n)
    xi = as_unit_vector(xi, tfield.dim)
    ys = compress(field, tfield, policy)
    point = np.array([[operator_inner(xi, y).real for y in ys]])
    lhs = f.evaluate(_lhs_points(point, dom, policy))
    rhs = [operator_inner(xi, transform(field, tfield, f, dom, policy)).real]
    return _report([0], [1.0], lhs, rhs, policy)


def check_mond_pecaric(t, xi, f, dom: CubeDomain, policy: TolerancePolicy = DEFAULT_POLICY) -> JensenReport:
    """``f((x_1 xi|xi), ..., (x_n xi|xi)) <= (f(x) xi | xi)`` for one abelian tuple."""
    t = validate_abelian(t, policy)
    f = as_scalar_function(f, dom.n)
    xi = as_unit_vector(xi, t.dim)
    point = np.array([[operator_inner(xi, x).real for x in t]])
    lhs = f.evaluate(_lhs_points(point, dom, policy))
    rhs = [operator_inner(xi, apply_function(f, t, dom, policy)).real]
    return _report([0], [1.0], lhs, rhs, policy)


def check_direct_sum(tuples: Sequence, vectors: Sequence, f, dom: CubeDomain,
                     policy: TolerancePolicy = DEFAULT_POLICY) -> JensenReport:
    """The m-term form ``f(sum_j (x_j xi_j|xi_j)) <= sum_j (f(x_j) xi_j|xi_j)``.

    Both sides are summed block by block; the same inequality is then
    evaluated on the block-diagonal embedding, and the largest disagreement
    between the two routes is stored in ``report.extra["route_deviation"]``.
    """
    f = as_scalar_function(f, dom.n)
    big, xi = direct_sum_embed(tuples, vectors, policy)
    ts = [validate_abelian(t, policy) for t in tuples]
    point = np.zeros((1, dom.n))
    rhs = 0.0
    for t, v in zip(ts, vectors):
        v = np.asarray(v)
        point[0] += [operator_inner(v, x).real for x in t]
        rhs += operator_inner(v, apply_function(f, t, dom, policy)).real
    lhs = f.evaluate(_lhs_points(point, dom, policy))
    embedded = check_mond_pecaric(big, xi, f, dom, policy)
    dev = max(abs(embedded.lhs[0] - lhs[0]), abs(embedded.rhs[0] - rhs))
    scale = max(1.0, abs(rhs), abs(lhs[0]))
    return _report([0], [1.0], lhs, [rhs], policy,
                   extra={"route_deviation": float(dev), "scale": float(scale), "embedded": embedded})


# ---------------------------------------------------------------------------
# counterexample search


@dataclass(frozen=True, eq=False)
class Witness:
    """A violating single-tuple instance together with its replay data."""

    trial: int
    seed: int
    tuple: AbelianTuple
    xi: np.ndarray
    report: JensenReport
    instance: JensenInstance


def witness_instance(t, xi, f, dom: CubeDomain, policy: TolerancePolicy = DEFAULT_POLICY) -> JensenInstance:
    """The conditional instance whose atom 0 reproduces the single-tuple check at ``xi``."""
    t = validate_abelian(t, policy)
    ctx = vector_state_subalgebra(xi, policy)
    return JensenInstance(ctx, trivial_field([1.0], t.dim), TupleField.build([t], dom, policy), f, dom, policy)


def search_counterexample(f, dom: CubeDomain, dims: Sequence[int] = (2,), trials: int = 1000,
                          seed: int = 0, policy: TolerancePolicy = DEFAULT_POLICY) -> Witness | None:
    """Randomized search for a violation of the single-tuple inequality.

    Trial ``i`` draws from ``default_rng([seed, i])``: a dimension from
    ``dims``, a commuting tuple with shared Haar eigenbasis and uniform
    spectra in ``dom``, and a unit vector.  The first violating trial (by
    index) whose conditional replay also fails is returned.
    """
    f = as_scalar_function(f, dom.n)
    dims = list(dims)

    def trial(i: int):
        rng = np.random.default_rng([seed, i])
        d = int(dims[rng.integers(len(dims))])
        t = random_commuting_tuple(rng, d, dom, policy=policy)
        xi = random_unit_vector(rng, d)
        report = check_mond_pecaric(t, xi, f, dom, policy)
        if report.passed:
            return None
        inst = witness_instance(t, xi, f, dom, policy)
        if check_conditional(inst, with_measures=False).passed:
            return None
        return Witness(i, seed, t, xi, report, inst)

    return first_hit(trial, range(trials))
