import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opjensen.convexfn import CONVEX_CATALOG, catalog, parse
from opjensen.expectation import PartitionOfUnity, build_context, vector_state_subalgebra
from opjensen.fields import DiscreteField, TupleField, trivial_field
from opjensen.jensen import (
    JensenInstance,
    _lhs_points,
    check_conditional,
    check_direct_sum,
    check_expectation_values,
    check_mond_pecaric,
    search_counterexample,
    witness_instance,
)
from opjensen.jointspec import CubeDomain, DomainError, joint_diagonalize
from opjensen.linalg import DEFAULT_POLICY, NumericalError, ValidationError
from opjensen.sampling import random_commuting_tuple, random_unit_vector
from opjensen.suites import random_affine, random_instance

SX = np.array([[0, 1], [1, 0]], dtype=complex)
DOM = CubeDomain(((-2, 2),))
HALF = np.array([1, 1]) / np.sqrt(2)


def hand_instance(f="x1^2"):
    ctx = build_context(PartitionOfUnity.diagonal(2), np.eye(2))
    return JensenInstance(ctx, trivial_field([1.0], 2), TupleField.build([[SX]], DOM), f, DOM)


def test_hand_conditional_example():
    rep = check_conditional(hand_instance())
    np.testing.assert_allclose(rep.lhs, [0, 0], atol=1e-15)
    np.testing.assert_allclose(rep.rhs, [1, 1], atol=1e-15)
    np.testing.assert_allclose(rep.margins, [1, 1], atol=1e-15)
    assert rep.passed
    for mu in rep.measures.values():
        assert mu.weights.sum() == pytest.approx(1)
        assert mu.mean == pytest.approx([0], abs=1e-15)


def test_affine_and_coordinate_give_equality():
    rng = np.random.default_rng(0)
    inst = random_instance(rng, "quadratic_form")
    n = inst.dom.n
    for f in (random_affine(rng, n), parse(f"x{n}", n)):
        rep = check_conditional(JensenInstance(inst.ctx, inst.field, inst.tfield, f, inst.dom))
        assert np.abs(rep.margins).max() <= 1e-9 * max(1, np.abs(rep.rhs).max())


def test_instance_validation():
    inst = hand_instance()
    with pytest.raises(ValidationError):
        JensenInstance(inst.ctx, trivial_field([0.5, 0.5], 2), inst.tfield, inst.f, DOM)
    with pytest.raises(ValidationError):
        JensenInstance(vector_state_subalgebra(np.array([1.0, 0, 0])), inst.field, inst.tfield, inst.f, DOM)
    with pytest.raises(ValidationError):
        JensenInstance(inst.ctx, inst.field, inst.tfield, "x1 + x2", CubeDomain.uniform(-2, 2, 2))


def test_null_atoms_are_omitted():
    ctx = build_context(PartitionOfUnity.diagonal(2), np.diag([1.0, 0.0]))
    inst = hand_instance()
    rep = check_conditional(JensenInstance(ctx, inst.field, inst.tfield, inst.f, DOM))
    assert [a.s for a in rep.atoms] == [0]
    with pytest.raises(KeyError):
        rep.atom(1)


def test_expectation_values_examples():
    tf = TupleField.build([[SX]], DOM)
    rep = check_expectation_values(trivial_field([1.0], 2), tf, "x1^2", DOM, [1, 0])
    assert rep.lhs[0] == 0 and rep.rhs[0] == pytest.approx(1) and rep.passed

    dom2 = CubeDomain.uniform(-2, 2, 2)
    x1, x2 = np.diag([1.5, -1.0]), np.diag([0.5, 2.0])
    tf = TupleField.build([[x1, x2]], dom2)
    rep = check_expectation_values(trivial_field([1.0], 2), tf, "max(x1, x2)", dom2, [1, 0])
    assert rep.lhs[0] == 1.5 and rep.rhs[0] == pytest.approx(1.5)
    # brute force over xi in the real unit circle: rhs >= lhs
    for th in np.linspace(0, 2 * np.pi, 73):
        xi = np.array([np.cos(th), np.sin(th)])
        p = xi**2
        lhs = max(p @ np.diag(x1), p @ np.diag(x2))
        rhs = p @ np.maximum(np.diag(x1), np.diag(x2))
        rep = check_expectation_values(trivial_field([1.0], 2), tf, "max(x1, x2)", dom2, xi)
        assert rep.lhs[0] == pytest.approx(lhs, abs=1e-14) and rep.rhs[0] == pytest.approx(rhs, abs=1e-14)
        assert rep.passed


def test_mond_pecaric_examples():
    x = [np.diag([-1.0, 0.0])]
    rep = check_mond_pecaric(x, HALF, "x1^2", DOM)
    assert rep.lhs[0] == pytest.approx(0.25) and rep.rhs[0] == pytest.approx(0.5) and rep.passed

    rep = check_mond_pecaric(x, HALF, "x1^3", DOM)
    assert rep.lhs[0] == pytest.approx(-0.125) and rep.rhs[0] == pytest.approx(-0.5)
    assert not rep.passed
    assert rep.min_margin == pytest.approx(-0.375, abs=1e-9)

    rng = np.random.default_rng(3)
    t = random_commuting_tuple(rng, 4, CubeDomain.uniform(-2, 2, 2))
    u = joint_diagonalize(t).u
    rep = check_mond_pecaric(t, u[:, 2], catalog("log_sum_exp", {}, 2), CubeDomain.uniform(-2, 2, 2))
    assert abs(rep.min_margin) < 1e-12


def test_tuple_outside_cube_is_rejected():
    with pytest.raises(DomainError):
        check_mond_pecaric([np.diag([3.0, 0.0])], HALF, "x1^2", DOM)


def test_direct_sum_examples():
    vs = [np.array([1.0, 0.0]) / np.sqrt(2)] * 2
    rep = check_direct_sum([[np.diag([0.0, 2.0])], [np.diag([1.0, 1.0])]], vs, "x1^2", DOM)
    assert rep.lhs[0] == pytest.approx(0.25) and rep.rhs[0] == pytest.approx(0.5) and rep.passed
    assert rep.extra["route_deviation"] < 1e-15

    one = check_direct_sum([[np.diag([-1.0, 0.0])]], [HALF], "x1^2", DOM)
    mp = check_mond_pecaric([np.diag([-1.0, 0.0])], HALF, "x1^2", DOM)
    assert one.lhs[0] == mp.lhs[0] and one.rhs[0] == pytest.approx(mp.rhs[0], abs=1e-15)

    eig = check_direct_sum([[np.diag([0.5, 2.0])], [np.diag([-1.0, 1.0])]],
                           [np.array([0.6, 0.0]), np.array([0.0, 0.8])], "exp(x1)", DOM)
    assert abs(eig.min_margin) < 1e-12 or eig.min_margin > 0

    with pytest.raises(ValidationError):
        check_direct_sum([[np.diag([0.0, 2.0])]] * 2, [np.array([1.0, 0.0])] * 2, "x1^2", DOM)


def test_search_finds_nothing_for_convex():
    assert search_counterexample(parse("x1^2", 1), DOM, trials=200, seed=1) is None


def _grid_scan_product():
    # diagonal 2x2 pairs with entries on a grid in [-1, 1] and real xi = (cos, sin)
    g = np.linspace(-1, 1, 5)
    for a1, a2, b1, b2 in np.array(np.meshgrid(g, g, g, g)).reshape(4, -1).T:
        for th in np.linspace(0, np.pi / 2, 7):
            p = np.array([np.cos(th) ** 2, np.sin(th) ** 2])
            lhs = (p @ [a1, a2]) * (p @ [b1, b2])
            rhs = p @ [a1 * b1, a2 * b2]
            if rhs - lhs < -1e-6:
                return (a1, a2, b1, b2, th, rhs - lhs)
    return None


def test_search_finds_product_witness():
    hit = _grid_scan_product()
    assert hit is not None
    a1, a2, b1, b2, th, gap = hit
    xi = np.array([np.cos(th), np.sin(th)])
    dom = CubeDomain.uniform(-1, 1, 2)
    rep = check_mond_pecaric([np.diag([a1, a2]), np.diag([b1, b2])], xi, "x1*x2", dom)
    assert rep.min_margin == pytest.approx(gap)

    w = search_counterexample(parse("x1*x2", 2), dom, trials=1000, seed=1)
    assert w is not None and not w.report.passed
    assert not check_conditional(w.instance).passed


def test_search_finds_cube_witness_and_replays():
    f = parse("x1^3", 1)
    w = search_counterexample(f, DOM, trials=1000, seed=1)
    assert w is not None
    again = search_counterexample(f, DOM, trials=1000, seed=1)
    assert again.trial == w.trial and np.array_equal(again.xi, w.xi)
    rep = check_conditional(w.instance)
    assert rep.atom(0).margin == pytest.approx(w.report.min_margin, abs=1e-12)

    hand = witness_instance([np.diag([-1.0, 0.0])], HALF, f, DOM)
    a0 = check_conditional(hand).atom(0)
    assert a0.margin == pytest.approx(-0.375, abs=1e-9)


def test_search_is_thread_count_independent(monkeypatch):
    f = parse("x1^3", 1)
    monkeypatch.setenv("OPJENSEN_THREADS", "1")
    a = search_counterexample(f, DOM, trials=300, seed=5)
    monkeypatch.setenv("OPJENSEN_THREADS", "4")
    b = search_counterexample(f, DOM, trials=300, seed=5)
    assert a.trial == b.trial and np.array_equal(a.tuple[0], b.tuple[0])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(CONVEX_CATALOG))
def test_convex_instances_pass_with_probability_measures(seed, name):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, name)
    rep = check_conditional(inst)
    assert rep.passed
    assert set(rep.measures) == set(int(s) for s in inst.ctx.support)
    for s, mu in rep.measures.items():
        assert abs(mu.weights.sum() - 1) <= 1e-9
        assert mu.weights.min() >= -1e-10
        # the measure reproduces both sides of the inequality
        a = rep.atom(s)
        assert mu.integrate(inst.f, inst.dom) == pytest.approx(a.rhs, rel=1e-8, abs=1e-8)
        assert inst.f(*mu.mean) == pytest.approx(a.lhs, rel=1e-8, abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5))
def test_scale_covariance(seed, logc):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, str(rng.choice(CONVEX_CATALOG)))
    ctx2 = build_context(inst.ctx.partition, np.exp(logc) * inst.ctx.functional.rho)
    r1 = check_conditional(inst, with_measures=False)
    r2 = check_conditional(JensenInstance(ctx2, inst.field, inst.tfield, inst.f, inst.dom), with_measures=False)
    assert r1.passed == r2.passed
    np.testing.assert_allclose(r2.lhs, r1.lhs, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(r2.rhs, r1.rhs, rtol=1e-12, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_expectation_values_match_vector_state_conditional(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, str(rng.choice(CONVEX_CATALOG)))
    xi = random_unit_vector(rng, inst.ctx.dim)
    ev = check_expectation_values(inst.field, inst.tfield, inst.f, inst.dom, xi)
    vinst = JensenInstance(vector_state_subalgebra(xi), inst.field, inst.tfield, inst.f, inst.dom)
    a0 = check_conditional(vinst, with_measures=False).atom(0)
    scale = max(1.0, abs(ev.rhs[0]), abs(ev.lhs[0]))
    assert abs(a0.lhs - ev.lhs[0]) <= 1e-10 * scale and abs(a0.rhs - ev.rhs[0]) <= 1e-10 * scale

    t = inst.tfield.tuples[0]
    mp = check_mond_pecaric(t, xi, inst.f, inst.dom)
    tr = check_expectation_values(trivial_field([1.0], t.dim), TupleField.build([t], inst.dom), inst.f, inst.dom, xi)
    assert mp.lhs[0] == tr.lhs[0] and mp.rhs[0] == tr.rhs[0]


def test_field_weights_enter_linearly():
    # two half-weight copies of a unitary field equal the single unitary
    rng = np.random.default_rng(7)
    t = random_commuting_tuple(rng, 3, DOM)
    ctx = vector_state_subalgebra(random_unit_vector(rng, 3))
    tf1, tf2 = TupleField.build([t], DOM), TupleField.build([t, t], DOM)
    one = check_conditional(JensenInstance(ctx, trivial_field([1.0], 3), tf1, "exp(x1)", DOM))
    two = check_conditional(JensenInstance(ctx, DiscreteField([0.5, 0.5], (np.eye(3), np.eye(3))), tf2, "exp(x1)", DOM))
    np.testing.assert_allclose(one.lhs, two.lhs, atol=1e-14)
    np.testing.assert_allclose(one.rhs, two.rhs, atol=1e-14)


def test_lhs_points_leaving_cube_raise():
    with pytest.raises(NumericalError):
        _lhs_points(np.array([[2.5]]), DOM, DEFAULT_POLICY)
    np.testing.assert_array_equal(_lhs_points(np.array([[2 + 1e-12]]), DOM, DEFAULT_POLICY), [[2.0]])
