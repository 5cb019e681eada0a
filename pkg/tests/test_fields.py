import numpy as np
import pytest

from opjensen.convexfn import catalog, parse
from opjensen.fields import (
    DiscreteField,
    TupleField,
    UnitalityError,
    compress,
    direct_sum_embed,
    transform,
    trivial_field,
    validate_unital,
)
from opjensen.jointspec import CubeDomain, DomainError, joint_diagonalize, validate_abelian
from opjensen.linalg import ValidationError, frobenius_norm, operator_inner, operator_norm
from opjensen.sampling import random_tuple_field, random_unital_field, random_unitary

SX = np.array([[0, 1], [1, 0]], dtype=complex)
DOM1 = CubeDomain(((-2, 2),))


def test_validate_unital():
    u = random_unitary(np.random.default_rng(0), 3)
    assert validate_unital(DiscreteField([1.0], (u,))) < 1e-14
    h = np.eye(2) / np.sqrt(2)
    assert validate_unital(DiscreteField([1.0, 1.0], (h, h))) < 1e-15
    with pytest.raises(UnitalityError) as err:
        validate_unital(DiscreteField([1.0], (2 * np.eye(2),)))
    assert err.value.residual == pytest.approx(frobenius_norm(3 * np.eye(2)))


def test_field_construction_errors():
    with pytest.raises(ValidationError):
        DiscreteField([1.0, 1.0], (np.eye(2),))
    with pytest.raises(ValidationError):
        DiscreteField([0.0], (np.eye(2),))
    with pytest.raises(ValidationError):
        DiscreteField([0.5, 0.5], (np.eye(2), np.eye(3)))


def test_compress_examples():
    rng = np.random.default_rng(3)
    x = validate_abelian([SX, 0.5 * np.eye(2)])
    tf = TupleField.build([x], CubeDomain.uniform(-2, 2, 2))
    ys = compress(trivial_field([1.0], 2), tf)
    for y, m in zip(ys, x):
        np.testing.assert_array_equal(y, m)

    h = np.eye(2) / np.sqrt(2)
    tf = TupleField.build([[np.zeros((2, 2))], [2 * np.eye(2)]], DOM1)
    (y,) = compress(DiscreteField([1.0, 1.0], (h, h)), tf)
    np.testing.assert_allclose(y, np.eye(2))

    field = random_unital_field(rng, 4, 3)
    consts = [0.3, -1.2]
    tf = TupleField.build([[c * np.eye(4) for c in consts]] * 3, CubeDomain.uniform(-2, 2, 2))
    for y, c in zip(compress(field, tf), consts):
        assert frobenius_norm(y - c * np.eye(4)) < 1e-12


def test_compress_count_mismatch():
    tf = TupleField.build([[SX]], DOM1)
    h = np.eye(2) / np.sqrt(2)
    with pytest.raises(ValidationError):
        compress(DiscreteField([1.0, 1.0], (h, h)), tf)
    with pytest.raises(UnitalityError):
        compress(DiscreteField([1.0], (2 * np.eye(2),)), tf)


def test_transform_examples():
    rng = np.random.default_rng(5)
    field = random_unital_field(rng, 3, 4)
    dom = CubeDomain.uniform(-2, 2, 2)
    tf = random_tuple_field(rng, 3, 4, dom)
    assert frobenius_norm(transform(field, tf, parse("2.5", 2), dom) - 2.5 * np.eye(3)) < 1e-12
    ys = compress(field, tf)
    for i in range(2):
        assert frobenius_norm(transform(field, tf, parse(f"x{i + 1}", 2), dom) - ys[i]) < 1e-12
    got = transform(trivial_field([1.0], 2), TupleField.build([[SX]], DOM1), parse("x1^2", 1), DOM1)
    np.testing.assert_allclose(got, SX @ SX, atol=1e-15)


def test_transform_reports_offending_atom():
    tf = TupleField.build([[np.diag([0.0, 1.0])], [np.diag([0.0, 3.0])]], CubeDomain(((0, 5),)))
    h = np.eye(2) / np.sqrt(2)
    with pytest.raises(DomainError, match="atom 1"):
        transform(DiscreteField([1.0, 1.0], (h, h)), tf, parse("x1", 1), CubeDomain(((0, 2),)))


def test_tuple_field_domain():
    with pytest.raises(DomainError):
        TupleField.build([[np.diag([0.0, 3.0])]], DOM1)
    with pytest.raises(ValidationError):
        TupleField.build([[SX], [SX, SX]], DOM1)


def test_transform_invariants():
    rng = np.random.default_rng(8)
    for _ in range(30):
        d, n, m = int(rng.integers(1, 7)), int(rng.integers(1, 4)), int(rng.integers(1, 6))
        dom = CubeDomain.uniform(-2, 2, n)
        field = random_unital_field(rng, d, m)
        tf = random_tuple_field(rng, d, m, dom)
        ys = compress(field, tf)
        b, c = rng.standard_normal(n), float(rng.standard_normal())
        aff = catalog("quadratic_form", {"Q": np.zeros((n, n)), "b": b, "c": c}, n)
        want = c * np.eye(d) + sum(bi * y for bi, y in zip(b, ys))
        assert frobenius_norm(transform(field, tf, aff, dom) - want) <= 1e-10 * max(1, abs(c) + np.abs(b).sum() * 2 * np.sqrt(d))

        f, g = parse("exp(x1)", n), parse(f"abs(x{n})", n)
        lin = transform(field, tf, parse(f"3*exp(x1) - 2*abs(x{n})", n), dom)
        tf_, tg = transform(field, tf, f, dom), transform(field, tf, g, dom)
        assert frobenius_norm(lin - 3 * tf_ + 2 * tg) <= 1e-10 * max(1, 3 * frobenius_norm(tf_) + 2 * frobenius_norm(tg))

        bound = max(np.abs(f.evaluate(joint_diagonalize(t).table)).max() for t in tf.tuples)
        assert operator_norm(tf_) <= bound + 1e-10 * max(1, bound)


def test_trivial_field():
    f = trivial_field([1.0], 3)
    assert f.size == 1 and validate_unital(f) == 0
    assert validate_unital(trivial_field([0.5, 0.5], 2)) == 0
    with pytest.raises(ValidationError):
        trivial_field([0.3, 0.8], 2)


def test_direct_sum_embed():
    rng = np.random.default_rng(2)
    t = validate_abelian([SX])
    xi = np.array([0.6, 0.8])
    big, v = direct_sum_embed([t], [xi])
    np.testing.assert_array_equal(big[0], t[0])
    np.testing.assert_array_equal(v, xi)

    e1 = np.array([1.0, 0.0]) / np.sqrt(2)
    big, v = direct_sum_embed([t, validate_abelian([np.diag([1.0, 2.0])])], [e1, e1])
    assert big.dim == 4
    np.testing.assert_allclose(v, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])

    ts = [validate_abelian([np.diag(rng.uniform(-1, 1, 3)), np.diag(rng.uniform(-1, 1, 3))]) for _ in range(3)]
    vs = [rng.standard_normal(3) for _ in range(3)]
    norm = np.sqrt(sum(np.vdot(v, v) for v in vs))
    vs = [v / norm for v in vs]
    big, xi = direct_sum_embed(ts, vs)
    for i in range(2):
        blockwise = sum(operator_inner(v, t[i]) for t, v in zip(ts, vs))
        assert operator_inner(xi, big[i]) == pytest.approx(blockwise, abs=1e-14)

    with pytest.raises(ValidationError):
        direct_sum_embed([t, t], [xi[:2], xi[:2]])
    with pytest.raises(ValidationError):
        direct_sum_embed([t, ts[0]], [e1, np.array([1, 0, 0]) / np.sqrt(2)])
