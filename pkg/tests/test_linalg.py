import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opjensen.linalg import (
    DEFAULT_POLICY,
    NumericalError,
    TolerancePolicy,
    ValidationError,
    as_hermitian,
    commutator_norm,
    eig_hermitian,
    frobenius_norm,
    is_psd,
    jacobi_eigh,
    operator_inner,
)
from opjensen.sampling import random_hermitian, random_unitary

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0])


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_diagonal(method):
    w, u = eig_hermitian(np.diag([3.0, 1.0]), method=method)
    np.testing.assert_allclose(w, [1, 3])
    np.testing.assert_allclose(np.abs(u), [[0, 1], [1, 0]], atol=1e-15)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_pauli_x(method):
    # roots of t^2 - 1: eigenvectors (1,-1)/sqrt2 and (1,1)/sqrt2 up to phase
    w, u = eig_hermitian(SX, method=method)
    np.testing.assert_allclose(w, [-1, 1], atol=1e-15)
    for k, v in enumerate([np.array([1, -1]) / np.sqrt(2), np.array([1, 1]) / np.sqrt(2)]):
        assert abs(abs(np.vdot(v, u[:, k])) - 1) < 1e-14


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_identity(method):
    w, u = eig_hermitian(np.eye(5), method=method)
    np.testing.assert_array_equal(w, np.ones(5))
    assert frobenius_norm(u @ u.conj().T - np.eye(5)) == 0


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_jacobi_sweep_cap_raises():
    h = random_hermitian(np.random.default_rng(3), 12)
    with pytest.raises(NumericalError):
        jacobi_eigh(h, max_sweeps=1)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(11)
    for d in (1, 2, 3, 7, 16):
        h = random_hermitian(rng, d)
        wj, uj = eig_hermitian(h, method="jacobi")
        wl, _ = eig_hermitian(h)
        np.testing.assert_allclose(wj, wl, atol=1e-12)
        assert frobenius_norm(h @ uj - uj * wj) < 1e-12


@st.composite
def hermitians(draw, max_dim=32):
    d = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-3, 1.0, 1e3]))
    return random_hermitian(np.random.default_rng(seed), d) * scale


@settings(max_examples=200, deadline=None)
@given(hermitians())
def test_eig_reconstruction(h):
    w, u = eig_hermitian(h)
    assert np.all(np.diff(w) >= 0)
    assert frobenius_norm((u * w) @ u.conj().T - h) <= 1e-10 * max(1, frobenius_norm(h))
    assert frobenius_norm(u.conj().T @ u - np.eye(len(w))) <= 1e-10
    assert abs(w.sum() - np.trace(h).real) <= 1e-9 * max(1, abs(np.trace(h)))


@settings(max_examples=50, deadline=None)
@given(hermitians(max_dim=16), st.integers(0, 2**32 - 1))
def test_spectrum_unitarily_invariant(h, seed):
    v = random_unitary(np.random.default_rng(seed), h.shape[0])
    w1, _ = eig_hermitian(h)
    w2, _ = eig_hermitian(v @ h @ v.conj().T)
    np.testing.assert_allclose(w1, w2, atol=1e-10 * max(1, frobenius_norm(h)))


def test_commutator_norm():
    assert commutator_norm(np.diag([1, 2]), np.diag([3, 4])) == 0
    # [X, Z] = [[0,-2],[2,0]]
    assert commutator_norm(SX, SZ) == pytest.approx(2 * np.sqrt(2), abs=1e-15)
    x = random_hermitian(np.random.default_rng(0), 6)
    assert commutator_norm(x, x @ x) < 1e-12
    with pytest.raises(ValidationError):
        commutator_norm(np.eye(2), np.eye(3))


def test_is_psd():
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1, -0.5]), tol=1e-9)
    xi = np.array([1, 2j, -1]) / np.sqrt(6)
    assert is_psd(np.outer(xi, xi.conj()))


def test_operator_inner():
    e1 = np.array([1, 0])
    assert operator_inner(e1, np.diag([2.5, 7])) == 2.5
    xi = np.array([1, 1]) / np.sqrt(2)
    assert operator_inner(xi, SX) == pytest.approx(1, abs=1e-15)
    assert operator_inner(xi, np.eye(2)) == pytest.approx(1, abs=1e-15)
    with pytest.raises(ValidationError):
        operator_inner(np.ones(3), np.eye(2))


def test_as_hermitian_symmetrizes_within_tolerance():
    m = np.array([[1, 1 + 1e-13], [1, 2]])
    h = as_hermitian(m)
    assert np.array_equal(h, h.conj().T)
    assert not h.flags.writeable
    with pytest.raises(ValidationError):
        as_hermitian(np.array([[1, 1.1], [1, 2]]))
    with pytest.raises(ValidationError):
        as_hermitian(np.array([[np.nan]]))


def test_policy_rejects_negative_and_replace():
    with pytest.raises(ValidationError):
        TolerancePolicy(ineq_atol=-1)
    p = DEFAULT_POLICY.replace(ineq_atol=0.0)
    assert p.ineq_atol == 0 and p.ineq_rtol == DEFAULT_POLICY.ineq_rtol
    assert p.ineq_slack(10.0) == pytest.approx(1e-8)
