"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Validation helpers return read-only copies so that values handed around
between modules cannot be mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ValidationError(ValueError):
    """Input violates a structural requirement (shape, hermiticity, ...)."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to reach its residual target."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class TolerancePolicy:
    """Tolerances shared by all checks.

    Every tolerance is relative: it is multiplied by ``max(1, norm)`` of the
    quantity being tested before comparison.
    """

    herm_tol: float = 1e-10
    commute_tol: float = 1e-10
    eig_residual_tol: float = 1e-10
    ineq_atol: float = 1e-9
    ineq_rtol: float = 1e-9
    cluster_tol: float = 1e-8
    null_atom_rtol: float = 1e-12
    unital_rtol: float = 1e-9
    probe_rtol: float = 1e-9

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not (value >= 0 and np.isfinite(value)):
                raise ValidationError(f"tolerance {name} must be finite and >= 0, got {value!r}")

    def replace(self, **changes) -> "TolerancePolicy":
        values = dict(self.__dict__)
        values.update(changes)
        return TolerancePolicy(**values)

    def ineq_slack(self, rhs: float) -> float:
        """Allowed negative margin for an inequality whose right side is ``rhs``."""
        return self.ineq_atol + self.ineq_rtol * max(1.0, abs(rhs))


DEFAULT_POLICY = TolerancePolicy()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def as_matrix(m) -> np.ndarray:
    """Validate ``m`` as a finite square complex matrix and return a frozen copy."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return _frozen(a)


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def as_hermitian(m, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Check hermiticity within ``herm_tol`` and return the symmetrized matrix."""
    a = as_matrix(m)
    dev = frobenius_norm(a - a.conj().T)
    if dev > policy.herm_tol * max(1.0, frobenius_norm(a)):
        raise ValidationError(f"matrix is not Hermitian: ||m - m*||_F = {dev:.3e}")
    return _frozen(hermitian_part(a))


def as_vector(v, dim: int | None = None) -> np.ndarray:
    a = np.asarray(v)
    if a.ndim != 1 or a.size == 0:
        raise ValidationError(f"expected a non-empty vector, got shape {a.shape}")
    if dim is not None and a.size != dim:
        raise ValidationError(f"vector has length {a.size}, expected {dim}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("vector has non-finite entries")
    return _frozen(a)


def as_unit_vector(v, dim: int | None = None, tol: float = 1e-10) -> np.ndarray:
    a = as_vector(v, dim)
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"vector is not a unit vector: norm = {norm!r}")
    return a


def frobenius_norm(m) -> float:
    return float(np.linalg.norm(m))


def operator_norm(m) -> float:
    return float(np.linalg.norm(m, 2))


def commutator_norm(a, b) -> float:
    """Frobenius norm of ``ab - ba``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return frobenius_norm(a @ b - b @ a)


def operator_inner(xi, x, eta=None) -> complex:
    """The expectation value ``(x xi | eta) = eta* x xi``; ``eta`` defaults to ``xi``."""
    xi = np.asarray(xi)
    eta = xi if eta is None else np.asarray(eta)
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[1] != xi.shape[0] or x.shape[0] != eta.shape[0]:
        raise ValidationError(f"dimension mismatch: vector {xi.shape} and matrix {x.shape}")
    return complex(np.vdot(eta, x @ xi))


def _check_eig(h: np.ndarray, w: np.ndarray, u: np.ndarray, tol: float) -> float:
    scale = max(1.0, frobenius_norm(h))
    res = frobenius_norm(h @ u - u * w) / scale
    orth = frobenius_norm(u.conj().T @ u - np.eye(h.shape[0]))
    return max(res, orth)


def jacobi_eigh(h, tol: float = 1e-14, max_sweeps: int = 100):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Returns ``(w, u)`` with ``w`` ascending and ``h @ u = u @ diag(w)``.
    Each rotation first removes the phase of the pivot so that a real
    Jacobi rotation can annihilate it.
    """
    a = np.array(h, dtype=complex)
    d = a.shape[0]
    u = np.eye(d, dtype=complex)
    scale = max(frobenius_norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = frobenius_norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= np.finfo(float).eps * 1e-3 * scale:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                u[:, idx] = u[:, idx] @ rot
    else:
        off = frobenius_norm(a - np.diag(np.diag(a)))
        if off > tol * scale:
            raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps, "
                                 f"off-diagonal norm {off:.3e}", residual=off)
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], u[:, order]


def eig_hermitian(h, policy: TolerancePolicy = DEFAULT_POLICY, method: str = "lapack"):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    h : array_like
        Hermitian matrix (within ``policy.herm_tol``).
    method : {"lapack", "jacobi"}
        ``"lapack"`` uses ``numpy.linalg.eigh``; ``"jacobi"`` uses the
        cyclic Jacobi routine in this module.

    Returns
    -------
    w : ndarray
        Ascending real eigenvalues.
    u : ndarray
        Unitary matrix whose columns are the matching eigenvectors.

    Raises
    ------
    ValidationError
        If ``h`` is not Hermitian.
    NumericalError
        If the reconstruction residual exceeds ``policy.eig_residual_tol``.
    """
    h = as_hermitian(h, policy)
    if method == "lapack":
        try:
            w, u = np.linalg.eigh(h)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigh failed: {exc}") from exc
    elif method == "jacobi":
        w, u = jacobi_eigh(h)
    else:
        raise ValueError(f"unknown method {method!r}")
    res = _check_eig(h, w, u, policy.eig_residual_tol)
    if res > policy.eig_residual_tol:
        raise NumericalError(f"eigendecomposition residual {res:.3e} above tolerance", residual=res)
    return w, u


def is_psd(h, tol: float = 1e-10, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """True iff the smallest eigenvalue of ``h`` is ``>= -tol * max(1, ||h||_F)``."""
    h = as_hermitian(h, policy)
    wmin = np.linalg.eigvalsh(h)[0]
    return bool(wmin >= -tol * max(1.0, frobenius_norm(h)))


def psd_power(h, power: float, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """``h**power`` for positive definite ``h`` (used for inverse square roots)."""
    w, u = eig_hermitian(h, policy)
    if w[0] <= 0:
        raise NumericalError(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return (u * w**power) @ u.conj().T
