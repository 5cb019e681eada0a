"""Unital column fields over finite atomic measure spaces.

A field is a list of matrices ``a_t`` with weights ``nu_t > 0``; the integral
of an operator field is the weighted sum over atoms.  The field is unital
when ``sum_t nu_t a_t* a_t = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .jointspec import AbelianTuple, CubeDomain, DomainError, apply_function, domain_check, validate_abelian
from .linalg import (
    DEFAULT_POLICY,
    TolerancePolicy,
    ValidationError,
    as_matrix,
    as_vector,
    frobenius_norm,
    hermitian_part,
)


class UnitalityError(ValidationError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class DiscreteField:
    weights: np.ndarray
    maps: tuple[np.ndarray, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or w.size != len(self.maps):
            raise ValidationError(f"{w.size} weights for {len(self.maps)} maps")
        if not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise ValidationError("field weights must be positive and finite")
        maps = tuple(as_matrix(a) for a in self.maps)
        d = maps[0].shape[0]
        if any(a.shape[0] != d for a in maps):
            raise ValidationError("field maps have different dimensions")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "maps", maps)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def dim(self) -> int:
        return self.maps[0].shape[0]

    def integrate(self, mats: Sequence[np.ndarray]) -> np.ndarray:
        """``sum_t nu_t a_t* m_t a_t``."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for nu, a, m in zip(self.weights, self.maps, mats):
            out += nu * (a.conj().T @ m @ a)
        return out


@dataclass(frozen=True, eq=False)
class TupleField:
    """One abelian tuple per atom, all inside a shared cube."""

    tuples: tuple[AbelianTuple, ...]
    cube: CubeDomain

    @classmethod
    def build(cls, tuples: Sequence, cube: CubeDomain, policy: TolerancePolicy = DEFAULT_POLICY):
        if len(tuples) == 0:
            raise ValidationError("tuple field needs at least one atom")
        ts = tuple(validate_abelian(t, policy) for t in tuples)
        n, d = ts[0].n, ts[0].dim
        for idx, t in enumerate(ts):
            if t.n != n or t.dim != d:
                raise ValidationError(f"tuple at atom {idx} has shape (n={t.n}, d={t.dim}), "
                                      f"expected (n={n}, d={d})")
            bad = domain_check(t, cube, policy)
            if bad:
                raise DomainError(f"tuple at atom {idx} leaves the cube: {bad[:5]}", [(idx, *b) for b in bad])
        return cls(ts, cube)

    @property
    def size(self) -> int:
        return len(self.tuples)

    @property
    def n(self) -> int:
        return self.tuples[0].n

    @property
    def dim(self) -> int:
        return self.tuples[0].dim


def validate_unital(field: DiscreteField, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """Residual ``||sum nu_t a_t* a_t - 1||_F``; raises when above ``unital_rtol * sqrt(d)``."""
    d = field.dim
    residual = frobenius_norm(field.integrate([np.eye(d)] * field.size) - np.eye(d))
    if residual > policy.unital_rtol * np.sqrt(d):
        raise UnitalityError(f"field is not unital: residual {residual:.6g}", residual)
    return residual


def _check_pair(field, tfield, policy):
    validate_unital(field, policy)
    if field.size != tfield.size:
        raise ValidationError(f"field has {field.size} atoms, tuple field has {tfield.size}")
    if field.dim != tfield.dim:
        raise ValidationError(f"field dimension {field.dim} != tuple dimension {tfield.dim}")


def compress(field: DiscreteField, tfield: TupleField,
             policy: TolerancePolicy = DEFAULT_POLICY) -> list[np.ndarray]:
    """``y_i = sum_t nu_t a_t* x_{i,t} a_t`` for each coordinate ``i``.

    The returned matrices are Hermitian but need not commute.
    """
    _check_pair(field, tfield, policy)
    return [hermitian_part(field.integrate([t[i] for t in tfield.tuples])) for i in range(tfield.n)]


def transform(field: DiscreteField, tfield: TupleField, f, dom: CubeDomain | None = None,
              policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """``sum_t nu_t a_t* f(x_t) a_t``."""
    _check_pair(field, tfield, policy)
    dom = tfield.cube if dom is None else dom
    values = []
    for idx, t in enumerate(tfield.tuples):
        try:
            values.append(apply_function(f, t, dom, policy))
        except DomainError as exc:
            raise DomainError(f"atom {idx}: {exc}", [(idx, *v) for v in exc.violations]) from exc
    return hermitian_part(field.integrate(values))


def trivial_field(weights, dim: int, tol: float = 1e-12) -> DiscreteField:
    """The field ``a_t = 1`` for a probability vector of weights."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or np.any(w < 0) or abs(w.sum() - 1.0) > tol:
        raise ValidationError(f"weights must be a probability vector, got {w.tolist()}")
    keep = w > 0
    eye = np.eye(dim, dtype=complex)
    return DiscreteField(w[keep], tuple(eye for _ in range(int(keep.sum()))))


def direct_sum_embed(tuples: Sequence, vectors: Sequence, policy: TolerancePolicy = DEFAULT_POLICY,
                     tol: float = 1e-10):
    """Block-diagonal tuple ``(+)_j x_j`` and concatenated vector ``(+)_j xi_j``.

    Requires ``sum_j ||xi_j||^2 = 1``; returns ``(AbelianTuple, xi)``.
    """
    if len(tuples) == 0 or len(tuples) != len(vectors):
        raise ValidationError(f"{len(tuples)} tuples for {len(vectors)} vectors")
    ts = [validate_abelian(t, policy) for t in tuples]
    n = ts[0].n
    if any(t.n != n for t in ts):
        raise ValidationError("tuples have different arities")
    vs = [as_vector(v, t.dim) for v, t in zip(vectors, ts)]
    total = sum(float(np.vdot(v, v).real) for v in vs)
    if abs(total - 1.0) > tol:
        raise ValidationError(f"squared norms sum to {total!r}, expected 1")
    members = [block_diag(*[t[i] for t in ts]) for i in range(n)]
    xi = np.concatenate(vs).astype(complex)
    return validate_abelian(members, policy), xi
