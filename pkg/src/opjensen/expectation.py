"""Conditional expectations onto an abelian subalgebra of d x d matrices.

The subalgebra is spanned by a partition of unity ``p_1, ..., p_k`` (so its
spectrum is the finite set ``{0, ..., k-1}``), the positive functional is
``phi(x) = tr(rho x)`` for a PSD density ``rho``, and the induced measure on
the atoms is ``mu(j) = phi(p_j)``.  The conditional expectation is

    Phi(x)(j) = tr(rho p_j x) / mu(j)

on atoms of positive measure.  Atoms with ``mu(j) = 0`` are masked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_POLICY,
    TolerancePolicy,
    ValidationError,
    as_hermitian,
    as_matrix,
    as_unit_vector,
    frobenius_norm,
    is_psd,
)


class CentralizerError(ValidationError):
    def __init__(self, message: str, atom: int, norm: float):
        super().__init__(message)
        self.atom = atom
        self.norm = norm


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    """Mutually orthogonal projections summing to the identity."""

    atoms: tuple[np.ndarray, ...]

    @classmethod
    def from_matrices(cls, atoms: Sequence, policy: TolerancePolicy = DEFAULT_POLICY):
        if len(atoms) == 0:
            raise ValidationError("partition needs at least one projection")
        ps = tuple(as_hermitian(p, policy) for p in atoms)
        d = ps[0].shape[0]
        tol = policy.herm_tol
        for j, p in enumerate(ps):
            if p.shape[0] != d:
                raise ValidationError(f"projection {j} has dimension {p.shape[0]}, expected {d}")
            if frobenius_norm(p @ p - p) > tol * max(1.0, frobenius_norm(p)):
                raise ValidationError(f"atom {j} is not a projection (p^2 != p)")
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                if frobenius_norm(ps[i] @ ps[j]) > tol * max(1.0, frobenius_norm(ps[i])):
                    raise ValidationError(f"projections {i} and {j} are not orthogonal")
        total = sum(ps)
        if frobenius_norm(total - np.eye(d)) > tol * max(1.0, np.sqrt(d)):
            raise ValidationError("projections do not sum to the identity")
        return cls(ps)

    @classmethod
    def from_basis(cls, u: np.ndarray, sizes: Sequence[int], policy: TolerancePolicy = DEFAULT_POLICY):
        """Group consecutive columns of the unitary ``u`` into projections of the given ranks."""
        edges = np.cumsum([0, *sizes])
        if edges[-1] != u.shape[1]:
            raise ValidationError("block sizes must add up to the dimension")
        blocks = [u[:, a:b] for a, b in zip(edges[:-1], edges[1:])]
        return cls.from_matrices([b @ b.conj().T for b in blocks], policy)

    @classmethod
    def diagonal(cls, d: int):
        """The partition into the standard basis projections ``e_j e_j*``."""
        return cls(tuple(_frozen_diag(j, d) for j in range(d)))

    @property
    def dim(self) -> int:
        return self.atoms[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.atoms)

    def element(self, coeffs) -> np.ndarray:
        """The subalgebra element ``z = sum_j z_j p_j``."""
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.k,):
            raise ValidationError(f"expected {self.k} coefficients, got shape {coeffs.shape}")
        return np.einsum("j,jab->ab", coeffs, np.array(self.atoms))


def _frozen_diag(j, d):
    p = np.zeros((d, d), dtype=complex)
    p[j, j] = 1
    p.setflags(write=False)
    return p


@dataclass(frozen=True, eq=False)
class DensityFunctional:
    """The positive functional ``x -> tr(rho x)``; ``rho`` need not have unit trace."""

    rho: np.ndarray

    @classmethod
    def from_matrix(cls, rho, policy: TolerancePolicy = DEFAULT_POLICY):
        rho = as_hermitian(rho, policy)
        if not is_psd(rho, policy.herm_tol, policy):
            raise ValidationError("density is not positive semidefinite")
        if np.trace(rho).real <= 0:
            raise ValidationError("density has non-positive trace")
        return cls(rho)

    @classmethod
    def trace(cls, d: int):
        rho = np.eye(d, dtype=complex)
        rho.setflags(write=False)
        return cls(rho)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def __call__(self, x) -> complex:
        return complex(np.einsum("ij,ji->", self.rho, np.asarray(x)))


@dataclass(frozen=True)
class AtomicMeasure:
    weights: np.ndarray
    support_mask: np.ndarray

    @property
    def total(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class CondExpValue:
    """Values of Phi(x) on the atoms; masked atoms hold NaN."""

    values: np.ndarray
    support_mask: np.ndarray

    @property
    def supported(self) -> np.ndarray:
        return self.values[self.support_mask]

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def __getitem__(self, j):
        if not self.support_mask[j]:
            raise IndexError(f"atom {j} has measure zero; Phi is undefined there")
        return self.values[j]

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class SubalgebraContext:
    partition: PartitionOfUnity
    functional: DensityFunctional
    measure: AtomicMeasure
    policy: TolerancePolicy = DEFAULT_POLICY

    @property
    def dim(self) -> int:
        return self.partition.dim

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.measure.support_mask)[0]


def build_context(partition, functional, policy: TolerancePolicy = DEFAULT_POLICY) -> SubalgebraContext:
    """Assemble the subalgebra, the functional and the measure ``mu(j) = tr(rho p_j)``.

    ``partition`` may be a :class:`PartitionOfUnity` or a list of projections;
    ``functional`` a :class:`DensityFunctional` or a PSD matrix.  Raises
    :class:`CentralizerError` when ``rho`` does not commute with some atom.
    """
    if not isinstance(partition, PartitionOfUnity):
        partition = PartitionOfUnity.from_matrices(partition, policy)
    if not isinstance(functional, DensityFunctional):
        functional = DensityFunctional.from_matrix(functional, policy)
    if partition.dim != functional.dim:
        raise ValidationError(f"partition has dimension {partition.dim}, density {functional.dim}")
    rho = functional.rho
    scale = max(1.0, frobenius_norm(rho))
    norms = [frobenius_norm(rho @ p - p @ rho) for p in partition.atoms]
    worst = int(np.argmax(norms))
    if norms[worst] > policy.commute_tol * scale:
        raise CentralizerError(
            f"atom {worst} is not in the centralizer: ||rho p - p rho||_F = {norms[worst]:.3e}",
            atom=worst, norm=norms[worst])
    weights = np.array([functional(p).real for p in partition.atoms])
    weights = np.where(weights < 0, 0.0, weights)
    mask = weights > policy.null_atom_rtol * np.trace(rho).real
    weights.setflags(write=False)
    mask.setflags(write=False)
    return SubalgebraContext(partition, functional, AtomicMeasure(weights, mask), policy)


def functional_apply(ctx: SubalgebraContext, x) -> complex:
    """``phi(x) = tr(rho x)``."""
    x = np.asarray(x)
    if x.shape != (ctx.dim, ctx.dim):
        raise ValidationError(f"expected a {ctx.dim}x{ctx.dim} matrix, got {x.shape}")
    return ctx.functional(x)


def cond_expect(ctx: SubalgebraContext, x) -> CondExpValue:
    """Phi(x) as a vector of values on the atoms (NaN on null atoms)."""
    x = as_matrix(x)
    if x.shape[0] != ctx.dim:
        raise ValidationError(f"expected a {ctx.dim}x{ctx.dim} matrix, got {x.shape}")
    mask = ctx.measure.support_mask
    rx = ctx.functional.rho @ x
    raw = np.array([np.einsum("ij,ji->", p, rx) for p in ctx.partition.atoms])
    vals = np.full(ctx.k, np.nan, dtype=complex)
    vals[mask] = raw[mask] / ctx.measure.weights[mask]
    vals.setflags(write=False)
    return CondExpValue(vals, mask)


def vector_state_subalgebra(xi, policy: TolerancePolicy = DEFAULT_POLICY) -> SubalgebraContext:
    """Trace functional with the subalgebra generated by the projection onto ``xi``.

    Atom 0 is ``P = xi xi*`` and carries ``Phi(x)(0) = (x xi | xi)``.  Atom 1
    is ``1 - P`` with weight ``d - 1`` and value ``tr(x - P x) / (d - 1)``.
    For ``d = 1`` there is only atom 0.
    """
    xi = as_unit_vector(xi, tol=max(policy.herm_tol, 1e-10))
    d = xi.size
    P = np.outer(xi, xi.conj())
    atoms = [P] if d == 1 else [P, np.eye(d) - P]
    return build_context(PartitionOfUnity.from_matrices(atoms, policy), DensityFunctional.trace(d), policy)


def module_property_check(ctx: SubalgebraContext, x, y_coeffs) -> float:
    """Largest deviation in ``Phi(xy) = Phi(yx) = Phi(x) y`` over supported atoms.

    ``y = sum_j y_j p_j`` is given by its coefficients.
    """
    x = as_matrix(x)
    y_coeffs = np.asarray(y_coeffs)
    y = ctx.partition.element(y_coeffs)
    mask = ctx.measure.support_mask
    a = cond_expect(ctx, x @ y).values[mask]
    b = cond_expect(ctx, y @ x).values[mask]
    c = cond_expect(ctx, x).values[mask] * y_coeffs[mask]
    if a.size == 0:
        return 0.0
    return float(max(np.max(np.abs(a - c)), np.max(np.abs(b - c)), np.max(np.abs(a - b))))
