"""Joint spectral decomposition of commuting Hermitian tuples and f(x1, ..., xn).

In finite dimension the joint spectral measure of an abelian tuple is a
finite sum of rank-one projectors onto a common eigenbasis, each carrying an
n-tuple of joint eigenvalues.  Applying ``f`` means evaluating it at those
d points and conjugating back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_POLICY,
    NumericalError,
    TolerancePolicy,
    ValidationError,
    as_hermitian,
    commutator_norm,
    eig_hermitian,
    frobenius_norm,
    hermitian_part,
)


class CommutatorError(ValidationError):
    def __init__(self, message: str, pair: tuple[int, int], norm: float):
        super().__init__(message)
        self.pair = pair
        self.norm = norm


class DomainError(ValidationError):
    def __init__(self, message: str, violations: list):
        super().__init__(message)
        self.violations = violations


@dataclass(frozen=True)
class CubeDomain:
    """Product of closed intervals ``[lo_i, hi_i]``."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        if not ivs:
            raise ValidationError("cube needs at least one interval")
        for i, (lo, hi) in enumerate(ivs):
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
                raise ValidationError(f"interval {i + 1} is invalid: [{lo}, {hi}]")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def uniform(cls, lo: float, hi: float, n: int) -> "CubeDomain":
        return cls(((lo, hi),) * n)

    @property
    def n(self) -> int:
        return len(self.intervals)

    @property
    def lo(self) -> np.ndarray:
        return np.array([iv[0] for iv in self.intervals])

    @property
    def hi(self) -> np.ndarray:
        return np.array([iv[1] for iv in self.intervals])

    def slack(self, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
        return policy.cluster_tol * np.maximum(1.0, np.maximum(abs(self.lo), abs(self.hi)))

    def contains(self, points, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
        """Row-wise membership of ``points`` (shape ``(m, n)``) in the widened cube."""
        pts = np.atleast_2d(points)
        s = self.slack(policy)
        return np.all((pts >= self.lo - s) & (pts <= self.hi + s), axis=1)

    def clip(self, points) -> np.ndarray:
        return np.clip(points, self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Common eigenbasis ``u`` and the table of joint eigenvalues.

    Row ``k`` of ``table`` is the point of R^n carried by column ``k`` of ``u``.
    """

    u: np.ndarray
    table: np.ndarray
    residual: float

    @property
    def projectors(self) -> np.ndarray:
        """Rank-one projectors ``u_k u_k*`` stacked along axis 0."""
        return np.einsum("ik,jk->kij", self.u, self.u.conj())


@dataclass(frozen=True, eq=False)
class AbelianTuple:
    """Validated tuple of pairwise commuting Hermitian matrices.

    Build with :func:`validate_abelian`.
    """

    members: tuple[np.ndarray, ...]
    _spectra: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)


def validate_abelian(members: Sequence, policy: TolerancePolicy = DEFAULT_POLICY) -> AbelianTuple:
    """Check that ``members`` are Hermitian, of equal size, and pairwise commuting.

    Raises :class:`CommutatorError` naming the worst pair (1-based) when some
    commutator exceeds ``commute_tol * max(1, ||x_i|| ||x_j||)``.
    """
    if isinstance(members, AbelianTuple):
        return members
    if len(members) == 0:
        raise ValidationError("an abelian tuple needs at least one member")
    mats = tuple(as_hermitian(m, policy) for m in members)
    d = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != d:
            raise ValidationError(f"member {i + 1} has dimension {m.shape[0]}, expected {d}")
    worst, worst_pair, worst_norm = 0.0, None, 0.0
    for i, j in itertools.combinations(range(len(mats)), 2):
        c = commutator_norm(mats[i], mats[j])
        scale = max(1.0, frobenius_norm(mats[i]) * frobenius_norm(mats[j]))
        if c / scale > worst:
            worst, worst_pair, worst_norm = c / scale, (i + 1, j + 1), c
    if worst > policy.commute_tol:
        raise CommutatorError(
            f"members {worst_pair[0]} and {worst_pair[1]} do not commute: "
            f"||[x_i, x_j]||_F = {worst_norm:.6g}",
            pair=worst_pair,
            norm=worst_norm,
        )
    return AbelianTuple(mats)


def _clusters(w: np.ndarray, tol: float) -> list[np.ndarray]:
    # w ascending; split wherever the gap exceeds tol
    cuts = np.nonzero(np.diff(w) > tol)[0] + 1
    return np.split(np.arange(w.size), cuts)


def _refine(members, i, basis, policy):
    if i == len(members) or basis.shape[1] == 1:
        return basis
    x = members[i]
    h = hermitian_part(basis.conj().T @ x @ basis)
    w, v = eig_hermitian(h, policy)
    basis = basis @ v
    radius = max(abs(w[0]), abs(w[-1]))
    blocks = _clusters(w, policy.cluster_tol * max(1.0, radius))
    return np.hstack([_refine(members, i + 1, basis[:, b], policy) for b in blocks])


def joint_diagonalize(t: AbelianTuple, policy: TolerancePolicy = DEFAULT_POLICY) -> JointSpectrum:
    """Common eigenbasis of an abelian tuple by recursive block refinement.

    The first member is diagonalized, its spectrum split into clusters, and
    each cluster's eigenspace is handed to the next member.  Deterministic.
    """
    t = validate_abelian(t, policy)
    cached = t._spectra.get(policy)
    if cached is not None:
        return cached
    d = t.dim
    u = _refine(t.members, 0, np.eye(d, dtype=complex), policy)
    table = np.empty((d, t.n))
    residual = 0.0
    for i, x in enumerate(t.members):
        lam = np.einsum("ik,ij,jk->k", u.conj(), x, u).real
        table[:, i] = lam
        r = frobenius_norm(x @ u - u * lam) / max(1.0, frobenius_norm(x))
        residual = max(residual, r)
    if residual > policy.eig_residual_tol:
        raise NumericalError(f"joint diagonalization residual {residual:.3e} above tolerance",
                             residual=residual)
    u.setflags(write=False)
    table.setflags(write=False)
    spec = JointSpectrum(u=u, table=table, residual=residual)
    t._spectra[policy] = spec
    return spec


def domain_check(t: AbelianTuple, dom: CubeDomain, policy: TolerancePolicy = DEFAULT_POLICY) -> list:
    """Joint eigenvalue coordinates lying outside the (closed, widened) cube.

    Returns a list of ``(i, k, value)`` triples with 1-based member index
    ``i`` and 0-based eigenvector index ``k``; empty means the tuple is in the
    domain.
    """
    t = validate_abelian(t, policy)
    if dom.n != t.n:
        raise ValidationError(f"cube has arity {dom.n}, tuple has {t.n} members")
    table = joint_diagonalize(t, policy).table
    s = dom.slack(policy)
    bad = (table < dom.lo - s) | (table > dom.hi + s)
    return [(int(i) + 1, int(k), float(table[k, i])) for k, i in zip(*np.nonzero(bad))]


def _strict_grid(dom: CubeDomain, per_axis: int = 9) -> np.ndarray:
    per_axis = max(2, min(per_axis, int(round(4096 ** (1 / dom.n)))))
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in dom.intervals]
    return np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)


def apply_function(f, t, dom: CubeDomain, policy: TolerancePolicy = DEFAULT_POLICY,
                   strict: bool = False) -> np.ndarray:
    """Joint functional calculus ``f(x1, ..., xn) = sum_k f(lambda(k)) u_k u_k*``.

    ``f`` only needs to be evaluable at the joint eigenvalue points.  With
    ``strict=True`` it is additionally required to evaluate on a grid
    covering the whole cube.
    """
    from .convexfn import as_scalar_function

    t = validate_abelian(t, policy)
    f = as_scalar_function(f, t.n)
    violations = domain_check(t, dom, policy)
    if violations:
        raise DomainError(f"joint spectrum leaves the cube: {violations[:5]}", violations)
    if strict:
        f.evaluate(_strict_grid(dom))
    spec = joint_diagonalize(t, policy)
    vals = f.evaluate(dom.clip(spec.table))
    out = hermitian_part((spec.u * vals) @ spec.u.conj().T)
    out.setflags(write=False)
    return out
