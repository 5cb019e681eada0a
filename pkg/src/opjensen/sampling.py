"""Seeded random generators for contexts, fields and commuting tuples.

All generators take a ``numpy.random.Generator``; the package always builds
them as ``numpy.random.default_rng(seed)`` (PCG64), so a seed fixes every
draw on any platform numpy supports.
"""

from __future__ import annotations

import numpy as np

from .expectation import DensityFunctional, PartitionOfUnity, SubalgebraContext, build_context
from .fields import DiscreteField, TupleField
from .jointspec import AbelianTuple, CubeDomain, validate_abelian
from .linalg import DEFAULT_POLICY, TolerancePolicy, psd_power


def complex_gaussian(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Ginibre matrix."""
    q, r = np.linalg.qr(complex_gaussian(rng, d, d))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    g = complex_gaussian(rng, d, d)
    return (g + g.conj().T) / 2


def random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    v = complex_gaussian(rng, d)
    return v / np.linalg.norm(v)


def random_sizes(rng: np.random.Generator, d: int, k: int) -> list[int]:
    """Random composition of ``d`` into ``k`` positive parts."""
    cuts = np.sort(rng.choice(np.arange(1, d), size=k - 1, replace=False)) if k > 1 else []
    edges = [0, *cuts, d]
    return [int(b - a) for a, b in zip(edges[:-1], edges[1:])]


def random_commuting_tuple(rng: np.random.Generator, d: int, cube: CubeDomain,
                           degenerate: bool = False, policy: TolerancePolicy = DEFAULT_POLICY) -> AbelianTuple:
    """``x_i = u diag(s_i) u*`` with one shared Haar unitary ``u``.

    Spectra are uniform in each interval; with ``degenerate=True`` each
    member draws only a few distinct values so eigenspaces overlap.
    """
    u = random_unitary(rng, d)
    members = []
    for lo, hi in cube.intervals:
        if degenerate:
            pool = lo + (hi - lo) * rng.random(max(1, d // 2))
            spec = rng.choice(pool, size=d)
        else:
            spec = lo + (hi - lo) * rng.random(d)
        members.append((u * spec) @ u.conj().T)
    return validate_abelian(members, policy)


def random_context(rng: np.random.Generator, d: int, k: int, null_prob: float = 0.1,
                   policy: TolerancePolicy = DEFAULT_POLICY) -> SubalgebraContext:
    """Random partition of rank sizes summing to ``d`` and a PSD density commuting with it.

    With probability ``null_prob`` per block (never all blocks) the density
    vanishes on the block, producing a null atom.
    """
    u = random_unitary(rng, d)
    sizes = random_sizes(rng, d, k)
    partition = PartitionOfUnity.from_basis(u, sizes, policy)
    spec = rng.random(d) * rng.uniform(0.1, 10.0)
    null = rng.random(k) < null_prob
    if null.all():
        null[rng.integers(k)] = False
    edges = np.cumsum([0, *sizes])
    for j in np.nonzero(null)[0]:
        spec[edges[j]:edges[j + 1]] = 0.0
    rho = (u * spec) @ u.conj().T
    return build_context(partition, DensityFunctional.from_matrix((rho + rho.conj().T) / 2, policy), policy)


def random_unital_field(rng: np.random.Generator, d: int, m: int,
                        policy: TolerancePolicy = DEFAULT_POLICY) -> DiscreteField:
    """``a_t = g_t (sum_s nu_s g_s* g_s)^(-1/2)`` for complex Gaussian ``g_t``."""
    weights = rng.uniform(0.2, 1.0, size=m)
    gs = [complex_gaussian(rng, d, d) for _ in range(m)]
    s = sum(nu * g.conj().T @ g for nu, g in zip(weights, gs))
    root = psd_power((s + s.conj().T) / 2, -0.5, policy)
    return DiscreteField(weights, tuple(g @ root for g in gs))


def random_tuple_field(rng: np.random.Generator, d: int, m: int, cube: CubeDomain,
                       policy: TolerancePolicy = DEFAULT_POLICY) -> TupleField:
    return TupleField.build([random_commuting_tuple(rng, d, cube, degenerate=rng.random() < 0.2, policy=policy)
                             for _ in range(m)], cube, policy)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    g = rng.standard_normal((n, rank or n))
    return g @ g.T
