"""
Conditional expectation onto a finite partition
===============================================

A density matrix commuting with a partition of unity induces a measure on
the atoms and a conditional expectation onto the diagonal algebra they
span.
"""

import numpy as np

from opjensen.expectation import (
    PartitionOfUnity,
    build_context,
    cond_expect,
    functional_apply,
    module_property_check,
    vector_state_subalgebra,
)
from opjensen.sampling import random_unitary

rng = np.random.default_rng(1)

# three projections of ranks 1, 2, 3 in a random basis of C^6
u = random_unitary(rng, 6)
part = PartitionOfUnity.from_basis(u, [1, 2, 3])

# the density is block diagonal in the same basis, with nothing on the last block
blocks = np.diag([0.5, 0.2, 0.3, 0.0, 0.0, 0.0])
rho = u @ blocks @ u.conj().T
ctx = build_context(part, rho)
print("atom weights:", np.round(ctx.measure.weights, 6), "supported:", ctx.support)

x = rng.standard_normal((6, 6))
phi = cond_expect(ctx, x)
print("Phi(x) on supported atoms:", np.round(phi.supported, 6))

# the defining identity: sum_j z_j Phi(x)(j) mu(j) = tr(rho z x)
z = np.array([1.0, -2.0, 5.0])
lhs = np.sum((z * phi.values * ctx.measure.weights)[ctx.support])
print("adjointness gap:", abs(lhs - functional_apply(ctx, part.element(z) @ x)))
print("bimodule gap:", module_property_check(ctx, x, z))

# a unit vector gives the two-atom algebra spanned by its projection
xi = np.array([1, 1, 0]) / np.sqrt(2)
vctx = vector_state_subalgebra(xi)
sx = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 2]])
print("atom 0 reproduces <sx xi, xi>:", cond_expect(vctx, sx)[0], np.vdot(xi, sx @ xi))
