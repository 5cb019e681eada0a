"""
Functions of commuting Hermitian matrices
=========================================

Two commuting matrices share an eigenbasis, so a function of two real
variables can be applied to the pair through their joint spectrum.
"""

import numpy as np

from opjensen.convexfn import parse
from opjensen.jointspec import CubeDomain, apply_function, joint_diagonalize, validate_abelian
from opjensen.sampling import random_unitary

rng = np.random.default_rng(0)

# build a commuting pair from one shared unitary; x1 has a repeated eigenvalue
u = random_unitary(rng, 4)
x1 = (u * np.array([1.0, 1.0, -0.5, 2.0])) @ u.conj().T
x2 = (u * np.array([0.3, -1.0, 0.7, 0.0])) @ u.conj().T
t = validate_abelian([x1, x2])

# rows of the table are the joint eigenvalues (lambda_1, lambda_2)
sp = joint_diagonalize(t)
print("joint spectrum:\n", np.round(sp.table, 6))
print("residual:", sp.residual)

# a polynomial computed through the spectrum matches the matrix product
dom = CubeDomain.uniform(-2, 2, 2)
f = parse("x1^2 * x2 - x2", 2)
direct = x1 @ x1 @ x2 - x2
print("polynomial error:", np.linalg.norm(apply_function(f, t, dom) - direct))

# non-polynomial functions work the same way
g = parse("log(exp(x1) + exp(x2))", 2)
print("log-sum-exp of the pair has eigenvalues", np.round(np.linalg.eigvalsh(apply_function(g, t, dom)), 6))
