"""
Jensen's inequality for conditional expectations
================================================

For convex f, compressing a field of commuting tuples and then applying
f is dominated atom by atom by compressing f of the tuples.
"""

import numpy as np

from opjensen.convexfn import catalog
from opjensen.jensen import JensenInstance, check_conditional
from opjensen.jointspec import CubeDomain
from opjensen.sampling import random_context, random_tuple_field, random_unital_field

rng = np.random.default_rng(2)
d, n, m = 5, 2, 3

f = catalog("log_sum_exp", {}, n)
dom = CubeDomain.uniform(-2, 2, n)
ctx = random_context(rng, d, 3)
field = random_unital_field(rng, d, m)          # sum_t nu_t a_t* a_t = 1
tfield = random_tuple_field(rng, d, m, dom)     # one commuting pair per t

report = check_conditional(JensenInstance(ctx, field, tfield, f, dom))
for a in report.atoms:
    print(f"atom {a.s}: f(Phi(y)) = {a.lhs:.6f} <= Phi(sum nu a* f(x) a) = {a.rhs:.6f}  margin {a.margin:.2e}")
print("verdict:", "pass" if report.passed else "fail")

# each atom carries a probability measure on the joint eigenvalues whose
# barycentre is the lhs point and whose f-integral is the rhs
for s, mu in report.measures.items():
    print(f"mu_{s}: total {mu.weights.sum():.12f}, min weight {mu.weights.min():.2e}, "
          f"f(mean) {f(*mu.mean):.6f}, integral {mu.integrate(f, dom):.6f}")
