"""
Expectation values, a single tuple, and direct sums
===================================================

Specializations of the conditional inequality to a vector state.
"""

import numpy as np

from opjensen.jensen import check_direct_sum, check_expectation_values, check_mond_pecaric
from opjensen.fields import TupleField, trivial_field
from opjensen.jointspec import CubeDomain

dom = CubeDomain(((-2, 2),))
x = np.diag([-1.0, 0.0])
xi = np.array([1.0, 1.0]) / np.sqrt(2)

# one tuple, convex f: f(<x xi, xi>) <= <f(x) xi, xi>
r = check_mond_pecaric([x], xi, "x1^2", dom)
print(f"x1^2: lhs {r.lhs[0]:.4f} rhs {r.rhs[0]:.4f} passed {r.passed}")

# the cube is not convex on [-2, 2] and this vector exposes it
r = check_mond_pecaric([x], xi, "x1^3", dom)
print(f"x1^3: lhs {r.lhs[0]:.4f} rhs {r.rhs[0]:.4f} margin {r.min_margin:.4f} passed {r.passed}")

# the same check through a trivial one-element field gives identical numbers
r2 = check_expectation_values(trivial_field([1.0], 2), TupleField.build([[x]], dom), "x1^2", dom, xi)
print("through the field:", r2.lhs[0], r2.rhs[0])

# direct sum form with two blocks and vectors of norm 1/sqrt2 each
e1 = np.array([1.0, 0.0]) / np.sqrt(2)
r = check_direct_sum([[np.diag([0.0, 2.0])], [np.diag([1.0, 1.0])]], [e1, e1], "x1^2", dom)
print(f"direct sum: lhs {r.lhs[0]:.4f} rhs {r.rhs[0]:.4f} route deviation {r.extra['route_deviation']:.1e}")
