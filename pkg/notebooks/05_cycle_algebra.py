"""
Projection cycles by hand
=========================

A weighted point set is a cycle when the weights on every axis plane sum to
zero. Cycles add pointwise, and the ratio sum(w f)/sum|w| is a lower bound
for the approximation error of f.
"""

from fractions import Fraction

from seplinf import CycleVector, builtin, golomb_ratio, is_minimal, structure_violations
from seplinf.cycles import add_cycle_vectors, lattice_inequality_gap

a = CycleVector(((0, 0, 0), (1, 1, 1), (0, 0, 1), (1, 1, 0)), (1, 1, -1, -1))
b = CycleVector(((0, 0, 0), (1, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 0)), (1, 2, -1, -1, -1))
print("a minimal:", is_minimal(a), " b minimal:", is_minimal(b))
print("xz  ratio on a:", golomb_ratio(a, builtin("product_xz")))
print("xyz ratio on b:", golomb_ratio(b, builtin("product_xyz")))

s = add_cycle_vectors(a, b.scaled(Fraction(1, 2)))
print("a + b/2:", [(tuple(p), str(w)) for p, w in s])
print("structure checks on a:", structure_violations(a) or "ok")

# the lattice inequality: f(p^q) + f(pvq) >= f(p) + f(q), equality iff comparable
f = builtin("bilinear_sum")
print(lattice_inequality_gap(f, (0.2, 0.8, 0.5), (0.6, 0.3, 0.5)))
print(lattice_inequality_gap(f, (0.2, 0.3, 0.5), (0.6, 0.8, 0.9)))
