"""
Closed-form error on a few test functions
=========================================

The error of the best approximation of f(x,y,z) by phi(x)+psi(y)+omega(z)
in the sup norm is computed two ways: by the finite formula (candidate set
plus catalog) and by a grid LP on the candidate coordinates.
"""

from seplinf import approximation_error, builtin, candidate_grid, grid_error

# products of two or three coordinates, and a sum of products
for name in ("product_xz", "product_xy", "product_xyz", "bilinear_sum"):
    f = builtin(name)
    res = approximation_error(f)
    lp = grid_error(f, candidate_grid(res.candidates))
    print(f"{name:14s} E = {res.value:.12f}  entry {res.best_id:5s}  LP on U = {lp.t:.12f}")

# the affine wrapper a*f + b*x + c*y + d*z + e: adding separable terms changes
# nothing, scaling by a scales the error
f = builtin("product_xz", a=3.0, b=-2.0, d=5.0, e=1.0)
print("3*xz + separable ->", approximation_error(f).value)
