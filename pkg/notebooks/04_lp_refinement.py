"""
Grid LP lower bounds and dual certificates
==========================================

On any finite grid the best separable approximation is an LP. Its value is a
lower bound for the error on the cube and grows along nested grids. The
optimal dual multipliers are a weak cycle whose ratio equals the LP value.
"""

from seplinf import approximation_error, builtin, extract_dual_cycle, golomb_ratio, grid_error, refine_and_bound, uniform_grid

f = builtin("remark41_piecewise")
grids = [uniform_grid(n) for n in (2, 3, 5, 9, 17)]
for g, t in zip(grids, refine_and_bound(f, grids)):
    print(f"{g.shape[0]:3d}^3 grid: t* = {t:.10f}")
print("formula:      E  =", approximation_error(f).value)

sol = grid_error(f, uniform_grid(9))
cyc = extract_dual_cycle(sol)
print(f"dual cycle on 9^3: {len(cyc)} points, ratio {golomb_ratio(cyc, f):.10f}")
for p, w in cyc:
    print("  ", tuple(round(v, 4) for v in p), round(w, 6))
