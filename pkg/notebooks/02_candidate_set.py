"""
Auxiliary maximizers and the candidate set
==========================================

Fourteen auxiliary functions (eight on the cube, six on faces) are maximized.
Their maximizers, together with the eight corners, form the candidate set U;
only the coordinates of U matter for the error.
"""

from seplinf import AUXILIARY, build_candidate_set, builtin, evaluate_catalog

f = builtin("remark41_piecewise")
U = build_candidate_set(f)

for aid in AUXILIARY:
    p = U.point(("M" if aid[0] == "g" else "F") + aid[1:])
    print(f"{aid}: max {U.values[aid]: .6f} at {tuple(round(float(v), 6) for v in p)}")

print("U_x =", U.Ux)
print("U_y =", U.Uy)
print("U_z =", U.Uz)

# the five best catalog entries on this U
ev = evaluate_catalog(f, U)
for row in ev.table()[:5]:
    print(f"entry {row['id']:5s} ratio {row['ratio']:.10f}  ({len(row['points'])} points)")
