from itertools import combinations

import numpy as np
import pytest
from scipy.optimize import linprog

from seplinf.cycles import golomb_ratio, nonzero_plane_sums
from seplinf.function_model import GridFunction, builtin
from seplinf.lp_oracle import (
    GridSpec,
    GridTooLarge,
    extract_dual_cycle,
    grid_error,
    refine_and_bound,
    uniform_grid,
)

CORNERS = [(x, y, z) for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]


def _brute_force_8(f):
    # best ratio over all minimal cycles on the 8 corners, by subset enumeration
    best = 0.0
    vals = [float(f(*p)) for p in CORNERS]
    for k in range(2, 9):
        for sub in combinations(range(8), k):
            A = np.array([[1.0 if CORNERS[i][a] == v else 0.0 for i in sub] for a in range(3) for v in (0.0, 1.0)])
            _, s, vt = np.linalg.svd(A)
            if k - int(np.sum(s > 1e-9)) != 1:
                continue
            lam = vt[-1]
            if np.any(np.abs(lam) < 1e-9):
                continue
            r = abs(sum(l * vals[i] for l, i in zip(lam, sub))) / np.sum(np.abs(lam))
            best = max(best, r)
    return best


def _dense_lp(f, grid):
    # every constraint at once; variables phi, psi, omega (unpinned) and t
    A, B, C = map(np.array, (grid.A, grid.B, grid.C))
    na, nb, nc = len(A), len(B), len(C)
    nv = na + nb + nc + 1
    rows, rhs = [], []
    for i in range(na):
        for j in range(nb):
            for k in range(nc):
                v = float(f(A[i], B[j], C[k]))
                r = np.zeros(nv)
                r[i] = r[na + j] = r[na + nb + k] = 1.0
                r[-1] = -1.0
                rows.append(r.copy()); rhs.append(v)
                r[:-1] *= -1
                rows.append(r); rhs.append(-v)
    c = np.zeros(nv); c[-1] = 1
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=[(None, None)] * (nv - 1) + [(0, None)], method="highs-ipm")
    return res.fun


def test_product_xz_on_corners():
    assert grid_error(builtin("product_xz"), uniform_grid(2)).t == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_corner_grid_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    g = GridFunction([0, 1], [0, 1], [0, 1], rng.normal(size=8))
    assert grid_error(g, uniform_grid(2)).t == pytest.approx(_brute_force_8(g), abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_constraint_generation_matches_dense_lp(seed):
    rng = np.random.default_rng(seed)
    shape = tuple(int(n) for n in rng.integers(2, 6, size=3))
    axes = [np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, n - 2)), [1.0]]) for n in shape]
    grid = GridSpec(*axes)
    f = GridFunction(*[np.linspace(0, 1, 4)] * 3, rng.normal(size=64))
    sol = grid_error(f, grid)
    assert sol.t == pytest.approx(_dense_lp(f, grid), abs=1e-8)
    assert sol.residual == pytest.approx(sol.t, abs=1e-9)


@pytest.mark.parametrize("name", ["product_xyz", "remark41_piecewise", "bilinear_sum"])
def test_dual_cycle_certifies_optimum(name):
    f = builtin(name)
    sol = grid_error(f, uniform_grid(5))
    cyc = extract_dual_cycle(sol)
    assert sum(abs(w) for w in cyc.weights) == pytest.approx(1.0)
    assert not nonzero_plane_sums(cyc, tol=1e-8)
    assert golomb_ratio(cyc, f) == pytest.approx(sol.t, abs=1e-8)


def test_separable_has_zero_error_and_empty_certificate():
    f = builtin("separable", u=1.3, v=-0.4, w=2.0)
    sol = grid_error(f, uniform_grid(5, 4, 3))
    assert sol.t == pytest.approx(0.0, abs=1e-9)
    assert len(extract_dual_cycle(sol)) == 0


def test_nested_grids_nondecreasing():
    f = builtin("remark41_piecewise")
    ts = refine_and_bound(f, [uniform_grid(n) for n in (2, 3, 5, 9)])
    assert all(b >= a - 1e-10 for a, b in zip(ts, ts[1:]))
    with pytest.raises(ValueError):
        refine_and_bound(f, [uniform_grid(3), uniform_grid(4)])


def test_guard_and_grid_validation():
    with pytest.raises(GridTooLarge):
        grid_error(builtin("zero"), uniform_grid(101))
    with pytest.raises(ValueError):
        GridSpec((0.0, 0.5), (0.0, 1.0), (0.0, 1.0))
    with pytest.raises(ValueError):
        GridSpec((0.0, 0.6, 0.5, 1.0), (0.0, 1.0), (0.0, 1.0))


def test_solution_json():
    doc = grid_error(builtin("product_xz"), uniform_grid(3)).to_json()
    assert set(doc) >= {"t", "phi", "psi", "omega", "dual_cycle", "grid"}
    assert doc["t"] == pytest.approx(0.25)
