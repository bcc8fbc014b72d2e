"""Grid LP oracle: best separable approximation on a finite tensor grid.

On a grid ``A x B x C`` the problem

    minimize t  s.t.  -t <= f(a,b,c) - phi_a - psi_b - omega_c <= t

is a linear program with few variables and many constraints. It is solved
by constraint generation: a restricted LP over a working set of constraints
is solved, the full grid is scanned for the most violated constraints, those
are added, and the loop repeats until nothing is violated. The optimal dual
multipliers form a weak projection cycle certifying the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .cycles import WeightedPointSet, golomb_ratio
from .function_model import FunctionSource, Point3

__all__ = [
    "GridTooLarge",
    "SolverError",
    "GridSpec",
    "LpSolution",
    "uniform_grid",
    "grid_error",
    "extract_dual_cycle",
    "refine_and_bound",
]

MAX_GRID_POINTS = 10**6


class GridTooLarge(ValueError):
    pass


class SolverError(RuntimeError):
    pass


def _axis(name: str, values: Sequence[float]) -> tuple[float, ...]:
    vals = tuple(float(v) for v in values)
    if len(vals) < 2:
        raise ValueError(f"axis {name} needs at least two nodes")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"axis {name} must be strictly increasing")
    if vals[0] != 0.0 or vals[-1] != 1.0:
        raise ValueError(f"axis {name} must contain 0 and 1 as its end nodes")
    return vals


@dataclass(frozen=True)
class GridSpec:
    A: tuple[float, ...]
    B: tuple[float, ...]
    C: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", _axis("A", self.A))
        object.__setattr__(self, "B", _axis("B", self.B))
        object.__setattr__(self, "C", _axis("C", self.C))

    @property
    def shape(self) -> tuple[int, int, int]:
        return len(self.A), len(self.B), len(self.C)

    @property
    def size(self) -> int:
        a, b, c = self.shape
        return a * b * c

    def contains(self, other: "GridSpec") -> bool:
        return set(other.A) <= set(self.A) and set(other.B) <= set(self.B) and set(other.C) <= set(self.C)

    def to_json(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "C": list(self.C)}


def uniform_grid(nx: int, ny: int | None = None, nz: int | None = None) -> GridSpec:
    ny = nx if ny is None else ny
    nz = nx if nz is None else nz
    return GridSpec(*(tuple(np.linspace(0.0, 1.0, n)) for n in (nx, ny, nz)))


@dataclass(frozen=True)
class LpSolution:
    grid: GridSpec
    t: float
    phi: np.ndarray
    psi: np.ndarray
    omega: np.ndarray
    dual_points: tuple[Point3, ...] = field(repr=False)
    dual_weights: tuple[float, ...] = field(repr=False)
    iterations: int = 0
    active_constraints: int = 0
    residual: float = 0.0

    def to_json(self, with_dual: bool = True) -> dict:
        doc = {
            "t": self.t,
            "grid": self.grid.to_json(),
            "phi": {repr(a): float(v) for a, v in zip(self.grid.A, self.phi)},
            "psi": {repr(b): float(v) for b, v in zip(self.grid.B, self.psi)},
            "omega": {repr(c): float(v) for c, v in zip(self.grid.C, self.omega)},
            "iterations": self.iterations,
            "active_constraints": self.active_constraints,
            "residual": self.residual,
        }
        if with_dual:
            cyc = extract_dual_cycle(self)
            doc["dual_cycle"] = {
                "points": [list(p) for p in cyc.points],
                "weights": [float(w) for w in cyc.weights],
            }
        return doc


def _sample(f: FunctionSource, grid: GridSpec) -> np.ndarray:
    X, Y, Z = np.meshgrid(np.array(grid.A), np.array(grid.B), np.array(grid.C), indexing="ij")
    return np.broadcast_to(np.asarray(f(X, Y, Z), float), X.shape).copy()


def grid_error(
    f: FunctionSource,
    grid: GridSpec,
    tol: float = 1e-10,
    batch: int | None = None,
    max_rounds: int = 500,
) -> LpSolution:
    """Best uniform error of ``f`` by ``phi(x)+psi(y)+omega(z)`` on ``grid``.

    ``phi(0) = psi(0) = 0`` fixes the additive gauge. Each round adds the
    ``batch`` most violated grid constraints (deterministic order: violation,
    then flat index) until the maximum violation is at most ``tol``.
    """
    if grid.size > MAX_GRID_POINTS:
        raise GridTooLarge(f"grid has {grid.size} points; the limit is {MAX_GRID_POINTS}")
    na, nb, nc = grid.shape
    F = _sample(f, grid)
    # variables: phi_1..phi_{na-1}, psi_1..psi_{nb-1}, omega_0..omega_{nc-1}, t
    nv = (na - 1) + (nb - 1) + nc + 1
    if batch is None:
        batch = max(8, nv)

    def row(i, j, k, side):
        # side=+1: f - phi - psi - omega <= t  ->  -phi - psi - omega - t <= -f
        # side=-1: -(f - ...) <= t             ->  +phi + psi + omega - t <= f
        cols, vals = [], []
        if i > 0:
            cols.append(i - 1)
            vals.append(-side)
        if j > 0:
            cols.append(na - 1 + j - 1)
            vals.append(-side)
        cols.append(na - 1 + nb - 1 + k)
        vals.append(-side)
        cols.append(nv - 1)
        vals.append(-1.0)
        return cols, vals, -side * F[i, j, k]

    active: dict[tuple[int, int, int, int], int] = {}
    order: list[tuple[int, int, int, int]] = []
    for i in (0, na - 1):
        for j in (0, nb - 1):
            for k in (0, nc - 1):
                for s in (1, -1):
                    key = (i, j, k, s)
                    if key not in active:
                        active[key] = len(order)
                        order.append(key)

    c = np.zeros(nv)
    c[-1] = 1.0
    bounds = [(None, None)] * (nv - 1) + [(0.0, None)]
    res = None
    phi = psi = omega = None
    t = 0.0
    for it in range(1, max_rounds + 1):
        data, ri, ci, b = [], [], [], []
        for r, key in enumerate(order):
            cols, vals, rhs = row(*key)
            ri.extend([r] * len(cols))
            ci.extend(cols)
            data.extend(vals)
            b.append(rhs)
        A = csr_matrix((data, (ri, ci)), shape=(len(order), nv))
        res = linprog(
            c,
            A_ub=A,
            b_ub=np.array(b),
            bounds=bounds,
            method="highs",
            options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
        )
        if res.status != 0:
            raise SolverError(f"restricted LP failed: {res.message}")
        x = res.x
        phi = np.concatenate([[0.0], x[: na - 1]])
        psi = np.concatenate([[0.0], x[na - 1 : na - 1 + nb - 1]])
        omega = x[na - 1 + nb - 1 : nv - 1]
        t = float(x[-1])
        R = F - phi[:, None, None] - psi[None, :, None] - omega[None, None, :]
        viol = np.stack([R - t, -R - t], axis=-1).ravel()  # side +1 then -1
        worst = float(viol.max())
        if worst <= tol:
            break
        cand = np.flatnonzero(viol > tol)
        cand = cand[np.lexsort((cand, -viol[cand]))]
        added = 0
        for flat in cand:
            i, j, k, s = np.unravel_index(int(flat), (na, nb, nc, 2))
            key = (int(i), int(j), int(k), 1 if s == 0 else -1)
            if key in active:
                continue
            active[key] = len(order)
            order.append(key)
            added += 1
            if added >= batch:
                break
        if added == 0:
            raise SolverError("violated constraints are already active; the restricted LP is inconsistent")
    else:
        raise SolverError(f"no convergence after {max_rounds} rounds")

    # multipliers of '<=' rows are <= 0 in HiGHS' sign convention
    mult = -np.asarray(res.ineqlin.marginals)
    pts, ws = [], []
    for (i, j, k, s), m in zip(order, mult):
        if m > 1e-13:
            pts.append(Point3(grid.A[i], grid.B[j], grid.C[k]))
            ws.append(s * float(m))
    merged: dict[Point3, float] = {}
    for p, w in zip(pts, ws):
        merged[p] = merged.get(p, 0.0) + w
    mass = sum(abs(w) for w in merged.values())
    if mass > 0:
        merged = {p: w / mass for p, w in merged.items()}
    R = F - phi[:, None, None] - psi[None, :, None] - omega[None, None, :]
    return LpSolution(
        grid=grid,
        t=t,
        phi=phi,
        psi=psi,
        omega=omega,
        dual_points=tuple(merged),
        dual_weights=tuple(merged.values()),
        iterations=it,
        active_constraints=len(order),
        residual=float(np.abs(R).max()),
    )


def extract_dual_cycle(sol: LpSolution, drop: float = 1e-12) -> WeightedPointSet:
    """Signed optimal multipliers as a weak projection cycle with total mass 1.

    Empty when the grid error is zero (a separable function has no
    certificate).
    """
    if sol.t <= 1e-12:
        return WeightedPointSet((), ())
    keep = [(p, w) for p, w in zip(sol.dual_points, sol.dual_weights) if abs(w) > drop]
    mass = sum(abs(w) for _, w in keep)
    return WeightedPointSet(tuple(p for p, _ in keep), tuple(w / mass for _, w in keep))


def refine_and_bound(f: FunctionSource, grids: Sequence[GridSpec]) -> list[float]:
    """Grid errors along a nested grid sequence; each is a lower bound of the cube error."""
    for g0, g1 in zip(grids, grids[1:]):
        if not g1.contains(g0):
            raise ValueError("grid sequence must be nested")
    return [grid_error(f, g).t for g in grids]


def dual_ratio(sol: LpSolution, f: FunctionSource) -> float:
    cyc = extract_dual_cycle(sol)
    return golomb_ratio(cyc, f) if len(cyc) else 0.0
