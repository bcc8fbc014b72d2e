"""Projection cycles: weighted point sets whose plane sums vanish.

Weights are kept as exact :class:`~fractions.Fraction` values wherever the
cycle comes from combinatorics (catalog entries, circuit enumeration), so the
plane-sum invariant can be checked with ``==``. Function values stay floating
point. Weight sets produced by the LP oracle carry floats; every routine here
accepts either.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exact import nullspace, primitive_integer_vector, rank
from .function_model import FunctionSource, Point3, as_point

__all__ = [
    "AXES",
    "InvalidCycleError",
    "EnumerationTooLarge",
    "WeightedPointSet",
    "CycleVector",
    "ConstraintMatrix",
    "plane_sums",
    "nonzero_plane_sums",
    "is_weak_cycle",
    "add_cycle_vectors",
    "golomb_ratio",
    "build_constraint_matrix",
    "matrix_circuits",
    "enumerate_minimal_cycles",
    "is_minimal",
    "well_ordered",
    "lattice_inequality_gap",
    "on_cube_edge",
    "on_free_edge",
    "structure_violations",
    "merge_weighted",
    "cycle_to_json",
    "cycle_from_json",
    "load_cycle",
]

AXES = ("x", "y", "z")
T1 = Point3(0.0, 0.0, 0.0)
T8 = Point3(1.0, 1.0, 1.0)


class InvalidCycleError(ValueError):
    """Plane sums of a would-be cycle do not vanish."""

    def __init__(self, message: str, sums: dict | None = None):
        super().__init__(message)
        self.sums = sums or {}


class EnumerationTooLarge(ValueError):
    pass


def _as_weight(w):
    if isinstance(w, (int, Fraction)):
        return Fraction(w)
    if isinstance(w, float):
        return w
    if isinstance(w, Number):
        return float(w)
    raise TypeError(f"weight {w!r} is not a number")


@dataclass(frozen=True)
class WeightedPointSet:
    """Distinct points of the unit cube with one weight each (zeros allowed)."""

    points: tuple[Point3, ...]
    weights: tuple

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        ws = tuple(_as_weight(w) for w in self.weights)
        if len(pts) != len(ws):
            raise ValueError(f"{len(pts)} points but {len(ws)} weights")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[tuple[Point3, object]]:
        return iter(zip(self.points, self.weights))

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    def mass(self):
        """Total absolute weight."""
        return sum((abs(w) for w in self.weights), Fraction(0) if self.exact else 0.0)

    def weight_at(self, p: Sequence[float]):
        p = as_point(p)
        for q, w in self:
            if q == p:
                return w
        return 0

    def strip_zeros(self, tol: float = 0.0) -> "WeightedPointSet":
        keep = [(p, w) for p, w in self if abs(w) > tol]
        return WeightedPointSet(tuple(p for p, _ in keep), tuple(w for _, w in keep))

    def scaled(self, k) -> "WeightedPointSet":
        return WeightedPointSet(self.points, tuple(k * w for w in self.weights))

    def __neg__(self):
        return type(self)(self.points, tuple(-w for w in self.weights))


@dataclass(frozen=True)
class CycleVector(WeightedPointSet):
    """A projection cycle-vector: exact nonzero weights with zero plane sums."""

    def __post_init__(self):
        super().__post_init__()
        ws = tuple(w if isinstance(w, Fraction) else Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not ws:
            raise InvalidCycleError("a cycle needs at least one point")
        if any(w == 0 for w in ws):
            raise InvalidCycleError("cycle weights must be nonzero")
        bad = nonzero_plane_sums(self)
        if bad:
            raise InvalidCycleError(_describe_sums(bad), bad)

    @classmethod
    def from_set(cls, s: WeightedPointSet) -> "CycleVector":
        s = s.strip_zeros()
        return cls(s.points, s.weights)


def _describe_sums(bad: dict) -> str:
    parts = [f"{axis}={coord!r}: {total}" for (axis, coord), total in sorted(bad.items())]
    return "nonzero plane sums: " + "; ".join(parts)


def plane_sums(s: WeightedPointSet) -> dict[tuple[str, float], object]:
    """Sum of weights on every axis-parallel plane that meets the point set."""
    out: dict[tuple[str, float], object] = {}
    for p, w in s:
        for axis, coord in zip(AXES, p):
            key = (axis, coord)
            out[key] = out.get(key, 0) + w
    return out


def nonzero_plane_sums(s: WeightedPointSet, tol: float = 0.0) -> dict:
    return {k: v for k, v in plane_sums(s).items() if abs(v) > tol}


def is_weak_cycle(s: WeightedPointSet, tol: float = 0.0) -> bool:
    """All plane sums vanish and at least one weight is nonzero."""
    return any(abs(w) > tol for w in s.weights) and not nonzero_plane_sums(s, tol)


def add_cycle_vectors(a: WeightedPointSet, b: WeightedPointSet) -> WeightedPointSet:
    """Pointwise sum of two weighted sets on the union of their supports.

    Points whose weights cancel are kept with weight zero.
    """
    order = list(a.points)
    acc = dict(zip(a.points, a.weights))
    for p, w in b:
        if p in acc:
            acc[p] = acc[p] + w
        else:
            order.append(p)
            acc[p] = w
    return WeightedPointSet(tuple(order), tuple(acc[p] for p in order))


def golomb_ratio(c: WeightedPointSet, f: FunctionSource) -> float:
    """``sum(w_i f(p_i)) / sum(|w_i|)`` with f in floating point."""
    if len(c) == 0:
        raise ValueError("empty cycle")
    pts = np.array(c.points, dtype=float)
    vals = np.broadcast_to(np.asarray(f(pts[:, 0], pts[:, 1], pts[:, 2]), float), (len(c),))
    w = np.array([float(v) for v in c.weights])
    return float(np.dot(w, vals) / np.sum(np.abs(w)))


# --------------------------------------------------------------------------
# constraint matrix and circuits
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintMatrix:
    """Plane-incidence matrix: one row per (axis, coordinate), one column per point."""

    rows: tuple[tuple[str, float], ...]
    columns: tuple[Point3, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.shape)

    def submatrix(self, cols: Sequence[int]) -> list[list[int]]:
        return [[row[c] for c in cols] for row in self.entries]

    def kernel(self) -> list[list[Fraction]]:
        return nullspace([list(r) for r in self.entries], n_cols=len(self.columns))


def build_constraint_matrix(points: Sequence[Sequence[float]]) -> ConstraintMatrix:
    pts = tuple(as_point(p) for p in points)
    if len(set(pts)) != len(pts):
        raise ValueError("points must be pairwise distinct")
    rows = tuple((axis, v) for k, axis in enumerate(AXES) for v in sorted({p[k] for p in pts}))
    entries = tuple(tuple(int(p[AXES.index(axis)] == v) for p in pts) for axis, v in rows)
    return ConstraintMatrix(rows, pts, entries)


def _kernel_if_circuit(sub: list[list[int]], k: int) -> list[int] | None:
    if rank(sub) != k - 1:
        return None
    (vec,) = nullspace(sub, n_cols=k)
    if any(v == 0 for v in vec):
        return None
    return primitive_integer_vector(vec)


def matrix_circuits(
    matrix: Sequence[Sequence[int]],
    max_size: int,
    must_contain: Sequence[int] = (),
) -> Iterator[tuple[tuple[int, ...], list[int]]]:
    """Yield every circuit (minimal dependent column set) up to ``max_size``.

    A column subset is a circuit iff its rank is one less than its size and
    the single kernel vector has no zero entry. Yields ``(columns, weights)``
    with coprime integer weights; the sign is left as the kernel returns it.
    """
    rows = [list(r) for r in matrix]
    n = len(rows[0])
    fixed = tuple(sorted(set(must_contain)))
    rest = [c for c in range(n) if c not in fixed]
    for size in range(max(len(fixed), 1), max_size + 1):
        for extra in itertools.combinations(rest, size - len(fixed)):
            cols = tuple(sorted(fixed + extra))
            sub = [[r[c] for c in cols] for r in rows]
            sub = [r for r in sub if any(r)]
            if not sub:
                continue
            vec = _kernel_if_circuit(sub, len(cols))
            if vec is not None:
                yield cols, vec


def enumerate_minimal_cycles(points: Sequence[Sequence[float]], max_support: int) -> list[CycleVector]:
    """All minimal projection cycles supported on at most ``max_support`` points.

    Weights are coprime integers; the lexicographically smallest support
    point carries a positive weight. Results are sorted by support size and
    then by the sorted support.
    """
    pts = tuple(as_point(p) for p in points)
    max_support = min(max_support, len(pts))
    if math.comb(len(pts), max_support) > 10**7:
        raise EnumerationTooLarge(f"C({len(pts)}, {max_support}) subsets exceed the 1e7 guard")
    cm = build_constraint_matrix(pts)
    out = []
    for cols, vec in matrix_circuits(cm.entries, max_support):
        support = [pts[c] for c in cols]
        first = min(range(len(cols)), key=lambda i: support[i])
        if vec[first] < 0:
            vec = [-v for v in vec]
        order = sorted(range(len(cols)), key=lambda i: support[i])
        out.append(CycleVector(tuple(support[i] for i in order), tuple(Fraction(vec[i]) for i in order)))
    out.sort(key=lambda c: (len(c), c.points))
    return out


def is_minimal(c: WeightedPointSet) -> bool:
    """True iff ``c`` is a projection cycle with no proper sub-cycle.

    Equivalent to: all weights nonzero, plane sums vanish, and the constraint
    matrix on the support has a one-dimensional kernel.
    """
    if len(c) == 0 or any(w == 0 for w in c.weights) or nonzero_plane_sums(c):
        return False
    cm = build_constraint_matrix(c.points)
    return len(c) - rank([list(r) for r in cm.entries]) == 1


# --------------------------------------------------------------------------
# order structure
# --------------------------------------------------------------------------


def well_ordered(p: Sequence[float], q: Sequence[float]) -> bool:
    """Componentwise comparable: ``p <= q`` or ``q <= p``."""
    return all(a <= b for a, b in zip(p, q)) or all(a >= b for a, b in zip(p, q))


def lattice_inequality_gap(f: FunctionSource, p: Sequence[float], q: Sequence[float]) -> float:
    """``f(p ^ q) + f(p v q) - f(p) - f(q)`` with componentwise min/max."""
    p, q = as_point(p), as_point(q)
    lo = tuple(min(a, b) for a, b in zip(p, q))
    hi = tuple(max(a, b) for a, b in zip(p, q))
    xs = np.array([lo[0], hi[0], p[0], q[0]])
    ys = np.array([lo[1], hi[1], p[1], q[1]])
    zs = np.array([lo[2], hi[2], p[2], q[2]])
    v = np.asarray(f(xs, ys, zs), float)
    return float(v[0] + v[1] - v[2] - v[3])


def on_cube_edge(p: Sequence[float]) -> bool:
    return sum(v in (0.0, 1.0) for v in p) >= 2


def on_free_edge(p: Sequence[float]) -> bool:
    """On one of the six edges touching neither (0,0,0) nor (1,1,1)."""
    return any({p[i], p[j]} == {0.0, 1.0} for i, j in ((0, 1), (0, 2), (1, 2)))


def structure_violations(c: WeightedPointSet) -> list[str]:
    """Structural necessary conditions for an optimal cycle; empty if all hold.

    (a) positive points are pairwise well-ordered; (b) a well-ordered pair on
    a common interior plane is positive on both points; (c) negative points
    lie on the six free edges; (d) edge points other than the two diagonal
    corners are negative; (e) both diagonal corners are present and positive.
    """
    out = []
    pos = [p for p, w in c if w > 0]
    for p, q in itertools.combinations(pos, 2):
        if not well_ordered(p, q):
            out.append(f"(a) positive points {tuple(p)} and {tuple(q)} are not well-ordered")
    items = list(c)
    for (p, wp), (q, wq) in itertools.combinations(items, 2):
        shared = [k for k in range(3) if p[k] == q[k] and 0.0 < p[k] < 1.0]
        if shared and well_ordered(p, q) and not (wp > 0 and wq > 0):
            out.append(f"(b) well-ordered {tuple(p)}, {tuple(q)} share an interior plane but are not both positive")
    for p, w in items:
        if w < 0 and not on_free_edge(p):
            out.append(f"(c) negative point {tuple(p)} is not on a free edge")
        if p not in (T1, T8) and on_cube_edge(p) and not w < 0:
            out.append(f"(d) edge point {tuple(p)} has nonnegative weight")
    for corner in (T1, T8):
        if not c.weight_at(corner) > 0:
            out.append(f"(e) corner {tuple(corner)} is missing or not positive")
    return out


# --------------------------------------------------------------------------
# merging
# --------------------------------------------------------------------------


def _snap_axis(values: Iterable[float], tol: float) -> dict[float, float]:
    """Map each value to a cluster representative (0 and 1 take priority)."""
    mapping: dict[float, float] = {}
    vals = sorted(set(values) | {0.0, 1.0})
    clusters: list[list[float]] = []
    for v in vals:
        if clusters and v - clusters[-1][-1] <= tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    for cl in clusters:
        rep = 0.0 if 0.0 in cl else 1.0 if 1.0 in cl else cl[0]
        for v in cl:
            mapping[v] = rep
    return mapping


def merge_weighted(points: Sequence[Sequence[float]], weights: Sequence, tol: float = 1e-9) -> WeightedPointSet:
    """Snap near-equal coordinates together, merge coincident points, drop zeros."""
    pts = [tuple(float(v) for v in p) for p in points]
    maps = [_snap_axis((p[k] for p in pts), tol) for k in range(3)]
    acc: dict[Point3, object] = {}
    order: list[Point3] = []
    for p, w in zip(pts, weights):
        q = Point3(*(maps[k][p[k]] for k in range(3)))
        if q in acc:
            acc[q] = acc[q] + w
        else:
            acc[q] = w
            order.append(q)
    keep = [q for q in order if acc[q] != 0]
    return WeightedPointSet(tuple(keep), tuple(acc[q] for q in keep))


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def _weight_json(w) -> dict:
    if isinstance(w, Fraction):
        return {"num": w.numerator, "den": w.denominator}
    fr = Fraction(w)
    return {"num": fr.numerator, "den": fr.denominator}


def cycle_to_json(c: WeightedPointSet) -> dict:
    return {"points": [list(p) for p in c.points], "weights": [_weight_json(w) for w in c.weights]}


def cycle_from_json(doc: dict) -> WeightedPointSet:
    """Parse and validate a cycle document.

    Returns a :class:`CycleVector` when every weight is nonzero, otherwise a
    weak cycle as a :class:`WeightedPointSet`. Raises
    :class:`InvalidCycleError` listing the offending planes when the plane
    sums do not vanish.
    """
    try:
        pts = [tuple(float(v) for v in p) for p in doc["points"]]
        ws = [Fraction(int(w["num"]), int(w["den"])) for w in doc["weights"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed cycle document: {exc}") from exc
    s = WeightedPointSet(tuple(pts), tuple(ws))
    if not any(ws):
        raise InvalidCycleError("all weights are zero")
    bad = nonzero_plane_sums(s)
    if bad:
        raise InvalidCycleError(_describe_sums(bad), bad)
    if all(ws):
        return CycleVector(s.points, s.weights)
    return s


def load_cycle(path: str | Path) -> WeightedPointSet:
    return cycle_from_json(json.loads(Path(path).read_text()))
