"""The finite candidate set: cube corners plus maximizers of auxiliary functions.

Each auxiliary function subtracts from ``f`` its values at two or three
points obtained by pinning coordinates of the argument to 0 or 1. The same
pinning templates describe where a positive cycle point sends its negative
counterweights on the free edges, so both the auxiliary functions and the
edge projections are generated from the single table ``AUXILIARY``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cycles import _snap_axis
from .function_model import DomainError, FunctionSource, Point3, as_point

__all__ = [
    "CORNERS",
    "AUXILIARY",
    "FACES",
    "AuxiliaryFunction",
    "OptimizerConfig",
    "CandidateSet",
    "edge_projections",
    "eval_auxiliary",
    "maximize_auxiliary",
    "build_candidate_set",
    "worker_count",
]

CORNERS: dict[str, Point3] = {
    "T1": Point3(0.0, 0.0, 0.0),
    "T2": Point3(0.0, 0.0, 1.0),
    "T3": Point3(1.0, 0.0, 1.0),
    "T4": Point3(1.0, 0.0, 0.0),
    "T5": Point3(1.0, 1.0, 0.0),
    "T6": Point3(0.0, 1.0, 0.0),
    "T7": Point3(0.0, 1.0, 1.0),
    "T8": Point3(1.0, 1.0, 1.0),
}

# Pinning template: None keeps the argument's coordinate, 0/1 pins it.
_X01 = (None, 0.0, 1.0)  # (x, 0, 1)
_1Y0 = (1.0, None, 0.0)  # (1, y, 0)
_01Z = (0.0, 1.0, None)  # (0, 1, z)
_10Z = (1.0, 0.0, None)  # (1, 0, z)
_X10 = (None, 1.0, 0.0)  # (x, 1, 0)
_0Y1 = (0.0, None, 1.0)  # (0, y, 1)

# Faces of the h-functions: (axis index, pinned value).
FACES: dict[str, tuple[int, float]] = {
    "h1": (2, 0.0),
    "h2": (2, 1.0),
    "h3": (1, 0.0),
    "h4": (1, 1.0),
    "h5": (0, 0.0),
    "h6": (0, 1.0),
}


@dataclass(frozen=True)
class AuxiliaryFunction:
    id: str
    templates: tuple[tuple, ...]
    face: tuple[int, float] | None = None

    @property
    def active_axes(self) -> tuple[int, ...]:
        if self.face is None:
            return (0, 1, 2)
        return tuple(k for k in range(3) if k != self.face[0])


AUXILIARY: dict[str, AuxiliaryFunction] = {
    a.id: a
    for a in (
        AuxiliaryFunction("g1", (_X01, _1Y0, _01Z)),
        AuxiliaryFunction("g2", (_10Z, _X10, _0Y1)),
        AuxiliaryFunction("g3", (_X01, _10Z, _1Y0)),
        AuxiliaryFunction("g4", (_10Z, _1Y0, _X10)),
        AuxiliaryFunction("g5", (_1Y0, _X10, _01Z)),
        AuxiliaryFunction("g6", (_X10, _01Z, _0Y1)),
        AuxiliaryFunction("g7", (_01Z, _0Y1, _X01)),
        AuxiliaryFunction("g8", (_0Y1, _X01, _10Z)),
        AuxiliaryFunction("h1", (_0Y1, _X01), FACES["h1"]),
        AuxiliaryFunction("h2", (_1Y0, _X10), FACES["h2"]),
        AuxiliaryFunction("h3", (_01Z, _X10), FACES["h3"]),
        AuxiliaryFunction("h4", (_10Z, _X01), FACES["h4"]),
        AuxiliaryFunction("h5", (_10Z, _1Y0), FACES["h5"]),
        AuxiliaryFunction("h6", (_01Z, _0Y1), FACES["h6"]),
    )
}


def _pin(template, x, y, z):
    return tuple(c if t is None else t for t, c in zip(template, (x, y, z)))


def edge_projections(aux_id: str, p: Sequence[float]) -> tuple[Point3, ...]:
    """Free-edge points receiving the negative weight of a positive point ``p``."""
    aux = AUXILIARY[aux_id]
    return tuple(Point3(*(float(v) for v in _pin(t, *p))) for t in aux.templates)


def _aux_vectorised(aux: AuxiliaryFunction, f: FunctionSource, x, y, z):
    out = np.asarray(f(x, y, z), float)
    for t in aux.templates:
        px, py, pz = _pin(t, x, y, z)
        out = out - np.asarray(f(px, py, pz), float)
    return out


def eval_auxiliary(aux_id: str, f: FunctionSource, p: Sequence[float]) -> float:
    """Value of g_i (on the cube) or h_k (on its face) at ``p``."""
    aux = AUXILIARY[aux_id]
    q = as_point(p)
    if aux.face is not None and q[aux.face[0]] != aux.face[1]:
        raise DomainError(f"{aux_id} is defined on the face {'xyz'[aux.face[0]]}={aux.face[1]:g}, got {tuple(q)}")
    return float(_aux_vectorised(aux, f, np.float64(q.x), np.float64(q.y), np.float64(q.z)))


@dataclass(frozen=True)
class OptimizerConfig:
    scan: int = 33
    refine_tol: float = 1e-7
    tie_tol: float = 1e-10
    max_sweeps: int = 200
    merge_tol: float = 1e-9
    workers: int | None = None


def worker_count(cfg: OptimizerConfig | None = None) -> int:
    if cfg is not None and cfg.workers is not None:
        return max(1, cfg.workers)
    env = os.environ.get("SEPLINF_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fun, a: float, b: float, tol: float) -> tuple[float, float]:
    """Golden-section search for a maximum of ``fun`` on ``[a, b]``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    # endpoints matter: maxima of these functions often sit on the boundary
    cands = [(fc, c), (fd, d), (fun(a), a), (fun(b), b)]
    best = max(v for v, _ in cands)
    return min((x for v, x in cands if v == best)), best


def _lex_best(values: np.ndarray, coords: np.ndarray, tie_tol: float) -> int:
    """Index of the maximum; ties within ``tie_tol`` go to the lexicographically smallest point."""
    top = values.max()
    idx = np.flatnonzero(values >= top - tie_tol)
    order = np.lexsort(coords[idx].T[::-1])
    return int(idx[order[0]])


def maximize_auxiliary(aux_id: str, f: FunctionSource, cfg: OptimizerConfig | None = None) -> tuple[Point3, float]:
    """Approximate argmax and max of an auxiliary function.

    A dense scan (``cfg.scan`` nodes per free axis) picks a starting node;
    coordinate-wise golden-section sweeps then polish it inside the
    neighbouring grid cells. The polished point is kept only if it beats the
    best node by more than ``cfg.tie_tol``.
    """
    cfg = cfg or OptimizerConfig()
    aux = AUXILIARY[aux_id]
    axes = aux.active_axes
    g = np.linspace(0.0, 1.0, cfg.scan)
    grids = [g if k in axes else np.array([aux.face[1]]) for k in range(3)]
    X, Y, Z = np.meshgrid(*grids, indexing="ij")
    vals = np.broadcast_to(_aux_vectorised(aux, f, X, Y, Z), X.shape).ravel()
    coords = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    i = _lex_best(vals, coords, cfg.tie_tol)
    node = coords[i].copy()
    node_val = float(vals[i])

    h = 1.0 / (cfg.scan - 1)
    lo = {k: max(0.0, node[k] - h) for k in axes}
    hi = {k: min(1.0, node[k] + h) for k in axes}
    cur = node.copy()
    cur_val = node_val
    for _ in range(cfg.max_sweeps):
        moved = 0.0
        for k in axes:

            def line(t, k=k):
                q = cur.copy()
                q[k] = t
                return float(_aux_vectorised(aux, f, q[0], q[1], q[2]))

            t, v = _golden_max(line, lo[k], hi[k], cfg.refine_tol)
            if v > cur_val:
                moved = max(moved, abs(t - cur[k]))
                cur[k] = t
                cur_val = v
        if moved < cfg.refine_tol:
            break

    if cur_val > node_val + cfg.tie_tol:
        best, best_val = cur, cur_val
    else:
        best, best_val = node, node_val
    return Point3(*(float(v) for v in best)), float(best_val)


@dataclass(frozen=True)
class CandidateSet:
    """Corners, auxiliary maximizers, and the axis projections of their union."""

    M: tuple[Point3, ...]
    F: tuple[Point3, ...]
    values: dict = field(default_factory=dict)
    Ux: tuple[float, ...] = ()
    Uy: tuple[float, ...] = ()
    Uz: tuple[float, ...] = ()

    @property
    def T(self) -> tuple[Point3, ...]:
        return tuple(CORNERS[f"T{i}"] for i in range(1, 9))

    def point(self, name: str) -> Point3:
        """Look up ``T1..T8``, ``M1..M8`` or ``F1..F6`` by name."""
        kind, idx = name[0], int(name[1:])
        if kind == "T":
            return CORNERS[name]
        if kind == "M":
            return self.M[idx - 1]
        if kind == "F":
            return self.F[idx - 1]
        raise KeyError(name)

    def points(self) -> tuple[Point3, ...]:
        """Distinct members of U in the order T, M, F."""
        seen = []
        for p in self.T + self.M + self.F:
            if p not in seen:
                seen.append(p)
        return tuple(seen)

    def to_json(self) -> dict:
        return {
            "T": [list(p) for p in self.T],
            "M": [list(p) for p in self.M],
            "F": [list(p) for p in self.F],
            "Ux": list(self.Ux),
            "Uy": list(self.Uy),
            "Uz": list(self.Uz),
            "aux_max": dict(self.values),
        }

    @classmethod
    def from_points(cls, M: Sequence[Sequence[float]], F: Sequence[Sequence[float]], merge_tol: float = 1e-9, values=None):
        """Build from explicit maximizers, snapping near-equal coordinates."""
        M = [as_point(p) for p in M]
        F = [as_point(p) for p in F]
        if len(M) != 8 or len(F) != 6:
            raise ValueError("need 8 M points and 6 F points")
        for k, (aid, p) in enumerate(zip(("h1", "h2", "h3", "h4", "h5", "h6"), F)):
            axis, v = FACES[aid]
            if abs(p[axis] - v) > merge_tol:
                raise DomainError(f"F{k + 1}={tuple(p)} is not on its face")
        allp = list(CORNERS.values()) + M + F
        maps = [_snap_axis((p[k] for p in allp), merge_tol) for k in range(3)]

        def snap(p):
            return Point3(*(maps[k][p[k]] for k in range(3)))

        M = tuple(snap(p) for p in M)
        F = tuple(snap(p) for p in F)
        proj = [tuple(sorted({maps[k][p[k]] for p in allp})) for k in range(3)]
        return cls(M=M, F=F, values=dict(values or {}), Ux=proj[0], Uy=proj[1], Uz=proj[2])


def build_candidate_set(f: FunctionSource, cfg: OptimizerConfig | None = None) -> CandidateSet:
    """Run the 14 maximizations (g1..g8, h1..h6) and assemble U."""
    cfg = cfg or OptimizerConfig()
    ids = [f"g{i}" for i in range(1, 9)] + [f"h{i}" for i in range(1, 7)]
    n = min(worker_count(cfg), len(ids))
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(lambda a: maximize_auxiliary(a, f, cfg), ids))
    else:
        results = [maximize_auxiliary(a, f, cfg) for a in ids]
    values = {a: v for a, (_, v) in zip(ids, results)}
    M = [p for p, _ in results[:8]]
    F = [p for p, _ in results[8:]]
    return CandidateSet.from_points(M, F, cfg.merge_tol, values)
