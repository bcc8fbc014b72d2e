"""Trivariate functions on the unit cube and the mixed-difference sign check.

A :class:`FunctionSource` is anything that maps points of ``[0, 1]^3`` to
reals. Sources are numpy-vectorised: calling one with arrays broadcasts.
Scalar lookups go through :func:`evaluate`, which validates the point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Mapping, NamedTuple, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "GridFormatError",
    "UnknownFunctionError",
    "Point3",
    "as_point",
    "FunctionSource",
    "BuiltinFunction",
    "GridFunction",
    "DeltaReport",
    "BUILTINS",
    "builtin",
    "load_grid",
    "grid_from_function",
    "evaluate",
    "check_delta_conditions",
]


class DomainError(ValueError):
    """A point lies outside the domain of the function being evaluated."""


class GridFormatError(ValueError):
    """A grid file does not follow the documented JSON schema."""


class UnknownFunctionError(KeyError):
    pass


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def as_point(p: Sequence[float]) -> Point3:
    """Validate ``p`` as a point of the closed unit cube."""
    if len(p) != 3:
        raise DomainError(f"expected 3 coordinates, got {len(p)}")
    x, y, z = (float(v) for v in p)
    for v in (x, y, z):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"point {(x, y, z)} is outside [0,1]^3")
    return Point3(x, y, z)


class FunctionSource:
    """Base class: subclasses implement the vectorised ``__call__``."""

    def __call__(self, x, y, z):
        raise NotImplementedError

    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor()}>"


def evaluate(f: FunctionSource, p: Sequence[float]) -> float:
    """``f(p)`` for a single point; raises :class:`DomainError` off the cube."""
    q = as_point(p)
    return float(f(np.float64(q.x), np.float64(q.y), np.float64(q.z)))


# --------------------------------------------------------------------------
# builtins
# --------------------------------------------------------------------------


def _remark41(x, y, z):
    x, y, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
    # first matching branch wins; the branches agree on x=1/2 and z=1/2
    conds = [
        (x <= 0.5) & (z <= 0.5),
        (x >= 0.5) & (z <= 0.5),
        (x <= 0.5) & (z >= 0.5),
    ]
    vals = [
        x * z,
        z / 2 + (2 * x - 1) * y / 4,
        x / 2 + (2 * z - 1) * y / 4,
    ]
    out = np.select(conds, vals, 0.25 + (2 * x - 1) * y / 4 + (2 * z - 1) * y / 4)
    return out[()] if out.ndim == 0 else out


def _separable(p):
    # phi(x) + psi(y) + omega(z); any combination is exactly representable
    u, v, w = p.get("u", 1.0), p.get("v", 1.0), p.get("w", 1.0)
    return lambda x, y, z: u * np.sin(3.0 * x) + v * np.cos(2.0 * y) + w * np.exp(z)


def _class_poly(p):
    # positive combination of x^a y^b, y^b z^c, x^a z^c plus separable noise
    cxy, cyz, cxz = p.get("cxy", 1.0), p.get("cyz", 1.0), p.get("cxz", 1.0)
    px, py, pz = p.get("px", 1.0), p.get("py", 1.0), p.get("pz", 1.0)
    nx, ny, nz = p.get("nx", 0.0), p.get("ny", 0.0), p.get("nz", 0.0)

    def fn(x, y, z):
        xa, yb, zc = np.power(x, px), np.power(y, py), np.power(z, pz)
        return (
            cxy * xa * yb
            + cyz * yb * zc
            + cxz * xa * zc
            + nx * np.sin(5.0 * x)
            + ny * np.cos(4.0 * y)
            + nz * np.sin(3.0 * z + 1.0)
        )

    return fn


_FAMILIES: Dict[str, Callable[[Mapping[str, float]], Callable]] = {
    "zero": lambda p: (lambda x, y, z: 0.0 * (x + y + z)),
    "product_xz": lambda p: (lambda x, y, z: x * z + 0.0 * y),
    "product_xy": lambda p: (lambda x, y, z: x * y + 0.0 * z),
    "product_yz": lambda p: (lambda x, y, z: y * z + 0.0 * x),
    "product_xyz": lambda p: (lambda x, y, z: x * y * z),
    "bilinear_sum": lambda p: (lambda x, y, z: x * y + x * z + y * z),
    "neg_xy": lambda p: (lambda x, y, z: -(x * y) + 0.0 * z),
    "remark41_piecewise": lambda p: _remark41,
    "separable": _separable,
    "class_poly": _class_poly,
}

# keys consumed by the affine wrapper  a*f + (b*x + c*y + d*z + e)
_AFFINE_KEYS = ("a", "b", "c", "d", "e")

BUILTINS = tuple(sorted(_FAMILIES))


@dataclass(frozen=True)
class BuiltinFunction(FunctionSource):
    name: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in _FAMILIES:
            raise UnknownFunctionError(self.name)
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "_fn", _FAMILIES[self.name](self.params))

    def __call__(self, x, y, z):
        p = self.params
        a = p.get("a", 1.0)
        base = self._fn(x, y, z)
        if a != 1.0:
            base = a * base
        b, c, d, e = (p.get(k, 0.0) for k in _AFFINE_KEYS[1:])
        if b or c or d or e:
            base = base + b * x + c * y + d * z + e
        return base

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params.items()))))

    def descriptor(self) -> str:
        if not self.params:
            return f"builtin:{self.name}"
        kv = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return f"builtin:{self.name}:{kv}"


def _fmt(v: float) -> str:
    return repr(float(v))


def builtin(name: str, params: Mapping[str, float] | None = None, **kwargs: float) -> BuiltinFunction:
    """Look up a builtin test function.

    Every builtin accepts the affine-wrapper parameters ``a, b, c, d, e``
    giving ``a*f + b*x + c*y + d*z + e``. ``separable`` and ``class_poly``
    take extra shape parameters.
    """
    merged = dict(params or {})
    merged.update(kwargs)
    return BuiltinFunction(name, {k: float(v) for k, v in merged.items()})


# --------------------------------------------------------------------------
# grid data
# --------------------------------------------------------------------------


def _check_axis(name: str, arr: np.ndarray, n: int) -> None:
    if arr.ndim != 1 or arr.size != n:
        raise GridFormatError(f"{name} has {arr.size} entries, expected {n}")
    if n < 2:
        raise GridFormatError(f"{name} needs at least 2 nodes")
    if arr[0] != 0.0 or arr[-1] != 1.0:
        raise GridFormatError(f"{name} must start at 0 and end at 1")
    if not np.all(np.diff(arr) > 0):
        raise GridFormatError(f"{name} is not strictly increasing")


class GridFunction(FunctionSource):
    """Trilinear interpolant of values stored on a rectilinear grid.

    ``values`` has shape ``(nx, ny, nz)`` (x outermost, z innermost when
    flattened). Values at nodes are returned exactly.
    """

    def __init__(self, xs, ys, zs, values, path: str | None = None):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.zs = np.asarray(zs, dtype=float)
        nx, ny, nz = self.xs.size, self.ys.size, self.zs.size
        for name, arr, n in (("xs", self.xs, nx), ("ys", self.ys, ny), ("zs", self.zs, nz)):
            _check_axis(name, arr, n)
        vals = np.asarray(values, dtype=float)
        if vals.size != nx * ny * nz:
            raise GridFormatError(f"values has {vals.size} entries, expected {nx * ny * nz}")
        self.values = vals.reshape(nx, ny, nz)
        self.values.setflags(write=False)
        self.path = path

    @staticmethod
    def _locate(axis: np.ndarray, t: np.ndarray):
        # cell i covers [axis[i], axis[i+1]]; the last node maps to the last cell with weight 1
        i = np.searchsorted(axis, t, side="right") - 1
        i = np.clip(i, 0, axis.size - 2)
        lo, hi = axis[i], axis[i + 1]
        w = (t - lo) / (hi - lo)
        return i, w

    def __call__(self, x, y, z):
        x, y, z = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
        i, wx = self._locate(self.xs, x)
        j, wy = self._locate(self.ys, y)
        k, wz = self._locate(self.zs, z)
        v = self.values
        ux, uy, uz = 1.0 - wx, 1.0 - wy, 1.0 - wz
        out = (
            ux * (uy * (uz * v[i, j, k] + wz * v[i, j, k + 1]) + wy * (uz * v[i, j + 1, k] + wz * v[i, j + 1, k + 1]))
            + wx
            * (uy * (uz * v[i + 1, j, k] + wz * v[i + 1, j, k + 1]) + wy * (uz * v[i + 1, j + 1, k] + wz * v[i + 1, j + 1, k + 1]))
        )
        return out[()] if out.ndim == 0 else out

    def descriptor(self) -> str:
        if self.path is not None:
            return f"grid:{self.path}"
        return f"grid:<{self.xs.size}x{self.ys.size}x{self.zs.size}>"

    def to_json(self) -> dict:
        return {
            "nx": int(self.xs.size),
            "ny": int(self.ys.size),
            "nz": int(self.zs.size),
            "xs": self.xs.tolist(),
            "ys": self.ys.tolist(),
            "zs": self.zs.tolist(),
            "values": self.values.ravel().tolist(),
        }


def load_grid(path: str | Path) -> GridFunction:
    """Read a grid file (JSON with nx, ny, nz, xs, ys, zs, values)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GridFormatError(f"cannot read grid file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise GridFormatError("grid file must hold a JSON object")
    missing = [k for k in ("nx", "ny", "nz", "xs", "ys", "zs", "values") if k not in doc]
    if missing:
        raise GridFormatError(f"grid file lacks keys {missing}")
    sizes = []
    for k in ("nx", "ny", "nz"):
        n = doc[k]
        if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
            raise GridFormatError(f"{k} must be a positive integer")
        sizes.append(n)
    for k, n in zip(("xs", "ys", "zs"), sizes):
        if len(doc[k]) != n:
            raise GridFormatError(f"{k} has {len(doc[k])} entries, expected {n}")
    return GridFunction(doc["xs"], doc["ys"], doc["zs"], doc["values"], path=str(path))


def grid_from_function(f: FunctionSource, xs, ys, zs) -> GridFunction:
    """Sample ``f`` on the tensor grid ``xs x ys x zs``."""
    X, Y, Z = np.meshgrid(np.asarray(xs, float), np.asarray(ys, float), np.asarray(zs, float), indexing="ij")
    return GridFunction(xs, ys, zs, np.broadcast_to(f(X, Y, Z), X.shape))


# --------------------------------------------------------------------------
# mixed differences
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaReport:
    satisfied_weak: bool
    satisfied_strict: bool
    worst_violation: float
    worst_location: tuple[str, Point3]
    tol: float
    grid_shape: tuple[int, int, int]

    def to_json(self) -> dict:
        axes, p = self.worst_location
        return {
            "satisfied_weak": self.satisfied_weak,
            "satisfied_strict": self.satisfied_strict,
            "worst_violation": self.worst_violation,
            "worst_location": {"axes": axes, "point": list(p)},
            "tol": self.tol,
            "grid_shape": list(self.grid_shape),
        }


def _check_axes(f: FunctionSource, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    base = np.linspace(0.0, 1.0, n)
    if not isinstance(f, GridFunction):
        return base, base, base
    # run on a refinement of the source grid: nodes, midpoints and the uniform grid
    out = []
    for nodes in (f.xs, f.ys, f.zs):
        mids = 0.5 * (nodes[1:] + nodes[:-1])
        out.append(np.unique(np.concatenate([base, nodes, mids])))
    return out[0], out[1], out[2]


def check_delta_conditions(f: FunctionSource, n: int = 16, tol: float | None = None) -> DeltaReport:
    """Check the three second mixed differences of ``f`` on a grid.

    All adjacent-cell differences ``D_a D_b f`` are formed on the uniform
    ``n``-per-axis grid (refined with the source nodes for grid data). The
    weak condition holds if every difference is ``>= -tol``, the strict one
    if every difference is ``> tol``. Larger steps telescope into sums of
    adjacent ones, so nothing is lost by checking adjacent cells only.
    """
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    if tol is None:
        tol = 1e-9 if isinstance(f, GridFunction) else 1e-12
    xs, ys, zs = _check_axes(f, n)
    X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
    F = np.broadcast_to(np.asarray(f(X, Y, Z), float), X.shape)

    diffs = {
        "xy": F[1:, 1:, :] - F[:-1, 1:, :] - F[1:, :-1, :] + F[:-1, :-1, :],
        "xz": F[1:, :, 1:] - F[:-1, :, 1:] - F[1:, :, :-1] + F[:-1, :, :-1],
        "yz": F[:, 1:, 1:] - F[:, :-1, 1:] - F[:, 1:, :-1] + F[:, :-1, :-1],
    }
    worst = math.inf
    where = ("xy", Point3(0.0, 0.0, 0.0))
    for axes, d in diffs.items():
        idx = np.unravel_index(int(np.argmin(d)), d.shape)
        v = float(d[idx])
        if v < worst:
            worst = v
            where = (axes, Point3(float(xs[idx[0]]), float(ys[idx[1]]), float(zs[idx[2]])))
    return DeltaReport(
        satisfied_weak=worst >= -tol,
        satisfied_strict=worst > tol,
        worst_violation=worst,
        worst_location=where,
        tol=tol,
        grid_shape=(xs.size, ys.size, zs.size),
    )
