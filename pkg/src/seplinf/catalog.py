"""The 123 minimal cycle families and their self-verification.

A catalog entry lists weights on the corners and on the positive M/F points
only. :func:`instantiate` places those weights on a concrete candidate set
and adds the negative counterweights on the free edges, giving a genuine
projection cycle. :func:`verify_catalog_against_matrix` regenerates the whole
catalog from the 6x22 face-equation matrix.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .candidates import AUXILIARY, CORNERS, CandidateSet, edge_projections
from .cycles import CycleVector, golomb_ratio, matrix_circuits, merge_weighted, nonzero_plane_sums
from .exact import rank, same_row_space
from .function_model import FunctionSource

__all__ = [
    "COLUMN_NAMES",
    "FACE_MATRIX",
    "FACE_ECHELON",
    "CatalogEntry",
    "CatalogFormatError",
    "CatalogConsistencyError",
    "CatalogEvaluation",
    "VerificationReport",
    "load_catalog",
    "parse_catalog",
    "sign_admissible_circuits",
    "CATALOG",
    "face_matrix_from_rules",
    "instantiate",
    "evaluate_catalog",
    "verify_catalog_against_matrix",
]

# Column order of the face-equation system.
COLUMN_NAMES: tuple[str, ...] = (
    ("T1", "T8")
    + tuple(f"M{i}" for i in range(1, 9))
    + tuple(f"T{i}" for i in range(2, 8))
    + tuple(f"F{i}" for i in range(1, 7))
)

# Rows: plane sums on the faces x=0, x=1, y=0, y=1, z=0, z=1.
FACE_MATRIX: tuple[tuple[int, ...], ...] = (
    (1, 0, -1, -1, 0, 0, -1, -2, -2, -1, 1, 0, 0, 0, 1, 1, -1, 0, -1, 0, 1, -2),
    (0, 1, -1, -1, -2, -2, -1, 0, 0, -1, 0, 1, 1, 1, 0, 0, 0, -1, 0, -1, -2, 1),
    (1, 0, -1, -1, -2, -1, 0, 0, -1, -2, 1, 1, 1, 0, 0, 0, -1, 0, 1, -2, -1, 0),
    (0, 1, -1, -1, 0, -1, -2, -2, -1, 0, 0, 0, 0, 1, 1, 1, 0, -1, -2, 1, 0, -1),
    (1, 0, -1, -1, -1, -2, -2, -1, 0, 0, 0, 0, 1, 1, 1, 0, 1, -2, -1, 0, -1, 0),
    (0, 1, -1, -1, -1, 0, 0, -1, -2, -2, 1, 1, 0, 0, 0, 1, -2, 1, 0, -1, 0, -1),
)

# Reduced system as printed alongside FACE_MATRIX. It has rank 4 but is not
# row-equivalent to FACE_MATRIX; kept for the report, not used for solving.
FACE_ECHELON: tuple[tuple[int, ...], ...] = (
    (1, 0, -1, -1, -1, -2, -2, -1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, -1, -2, -1, 0),
    (0, 1, -1, -1, 0, -1, -2, -2, -1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, -1, -2, -1),
    (0, 0, 0, 0, 1, 2, 1, -1, -2, -1, -1, -1, 0, 1, 1, 0, -2, 0, 2, 2, 0, -2),
    (0, 0, 0, 0, -1, 1, 2, 1, -1, -2, 0, -1, -1, 0, 1, 1, -2, -2, 0, 2, 2, 0),
    (0,) * 22,
    (0,) * 22,
)

_AUX_OF = {f"M{i}": f"g{i}" for i in range(1, 9)} | {f"F{i}": f"h{i}" for i in range(1, 7)}


class CatalogFormatError(ValueError):
    pass


class CatalogConsistencyError(RuntimeError):
    """An instantiated entry failed to be a projection cycle."""


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    weights: tuple[tuple[str, int], ...]

    @property
    def group(self) -> int:
        return int(self.id.split(".")[0])

    def as_dict(self) -> dict[str, int]:
        return dict(self.weights)

    def validate(self) -> None:
        w = self.as_dict()
        if w.get("T1", 0) <= 0 or w.get("T8", 0) <= 0:
            raise CatalogFormatError(f"{self.id}: T1 and T8 need positive weights")
        for name, v in w.items():
            if name not in COLUMN_NAMES:
                raise CatalogFormatError(f"{self.id}: unknown point {name}")
            if name[0] in "MF" and v < 0:
                raise CatalogFormatError(f"{self.id}: {name} must be nonnegative")
            if name[0] == "T" and name not in ("T1", "T8") and v > 0:
                raise CatalogFormatError(f"{self.id}: corner {name} must be nonpositive")
        fs = sorted(int(n[1:]) for n in w if n[0] == "F")
        for i, j in itertools.combinations(fs, 2):
            if (j - i) % 2 == 0:
                raise CatalogFormatError(f"{self.id}: F{i} and F{j} cannot appear together")


_LINE = re.compile(r"^(\d+\.\d+)\s+(.*)$")


def parse_catalog(text: str) -> tuple[CatalogEntry, ...]:
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise CatalogFormatError(f"line {lineno}: cannot parse {raw!r}")
        eid, rest = m.groups()
        pairs = []
        for tok in rest.split():
            try:
                name, val = tok.split("=")
                pairs.append((name, int(val)))
            except ValueError as exc:
                raise CatalogFormatError(f"line {lineno}: bad token {tok!r}") from exc
        if eid in seen:
            raise CatalogFormatError(f"duplicate entry id {eid}")
        seen.add(eid)
        entry = CatalogEntry(eid, tuple(pairs))
        entry.validate()
        entries.append(entry)
    return tuple(entries)


def load_catalog(path: str | Path | None = None) -> tuple[CatalogEntry, ...]:
    """Read a catalog file; the bundled catalog when ``path`` is None."""
    if path is None:
        text = resources.files("seplinf").joinpath("data/catalog.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_catalog(text)


CATALOG: tuple[CatalogEntry, ...] = load_catalog()


def face_matrix_from_rules() -> list[list[int]]:
    """Face-equation matrix rebuilt from the corner naming and the projection rules.

    Uses a generic interior point for every M and a face-interior point for
    every F, so only the corners and the edge projections touch the faces.
    """
    generic = (0.3, 0.45, 0.6)
    faces = [(k, v) for k in range(3) for v in (0.0, 1.0)]
    cols = []
    for name in COLUMN_NAMES:
        if name[0] == "T":
            contrib = [(CORNERS[name], 1)]
        else:
            aux = AUXILIARY[_AUX_OF[name]]
            p = list(generic)
            if aux.face is not None:
                p[aux.face[0]] = aux.face[1]
            contrib = [(tuple(p), 1)] + [(q, -1) for q in edge_projections(aux.id, p)]
        cols.append([sum(w for q, w in contrib if q[k] == v) for k, v in faces])
    return [list(r) for r in zip(*cols)]


def instantiate(entry: CatalogEntry, U: CandidateSet, merge_tol: float = 1e-9) -> CycleVector:
    """Place an entry on concrete points and rebuild its negative edge weights."""
    pts, ws = [], []
    for name, w in entry.weights:
        p = U.point(name)
        pts.append(p)
        ws.append(Fraction(w))
        if name[0] in "MF":
            for q in edge_projections(_AUX_OF[name], p):
                pts.append(q)
                ws.append(Fraction(-w))
    s = merge_weighted(pts, ws, merge_tol)
    bad = nonzero_plane_sums(s)
    if bad or len(s) == 0:
        raise CatalogConsistencyError(f"entry {entry.id} does not close into a cycle: {bad}")
    return CycleVector(s.points, s.weights)


@dataclass(frozen=True)
class CatalogEvaluation:
    best_id: str
    best_ratio: float
    ratios: dict[str, float]
    cycles: dict[str, CycleVector] = field(repr=False)

    def table(self) -> list[dict]:
        """Entries sorted by descending ratio (catalog order breaks ties)."""
        out = []
        for eid in sorted(self.ratios, key=lambda k: -self.ratios[k]):
            c = self.cycles[eid]
            out.append(
                {
                    "id": eid,
                    "ratio": self.ratios[eid],
                    "points": [list(p) for p in c.points],
                    "weights": [str(w) for w in c.weights],
                }
            )
        return out


def evaluate_catalog(
    f: FunctionSource,
    U: CandidateSet,
    catalog: Sequence[CatalogEntry] = CATALOG,
    tie_tol: float = 1e-12,
) -> CatalogEvaluation:
    """Golomb ratio of every entry on ``U``; the maximum is the error estimate.

    Ties within ``tie_tol`` of the maximum go to the earliest entry.
    """
    cycles = {e.id: instantiate(e, U) for e in catalog}
    ratios = {eid: golomb_ratio(c, f) for eid, c in cycles.items()}
    top = max(ratios.values())
    best = next(eid for eid, r in ratios.items() if r >= top - tie_tol)
    return CatalogEvaluation(best, ratios[best], ratios, cycles)


# --------------------------------------------------------------------------
# static verification
# --------------------------------------------------------------------------


@dataclass
class VerificationReport:
    circuit_count: int
    catalog_size: int
    circuits_through_diagonal: int
    matrix_rank: int
    echelon_rank: int
    echelon_equivalent: bool
    row_identity: bool
    mismatches: list[dict]

    @property
    def ok(self) -> bool:
        return (
            not self.mismatches
            and self.circuit_count == self.catalog_size
            and self.matrix_rank == 4
            and self.row_identity
        )

    def to_json(self) -> dict:
        return {
            "circuit_count": self.circuit_count,
            "catalog_size": self.catalog_size,
            "circuits_through_diagonal": self.circuits_through_diagonal,
            "matrix_rank": self.matrix_rank,
            "echelon_rank": self.echelon_rank,
            "echelon_equivalent": self.echelon_equivalent,
            "row_identity": self.row_identity,
            "ok": self.ok,
            "mismatches": self.mismatches,
        }


def _admissible(names: Sequence[str], vec: Sequence[int]) -> bool:
    w = dict(zip(names, vec))
    if w["T1"] <= 0 or w["T8"] <= 0:
        return False
    for n, v in w.items():
        if n[0] in "MF" and v < 0:
            return False
        if n[0] == "T" and n not in ("T1", "T8") and v > 0:
            return False
    fs = sorted(int(n[1:]) for n in w if n[0] == "F")
    return all((j - i) % 2 for i, j in itertools.combinations(fs, 2))


def sign_admissible_circuits(matrix: Sequence[Sequence[int]] = FACE_MATRIX, max_size: int = 6) -> tuple[int, list[dict[str, int]]]:
    """Circuits through the T1 and T8 columns, filtered by the sign pattern.

    Returns the number of circuits through both columns before filtering and
    the admissible ones as name -> weight dicts with T1 > 0.
    """
    total = 0
    found = []
    for cols, vec in matrix_circuits(matrix, max_size, must_contain=(0, 1)):
        total += 1
        if vec[0] < 0:
            vec = [-v for v in vec]
        names = [COLUMN_NAMES[c] for c in cols]
        if _admissible(names, vec):
            found.append(dict(zip(names, vec)))
    return total, found


def verify_catalog_against_matrix(catalog: Iterable[CatalogEntry] | None = None) -> VerificationReport:
    """Regenerate the catalog from FACE_MATRIX and compare entry by entry."""
    catalog = tuple(CATALOG if catalog is None else catalog)
    m = [list(r) for r in FACE_MATRIX]
    total, found = sign_admissible_circuits(m)
    by_support = {frozenset(d): d for d in found}

    mismatches = []
    matched = set()
    for e in catalog:
        w = e.as_dict()
        key = frozenset(w)
        d = by_support.get(key)
        if d is None:
            mismatches.append({"id": e.id, "problem": "no admissible circuit on this support", "expected": w})
        elif d != w:
            mismatches.append({"id": e.id, "problem": "weights differ", "expected": w, "computed": d})
            matched.add(key)
        else:
            matched.add(key)
    for key, d in by_support.items():
        if key not in matched:
            mismatches.append({"id": None, "problem": "circuit missing from catalog", "computed": d})

    r = [tuple(row) for row in FACE_MATRIX]
    return VerificationReport(
        circuit_count=len(found),
        catalog_size=len(catalog),
        circuits_through_diagonal=total,
        matrix_rank=rank(m),
        echelon_rank=rank([list(row) for row in FACE_ECHELON]),
        echelon_equivalent=same_row_space(m, [list(row) for row in FACE_ECHELON]),
        row_identity=[a + b for a, b in zip(r[0], r[1])] == [a + b for a, b in zip(r[2], r[3])] == [a + b for a, b in zip(r[4], r[5])],
        mismatches=mismatches,
    )
