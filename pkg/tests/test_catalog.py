from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from seplinf.candidates import CandidateSet, build_candidate_set
from seplinf.catalog import (
    CATALOG,
    FACE_MATRIX,
    CatalogFormatError,
    evaluate_catalog,
    face_matrix_from_rules,
    instantiate,
    load_catalog,
    parse_catalog,
    verify_catalog_against_matrix,
)
from seplinf.cycles import is_minimal, nonzero_plane_sums, structure_violations, well_ordered
from seplinf.exact import rank
from seplinf.function_model import builtin, evaluate

FIX = Path(__file__).parent / "fixtures"
ENTRY = {e.id: e for e in CATALOG}

FACES = [(0, 0.5, 0.5), (0.5, 0.5, 0), (0.5, 0.5, 1), (0.5, 0, 0.5), (0.5, 1, 0.5), (0, 0.5, 0.5), (1, 0.5, 0.5)]


def _generic_U(rng):
    M = rng.uniform(0.05, 0.95, (8, 3))
    F = rng.uniform(0.05, 0.95, (6, 3))
    for k, (axis, v) in enumerate(((2, 0), (2, 1), (1, 0), (1, 1), (0, 0), (0, 1))):
        F[k, axis] = v
    return CandidateSet.from_points(M.tolist(), F.tolist())


def test_catalog_size_and_groups():
    assert len(CATALOG) == 123
    assert len({e.id for e in CATALOG}) == 123
    assert {e.group for e in CATALOG} == set(range(1, 10))
    assert ENTRY["1.5"].as_dict() == {"T1": 1, "T8": 2, "T3": -1, "T5": -1, "T7": -1}


def test_entry_2_3_instantiation_by_hand():
    a, b, c = 0.3, 0.6, 0.8
    U = CandidateSet.from_points([(a, b, c)] * 8, [(0.5, 0.5, 0), (0.5, 0.5, 1), (0.5, 0, 0.5), (0.5, 1, 0.5), (0, 0.5, 0.5), (1, 0.5, 0.5)])
    cyc = instantiate(ENTRY["2.3"], U)
    # M3 sends its weight to (x,0,1), (1,0,z), (1,y,0)
    expected = {
        (0, 0, 0): 3, (1, 1, 1): 2, (a, b, c): 1,
        (a, 0, 1): -1, (1, 0, c): -1, (1, b, 0): -1,
        (0, 0, 1): -1, (0, 1, 0): -2,
    }
    got = {tuple(p): w for p, w in cyc}
    assert got == {tuple(map(float, p)): Fraction(w) for p, w in expected.items()}


@pytest.mark.parametrize("seed", range(5))
def test_every_entry_is_a_minimal_cycle_on_generic_points(seed):
    U = _generic_U(np.random.default_rng(seed))
    for e in CATALOG:
        c = instantiate(e, U)
        assert not nonzero_plane_sums(c)
        assert is_minimal(c), e.id


def test_structure_holds_when_positive_points_are_well_ordered():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(120):
        U = _generic_U(rng)
        for e in CATALOG:
            c = instantiate(e, U)
            pos = [p for p, w in c if w > 0]
            if all(well_ordered(p, q) for i, p in enumerate(pos) for q in pos[i + 1:]):
                assert structure_violations(c) == [], e.id
                checked += 1
    assert checked > 50


def test_face_matrix_from_rules_and_rank():
    assert face_matrix_from_rules() == [list(r) for r in FACE_MATRIX]
    assert rank(FACE_MATRIX) == 4
    r = FACE_MATRIX
    assert [a + b for a, b in zip(r[0], r[1])] == [a + b for a, b in zip(r[2], r[3])] == [a + b for a, b in zip(r[4], r[5])]


def test_verify_bundled_catalog():
    rep = verify_catalog_against_matrix()
    assert rep.ok and rep.circuit_count == 123 and rep.matrix_rank == 4
    assert rep.mismatches == []


def test_verify_corrupted_catalog_names_entry():
    rep = verify_catalog_against_matrix(load_catalog(FIX / "corrupted_catalog.txt"))
    assert not rep.ok
    assert {m["id"] for m in rep.mismatches} == {"2.11"}


@pytest.mark.parametrize(
    "text",
    ["1.1 T1=1 T8=1 T2=-1 T5=x", "garbage", "1.1 T1=1 T8=1 M1=-1", "1.1 T1=1 T8=1 T2=1", "1.1 T1=1 T8=1 F1=1 F3=1", "1.1 T1=1 T8=1\n1.1 T1=1 T8=1"],
)
def test_parse_errors(text):
    with pytest.raises(CatalogFormatError):
        parse_catalog(text)


def _ratio(f, cyc):
    num = sum(w * evaluate(f, p) for p, w in cyc.items())
    return num / sum(abs(w) for w in cyc.values())


@pytest.mark.parametrize(
    "name,value,best",
    [("product_xz", 0.25, "1.1"), ("product_xyz", 1 / 3, "1.5"), ("product_xy", 0.25, "1.2"), ("bilinear_sum", 0.5, "1.1")],
)
def test_golden_functions(name, value, best):
    f = builtin(name)
    ev = evaluate_catalog(f, build_candidate_set(f))
    assert ev.best_ratio == pytest.approx(value, abs=1e-12)
    assert ev.best_id == best
    assert len(ev.table()) == 123
    assert ev.table()[0]["ratio"] == ev.best_ratio


def test_remark41_catalog_values_by_hand():
    f = builtin("remark41_piecewise")
    ev = evaluate_catalog(f, build_candidate_set(f))
    h = 0.5
    # explicit 6-point cycle through (1/2,0,1/2): plane sums vanish by inspection
    six = {(0, 0, 0): 1, (1, 1, 1): 2, (h, 0, h): 1, (1, 0, 1): -2, (0, 1, h): -1, (h, 1, 0): -1}
    assert _ratio(f, six) == pytest.approx(5 / 32, abs=1e-15)
    assert ev.best_ratio == pytest.approx(5 / 32, abs=1e-12)
    # entry 2.11 with its positive point at (1/2,0,1/2) and at the cube center
    for m5, value in (((h, 0, h), 7 / 48), ((h, h, h), 13 / 96)):
        a, b, c = m5
        cyc = {(0, 0, 0): 2, (1, 1, 1): 3, m5: 1, (1, b, 0): -1, (a, 1, 0): -1, (0, 1, c): -1, (1, 0, 1): -2, (0, 1, 1): -1}
        merged = {}
        for p, w in cyc.items():
            merged[p] = merged.get(p, 0) + w
        assert _ratio(f, merged) == pytest.approx(value, abs=1e-15)
    assert ev.ratios["2.11"] == pytest.approx(7 / 48, abs=1e-12)
