import numpy as np
import pytest

from seplinf.candidates import (
    AUXILIARY,
    CandidateSet,
    OptimizerConfig,
    build_candidate_set,
    edge_projections,
    eval_auxiliary,
    maximize_auxiliary,
    worker_count,
)
from seplinf.cycles import on_free_edge
from seplinf.function_model import DomainError, builtin

# auxiliary functions written out by hand, one per line
G = {
    "g1": lambda f, x, y, z: f(x, y, z) - f(x, 0, 1) - f(1, y, 0) - f(0, 1, z),
    "g2": lambda f, x, y, z: f(x, y, z) - f(1, 0, z) - f(x, 1, 0) - f(0, y, 1),
    "g3": lambda f, x, y, z: f(x, y, z) - f(x, 0, 1) - f(1, 0, z) - f(1, y, 0),
    "g4": lambda f, x, y, z: f(x, y, z) - f(1, 0, z) - f(1, y, 0) - f(x, 1, 0),
    "g5": lambda f, x, y, z: f(x, y, z) - f(1, y, 0) - f(x, 1, 0) - f(0, 1, z),
    "g6": lambda f, x, y, z: f(x, y, z) - f(x, 1, 0) - f(0, 1, z) - f(0, y, 1),
    "g7": lambda f, x, y, z: f(x, y, z) - f(0, 1, z) - f(0, y, 1) - f(x, 0, 1),
    "g8": lambda f, x, y, z: f(x, y, z) - f(0, y, 1) - f(x, 0, 1) - f(1, 0, z),
}
H = {
    "h1": (lambda f, x, y, z: f(x, y, 0) - f(0, y, 1) - f(x, 0, 1), (2, 0)),
    "h2": (lambda f, x, y, z: f(x, y, 1) - f(1, y, 0) - f(x, 1, 0), (2, 1)),
    "h3": (lambda f, x, y, z: f(x, 0, z) - f(0, 1, z) - f(x, 1, 0), (1, 0)),
    "h4": (lambda f, x, y, z: f(x, 1, z) - f(1, 0, z) - f(x, 0, 1), (1, 1)),
    "h5": (lambda f, x, y, z: f(0, y, z) - f(1, 0, z) - f(1, y, 0), (0, 0)),
    "h6": (lambda f, x, y, z: f(1, y, z) - f(0, 1, z) - f(0, y, 1), (0, 1)),
}


def _rand_class(rng):
    c = rng.uniform(0.1, 2, 3)
    p = rng.uniform(0.5, 3, 3)
    n = rng.normal(size=3)
    return builtin("class_poly", cxy=c[0], cyz=c[1], cxz=c[2], px=p[0], py=p[1], pz=p[2], nx=n[0], ny=n[1], nz=n[2])


def test_table_matches_hand_written_definitions():
    rng = np.random.default_rng(3)
    f = _rand_class(rng)
    for _ in range(50):
        p = rng.random(3)
        for gid, g in G.items():
            assert eval_auxiliary(gid, f, p) == pytest.approx(g(f, *p), abs=1e-13)
        for hid, (h, (axis, v)) in H.items():
            q = p.copy()
            q[axis] = v
            assert eval_auxiliary(hid, f, q) == pytest.approx(h(f, *q), abs=1e-13)
    assert set(AUXILIARY) == set(G) | set(H)


def test_edge_projections_on_free_edges():
    for aid in AUXILIARY:
        for pt in edge_projections(aid, (0.3, 0.6, 0.9)):
            assert on_free_edge(pt)


def test_face_functions_reject_points_off_face():
    with pytest.raises(DomainError):
        eval_auxiliary("h1", builtin("zero"), (0.2, 0.2, 0.5))


@pytest.mark.parametrize("seed", range(4))
def test_maximizer_beats_random_sampling(seed):
    rng = np.random.default_rng(seed)
    f = _rand_class(rng)
    pts = rng.random((10_000, 3))
    for aid, aux in AUXILIARY.items():
        p, v = maximize_auxiliary(aid, f)
        q = pts.copy()
        if aux.face is not None:
            q[:, aux.face[0]] = aux.face[1]
            assert p[aux.face[0]] == aux.face[1]
        ref = G[aid](f, q[:, 0], q[:, 1], q[:, 2]) if aid in G else H[aid][0](f, q[:, 0], q[:, 1], q[:, 2])
        assert v >= float(np.max(ref)) - 1e-9
        assert eval_auxiliary(aid, f, p) == pytest.approx(v, abs=1e-15)


def test_remark41_g5_against_brute_force_scan():
    f = builtin("remark41_piecewise")
    t = np.linspace(0, 1, 101)
    X, Y, Z = np.meshgrid(t, t, t, indexing="ij")
    vals = G["g5"](f, X, Y, Z)
    brute = float(vals.max())
    p, v = maximize_auxiliary("g5", f)
    assert v == pytest.approx(brute, abs=1e-9)
    assert v == pytest.approx(0.25, abs=1e-9)
    assert eval_auxiliary("g5", f, p) == pytest.approx(0.25, abs=1e-9)


def test_candidate_set_projections_and_determinism(monkeypatch):
    f = builtin("remark41_piecewise")
    U = build_candidate_set(f)
    for axis, proj in enumerate((U.Ux, U.Uy, U.Uz)):
        assert proj[0] == 0.0 and proj[-1] == 1.0
        assert {p[axis] for p in U.points()} == set(proj)
    monkeypatch.setenv("SEPLINF_THREADS", "1")
    assert worker_count() == 1
    assert build_candidate_set(f) == U
    assert build_candidate_set(f, OptimizerConfig(workers=3)) == U


def test_from_points_validates_faces():
    M = [(0.5, 0.5, 0.5)] * 8
    F = [(0.5, 0.5, 0), (0.5, 0.5, 1), (0.5, 0, 0.5), (0.5, 1, 0.5), (0, 0.5, 0.5), (1, 0.5, 0.5)]
    U = CandidateSet.from_points(M, F)
    assert U.Ux == (0.0, 0.5, 1.0)
    with pytest.raises(DomainError):
        CandidateSet.from_points(M, [(0.5, 0.5, 0.2)] + F[1:])
