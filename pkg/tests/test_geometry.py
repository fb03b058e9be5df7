import numpy as np
import pytest

from antinorms import (
    ConicPolytope,
    DegenerateBodyError,
    DimensionMismatchError,
    antipolar,
    prune_positive_hull,
    vertices_of,
)


def test_vertices_simplex_corners():
    G = ConicPolytope.from_halfspaces([[1.0, 1.0]])
    assert vertices_of(G).tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_vertices_single_corner():
    G = ConicPolytope.from_halfspaces([[1.0, 0.0], [0.0, 1.0]])
    assert vertices_of(G).tolist() == [[1.0, 1.0]]


def test_vertices_k1_polygon():
    G = ConicPolytope.from_halfspaces([[0.6, 0.8], [0.0, 1.25]])
    V = vertices_of(G)
    assert np.allclose(V, [[0.0, 1.25], [0.6, 0.8]], atol=1e-12)
    # ordered by increasing abscissa
    assert np.all(np.diff(V[:, 0]) >= 0)


def test_vertices_cached():
    G = ConicPolytope.from_halfspaces([[1.0, 1.0]])
    assert G.vertices() is G.vertices()


def test_vertices_of_halfplane_only():
    G = ConicPolytope.from_halfspaces([[1.0, 0.0]])
    assert vertices_of(G).tolist() == [[1.0, 0.0]]


def test_antipolar_simplex_to_corner_and_back():
    G = ConicPolytope.from_halfspaces([[1.0, 1.0]])
    Gs = antipolar(G)
    assert vertices_of(Gs).tolist() == [[1.0, 1.0]]
    back = antipolar(Gs)
    assert vertices_of(back).tolist() == vertices_of(G).tolist()


def test_antipolar_involution_random_2d():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = rng.uniform(0.05, 2.0, size=(rng.integers(1, 6), 2))
        G = ConicPolytope.from_halfspaces(H).canonical()
        GG = antipolar(antipolar(G))
        assert np.allclose(GG.vertices(), G.vertices(), atol=1e-12)


def test_antipolar_order_reversal():
    rng = np.random.default_rng(8)
    for _ in range(10):
        H = rng.uniform(0.1, 2.0, size=(4, 2))
        G = ConicPolytope.from_halfspaces(H)          # all constraints
        Hsub = H[:2]
        Hbody = ConicPolytope.from_halfspaces(Hsub)   # fewer constraints: G subset Hbody
        Gs, Hs = antipolar(G), antipolar(Hbody)
        for v in Hs.vertices():                        # H* subset G*
            assert Gs.contains(v, tol=1e-9)


def test_vertices_dim4_cross_simplex():
    G = ConicPolytope.from_halfspaces([np.ones(4)])
    V = vertices_of(G)
    assert V.shape == (4, 4)
    assert np.allclose(np.sort(V.sum(axis=1)), 1.0)


def test_vertices_dim5_rejected():
    G = ConicPolytope.from_halfspaces([np.ones(5)])
    with pytest.raises(DimensionMismatchError):
        vertices_of(G)


def test_empty_body_detected():
    with pytest.raises(DegenerateBodyError):
        ConicPolytope(2)


def test_every_vertex_has_an_active_halfspace():
    rng = np.random.default_rng(4)
    for _ in range(10):
        H = rng.uniform(0.05, 2.0, size=(4, 3))
        G = ConicPolytope.from_halfspaces(H)
        V = vertices_of(G)
        act = np.abs(V @ H.T - 1.0) < 1e-8
        assert np.all(act.sum(axis=1) >= 1)


def test_upward_closedness_on_vertices():
    G = ConicPolytope.from_halfspaces([[0.6, 0.8], [0.0, 1.25]])
    for v in vertices_of(G):
        assert G.contains(v + np.array([0.5, 1.0]))


def test_prune_dominance_and_hull():
    pts = np.array([[2.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 2.0], [0.6, 0.7]])
    out = prune_positive_hull(pts)
    assert [[0.0, 1.0], [1.0, 0.0]] == sorted(out.tolist())
    kept = prune_positive_hull(np.array([[4 / 3, 1 / 3], [2 / 3, 2 / 3], [1 / 3, 4 / 3]]))
    assert len(kept) == 3  # middle point is below the chord: extreme


def test_prune_3d_lp_path():
    pts = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], [0.5, 0.5, 0.5]])
    out = prune_positive_hull(pts)
    assert len(out) == 3  # the interior-ish point dominates a convex combination


def test_lifted_polygon_antipolar_fixed_point():
    # cylinder over an autopolar polygon stays autopolar in d = 3
    from antinorms import AutopolarSeed, construct2
    import math

    poly = construct2(AutopolarSeed(1, math.atan2(0.8, 0.6)))
    H2 = poly.halfspaces()
    H3 = np.hstack([H2, np.zeros((len(H2), 1))])
    G = ConicPolytope.from_halfspaces(H3)
    Gs = antipolar(G)
    assert np.allclose(Gs.vertices(), G.vertices(), atol=1e-10)
    lifted = np.hstack([poly.vertices, np.zeros((len(poly.vertices), 1))])
    assert np.allclose(G.vertices(), lifted[np.lexsort(lifted.T[::-1])], atol=1e-10)
