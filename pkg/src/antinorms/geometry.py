"""Conic polytopes in R^d_+ and the antipolar transform.

A conic polytope here is a set  G = {x in R^d_+ : <a_j, x> >= 1 for all j}
with nonnegative functionals a_j: convex, closed, upward closed (its
recession cone is the whole orthant) and not containing the origin.  It is
the unit antiball of the piecewise-linear antinorm min_j <a_j, x>.

The antipolar of a set X is  X* = {y >= 0 : <y, x> >= 1 for all x in X}.
For a conic polytope the transform swaps roles of vertices and non-axis
facets: the half-spaces of G* are exactly the vertices of G, and applying
the transform twice returns the canonical form of G.

Vertex enumeration (dim <= 4) is exhaustive over active constraint sets:
every feasible basic solution of d linearly independent constraints drawn
from {<a_j, x> >= 1} and {x_i >= 0} is an extreme point.  At desk scale
this is exact with floating-point filters at 1e-12 and avoids incremental
double-description bookkeeping.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog

from .config import DEFAULT
from .errors import DegenerateBodyError, DimensionMismatchError

__all__ = [
    "ConicPolytope",
    "vertices_of",
    "antipolar",
    "prune_positive_hull",
    "positive_hull_value",
]

_FEAS_TOL = 1e-9


def _dedupe_sorted(points, tol):
    """Cluster near-duplicates and return rows sorted lexicographically."""
    if len(points) == 0:
        return np.empty((0, points.shape[1] if points.ndim == 2 else 0))
    pts = np.asarray(points, dtype=float)
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    keep = [pts[0]]
    for row in pts[1:]:
        if all(np.max(np.abs(row - k)) > tol * (1.0 + np.max(np.abs(row))) for k in keep):
            keep.append(row)
    out = np.array(keep)
    order = np.lexsort(out.T[::-1])
    return out[order]


def _enumerate_vertices(halfspaces, tol=DEFAULT.geometry):
    A = np.atleast_2d(np.asarray(halfspaces, dtype=float))
    m, d = A.shape
    if d > 4:
        raise DimensionMismatchError("exact vertex enumeration supports dim <= 4")
    # constraint rows: <a_j, x> >= 1  and  x_i >= 0
    rows = np.vstack([A, np.eye(d)])
    rhs = np.concatenate([np.ones(m), np.zeros(d)])
    combos = list(itertools.combinations(range(m + d), d))
    M = rows[np.array(combos)]                      # (K, d, d)
    dets = np.abs(np.linalg.det(M))
    scale = np.max(np.abs(M), axis=(1, 2)) ** d + 1e-300
    good = dets > 1e-12 * scale
    if not np.any(good):
        raise DegenerateBodyError("no basic solutions: empty or degenerate body")
    combo_idx = np.array(combos)[good]
    sols = np.linalg.solve(M[good], rhs[combo_idx][..., None])[..., 0]
    cand = []
    for x, combo in zip(sols, combo_idx):
        if np.any(x < -1e-9):
            continue
        if np.any(A @ np.maximum(x, 0.0) < 1.0 - _FEAS_TOL):
            continue
        if not np.any(combo < m):      # only axis constraints active: the apex
            continue
        cand.append(np.maximum(x, 0.0))
    if not cand:
        raise DegenerateBodyError("conic polytope has no vertices (empty body?)")
    return _dedupe_sorted(np.array(cand), DEFAULT.vertex_dedupe)


class ConicPolytope:
    """Conic polytope with half-space and/or vertex representation.

    The vertex set is computed lazily from the half-spaces and cached;
    the cache is write-once (construct-then-publish), so sharing instances
    across threads is safe.
    """

    def __init__(self, dim, halfspaces=None, vertices=None):
        if halfspaces is None and vertices is None:
            raise DegenerateBodyError("need half-spaces or vertices")
        self.dim = int(dim)
        self._halfspaces = None
        self._vertices = None
        if halfspaces is not None:
            H = np.atleast_2d(np.asarray(halfspaces, dtype=float))
            if H.shape[1] != self.dim:
                raise DimensionMismatchError("half-space dimension mismatch")
            if np.any(H < 0):
                raise DegenerateBodyError("half-space functionals must be nonnegative")
            H.setflags(write=False)
            self._halfspaces = H
        if vertices is not None:
            V = np.atleast_2d(np.asarray(vertices, dtype=float))
            if V.shape[1] != self.dim:
                raise DimensionMismatchError("vertex dimension mismatch")
            if np.any(V < -1e-12):
                raise DegenerateBodyError("vertices must lie in the orthant")
            V = _dedupe_sorted(prune_positive_hull(np.maximum(V, 0.0)), DEFAULT.vertex_dedupe)
            V.setflags(write=False)
            self._vertices = V

    @classmethod
    def from_halfspaces(cls, halfspaces):
        H = np.atleast_2d(np.asarray(halfspaces, dtype=float))
        return cls(H.shape[1], halfspaces=H)

    @classmethod
    def from_vertices(cls, vertices):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        return cls(V.shape[1], vertices=V)

    @property
    def halfspaces(self):
        if self._halfspaces is None:
            # facets of co(V) + R^d_+ are the vertices of the antipolar
            dual = ConicPolytope(self.dim, halfspaces=self._vertices)
            H = dual.vertices()
            H.setflags(write=False)
            self._halfspaces = H
        return self._halfspaces

    def vertices(self):
        if self._vertices is None:
            V = _enumerate_vertices(self._halfspaces)
            V.setflags(write=False)
            self._vertices = V
        return self._vertices

    def contains(self, x, tol=1e-9):
        p = np.asarray(x, dtype=float)
        if np.any(p < -tol):
            return False
        if self._halfspaces is not None:
            return bool(np.all(self._halfspaces @ p >= 1.0 - tol))
        return positive_hull_value(self._vertices, p) >= 1.0 - tol

    def support(self, x):
        """min over the body of <x, .>, i.e. the dual antinorm at x."""
        return float(np.min(self.vertices() @ np.asarray(x, dtype=float)))

    def canonical(self):
        """Same body with irredundant half-spaces and cached vertices."""
        V = self.vertices()
        H = antipolar(self).vertices()
        out = ConicPolytope(self.dim, halfspaces=H)
        out._vertices = V
        return out

    def __eq__(self, other):
        if not isinstance(other, ConicPolytope) or other.dim != self.dim:
            return NotImplemented
        a, b = self.vertices(), other.vertices()
        return a.shape == b.shape and bool(np.allclose(a, b, atol=1e-10, rtol=0))

    def __repr__(self):
        nh = "?" if self._halfspaces is None else self._halfspaces.shape[0]
        nv = "?" if self._vertices is None else self._vertices.shape[0]
        return f"ConicPolytope(dim={self.dim}, halfspaces={nh}, vertices={nv})"


def vertices_of(G):
    """All extreme points of ``G``; in d = 2 ordered by increasing abscissa."""
    return G.vertices()


def antipolar(G):
    """G* = {y >= 0 : <y, x> >= 1 for all x in G}.

    Its half-spaces are exactly the vertices of G (recession directions of G
    impose nothing beyond y >= 0).  Applying the transform twice returns the
    canonical form of G.
    """
    return ConicPolytope(G.dim, halfspaces=G.vertices())


# ---------------------------------------------------------------------------
# positive convex hulls:  co_+ X = co X + R^d_+
# ---------------------------------------------------------------------------

def _prune_2d(points, tol=1e-10):
    pts = points[np.lexsort(points.T[::-1])]
    # Pareto sweep: keep strictly decreasing y as x increases
    kept = []
    best_y = None
    for p in pts:
        if best_y is None or p[1] < best_y - tol * (1.0 + abs(p[1])):
            kept.append(p)
            best_y = p[1]
    # convexity sweep on the lower-left staircase: a middle point on or above
    # the chord of its neighbors is absorbed by co_+ and gets dropped
    hull = []
    for p in kept:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross <= tol * (1.0 + abs(p[0]) + abs(p[1])):
                hull.pop()
            else:
                break
        hull.append(p)
    return np.array(hull)


def _lp_redundant(v, others, tol):
    n = others.shape[0]
    if n == 0:
        return False
    res = linprog(
        c=np.zeros(n),
        A_ub=others.T,
        b_ub=v + tol,
        A_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
        bounds=[(0, None)] * n,
        method="highs",
    )
    return res.status == 0


def prune_positive_hull(points, tol=1e-10):
    """Extreme points of co_+ {points}.

    A point is redundant iff a convex combination of the others is
    componentwise <= it (the +R^d_+ part absorbs dominated points).  d = 2
    uses the exact staircase sweep; higher dimensions solve one small LP
    feasibility problem per point.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] <= 1:
        return pts.copy()
    if pts.shape[1] == 2:
        return _prune_2d(pts, tol)
    keep = list(range(pts.shape[0]))
    i = 0
    while i < len(keep):
        v = pts[keep[i]]
        others = pts[[k for j, k in enumerate(keep) if j != i]]
        if _lp_redundant(v, others, tol):
            keep.pop(i)
        else:
            i += 1
    return pts[keep]


def positive_hull_value(points, x):
    """Gauge of co_+ {points} at ``x``: max {lam : x in lam * co_+ points}.

    Solved as the LP  max sum(nu)  s.t.  sum nu_j p_j <= x, nu >= 0.
    Returns 0 when x is not reachable at any positive scale.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.asarray(x, dtype=float)
    res = linprog(
        c=-np.ones(P.shape[0]),
        A_ub=P.T,
        b_ub=x,
        bounds=[(0, None)] * P.shape[0],
        method="highs",
    )
    if res.status != 0:
        return 0.0
    return float(-res.fun)
