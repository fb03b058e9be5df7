"""Self-dual antinorms and autopolar conic polygons in R^2_+.

A self-dual antinorm satisfies f* = f; equivalently its antiball is an
autopolar conic body.  Every self-dual antinorm touches the Euclidean unit
sphere in exactly one direction (the contact point); splitting the orthant
by the ray through that point and pairing an arbitrary admissible piece
with its restricted dual generates them all:

* ``construct1`` glues an antinorm piece f1 on one subcone with the dual of
  f1 restricted to that subcone, producing a self-dual antinorm,
* ``construct2`` builds every autopolar conic polygon as a vertex chain
  A_{-k} ... A_0 ... A_{k-1} in which each new vertex is chosen on the
  polar line of a previously built vertex; the polar line of a point p is
  {<p, x> = 1}, the line orthogonal to Op through the inverse point
  p/|p|^2.  The chain starts at A_0 with |OA_0| = 1, the last vertex A_{-k}
  is pinned to the OY axis, and every output is verified against the
  antipolar oracle rather than trusted.

The only *symmetric* self-dual antinorm on the plane is sqrt(2xy); the
probe at the end of the module quantifies how badly a symmetric candidate
misses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import (
    DimensionMismatchError,
    InfeasibleSeedError,
    NotSelfDualError,
)
from .exprs import ConeSplitAntinorm, PLAntinorm, as_pl, as_point
from .geometry import ConicPolytope, antipolar

__all__ = [
    "AutopolarSeed",
    "ConicPolygon2D",
    "construct2",
    "random_autopolar_seed",
    "construct1",
    "contact_point",
    "closest_antisphere_point",
    "is_selfdual",
    "symmetric_selfdual_probe",
    "SymmetricProbeReport",
]


# ---------------------------------------------------------------------------
# autopolar conic polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AutopolarSeed:
    """Free data of Construction 2.

    ``a0_angle`` fixes A_0 = (cos, sin) on the unit circle; ``step_params``
    are the 2k-2 extension lengths, one per free vertex in build order
    A_{-1}, A_1, A_{-2}, A_2, ...  (the final vertex A_{-k} is not free: it
    is the intersection of the last polar line with the OY axis).  k = 0
    needs no parameters and yields the single-vertex polygon at (1, 0).
    """

    k: int
    a0_angle: float = math.pi / 4
    step_params: tuple = ()

    def __post_init__(self):
        if self.k < 0:
            raise InfeasibleSeedError("k must be nonnegative")
        expected = max(0, 2 * self.k - 2)
        if len(self.step_params) != expected:
            raise InfeasibleSeedError(
                f"k={self.k} needs {expected} step parameters, got {len(self.step_params)}")
        if self.k >= 1 and not (0.0 < self.a0_angle <= math.pi / 2):
            raise InfeasibleSeedError("a0_angle must lie in (0, pi/2]")
        if any(l < 0 for l in self.step_params):
            raise InfeasibleSeedError("step parameters must be nonnegative")


class ConicPolygon2D:
    """Conic polygon given by its ordered vertex chain A_{-k} ... A_{k-1}.

    The boundary consists of the vertical ray up the OY axis from A_{-k},
    the 2k-1 segments of the chain, and the horizontal ray from A_{k-1};
    for k = 0 the single vertex (1, 0) carries both rays.
    """

    def __init__(self, k, vertices):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        expected = 1 if k == 0 else 2 * k
        if V.shape != (expected, 2):
            raise DimensionMismatchError(f"k={k} polygon needs {expected} vertices")
        V.setflags(write=False)
        self.k = int(k)
        self.vertices = V

    @property
    def contact(self):
        """A_0, the unit-length vertex (index k in the chain)."""
        return self.vertices[self.k if self.k > 0 else 0]

    def halfspaces(self):
        V = self.vertices
        if self.k == 0:
            return np.array([[1.0, 0.0]])
        rows = []
        for i in range(len(V) - 1):
            n = np.linalg.solve(np.stack([V[i], V[i + 1]]), np.ones(2))
            rows.append(np.maximum(n, 0.0))
        rows.append(np.array([0.0, 1.0 / V[-1, 1]]))
        return np.array(rows)

    def to_polytope(self):
        P = ConicPolytope(2, halfspaces=self.halfspaces())
        P._vertices = self.vertices
        return P

    def antinorm(self):
        return PLAntinorm(self.halfspaces())

    def __repr__(self):
        return f"ConicPolygon2D(k={self.k}, vertices={self.vertices.tolist()})"


def _extend(current, pole, length):
    """Next chain vertex: on the polar line of ``pole``, ``length`` beyond
    ``current`` away from the perpendicular foot pole/|pole|^2."""
    foot = pole / float(pole @ pole)
    d = current - foot
    n = np.linalg.norm(d)
    if n < 1e-12:
        raise InfeasibleSeedError("degenerate step: vertex at the perpendicular foot")
    return current + (length / n) * d


def _build_chain(seed):
    k = seed.k
    a0 = np.array([math.cos(seed.a0_angle), math.sin(seed.a0_angle)])
    pts = {0: a0}
    params = list(seed.step_params)
    if k >= 2:
        t = np.array([-a0[1], a0[0]])
        pts[-1] = a0 + params.pop(0) * t
        for j in range(1, k):
            pts[j] = _extend(pts[j - 1], pts[-j], params.pop(0))
            if j < k - 1:
                pts[-(j + 1)] = _extend(pts[-j], pts[j], params.pop(0))
        last = pts[k - 1]
        if last[1] <= 1e-12:
            raise InfeasibleSeedError("final polar line misses the OY axis")
        pts[-k] = np.array([0.0, 1.0 / last[1]])
    elif k == 1:
        if a0[1] <= 1e-12:
            raise InfeasibleSeedError("A_0 on the OX axis: polar line misses OY")
        pts[-1] = np.array([0.0, 1.0 / a0[1]])
    return np.array([pts[j] for j in range(-k, k)]) if k >= 1 else a0[None, :]


def _validate_chain(V):
    """Strict convexity and orthant membership of the vertex chain."""
    if V.shape[0] == 1:
        return
    if abs(V[0, 0]) > 1e-12 or V[0, 1] <= 0:
        raise InfeasibleSeedError("A_{-k} must sit on the positive OY axis")
    if np.any(V[1:] <= 1e-12):
        raise InfeasibleSeedError("chain left the open orthant")
    dirs = [np.array([0.0, -1.0])]
    dirs += [V[i + 1] - V[i] for i in range(len(V) - 1)]
    dirs.append(np.array([1.0, 0.0]))
    for u, w in zip(dirs, dirs[1:]):
        if u[0] * w[1] - u[1] * w[0] <= 1e-12:
            raise InfeasibleSeedError("chain is not strictly convex")


def construct2(seed, verify_tol=1e-10):
    """Build the autopolar conic polygon of ``seed`` and verify it.

    k = 0 is the degenerate single-vertex polygon at (1, 0) with antinorm
    f(x, y) = x.  Every output is checked against the antipolar oracle:
    the vertex set of the antipolar must reproduce the polygon within
    ``verify_tol``.
    """
    if seed.k == 0:
        return ConicPolygon2D(0, [[1.0, 0.0]])
    V = _build_chain(seed)
    _validate_chain(V)
    poly = ConicPolygon2D(seed.k, V)
    dual_vertices = antipolar(poly.to_polytope()).vertices()
    if dual_vertices.shape != V.shape or not np.allclose(dual_vertices, V, atol=verify_tol, rtol=0):
        raise InfeasibleSeedError("constructed polygon failed the antipolar oracle")
    return poly


def random_autopolar_seed(k, rng, l_range=(0.12, 1.1), margin=0.02, attempts=300):
    """Sample a feasible seed for ``construct2`` (deterministic given rng).

    Extension lengths are drawn adaptively so the chain keeps a positive
    margin from the orthant boundary; infeasible draws are rejected and
    retried.
    """
    if k == 0:
        return AutopolarSeed(0)
    for _ in range(attempts):
        angle = rng.uniform(0.25, math.pi / 2 - 0.25) if k > 1 else rng.uniform(0.2, math.pi / 2 - 0.05)
        if k == 1:
            return AutopolarSeed(1, angle)
        a0 = np.array([math.cos(angle), math.sin(angle)])
        pts = {0: a0}
        params = []
        ok = True

        def draw(current, direction):
            lo, hi = l_range
            cap = hi
            for c, dc in zip(current, direction):
                if dc < -1e-12:
                    cap = min(cap, 0.9 * (c - margin) / (-dc))
            if cap <= lo:
                return None
            return float(rng.uniform(lo, cap))

        t = np.array([-a0[1], a0[0]])
        l = draw(a0, t)
        if l is None:
            continue
        params.append(l)
        pts[-1] = a0 + l * t
        for j in range(1, k):
            foot = pts[-j] / float(pts[-j] @ pts[-j])
            d = pts[j - 1] - foot
            d /= np.linalg.norm(d)
            l = draw(pts[j - 1], d)
            if l is None:
                ok = False
                break
            params.append(l)
            pts[j] = pts[j - 1] + l * d
            if j < k - 1:
                foot = pts[j] / float(pts[j] @ pts[j])
                d = pts[-j] - foot
                d /= np.linalg.norm(d)
                l = draw(pts[-j], d)
                if l is None:
                    ok = False
                    break
                params.append(l)
                pts[-(j + 1)] = pts[-j] + l * d
        if not ok:
            continue
        seed = AutopolarSeed(k, angle, tuple(params))
        try:
            construct2(seed)
        except InfeasibleSeedError:
            continue
        return seed
    raise InfeasibleSeedError(f"no feasible seed found for k={k}")


# ---------------------------------------------------------------------------
# Construction 1: piece + restricted dual
# ---------------------------------------------------------------------------

def construct1(f1, apex, side="upper", grid_n=20000, verify=True, verify_tol=1e-6):
    """Glue ``f1`` on the subcone K1 with its K1-restricted dual on K2.

    Preconditions (checked on samples): |apex| = 1, f1(apex) = 1 and
    f1(x) <= <apex, x> on K1, i.e. the antisphere of f1 stays behind the
    line orthogonal to the apex ray.  The restricted dual
    f2(x) = inf_{x1 in K1} <x1, x>/f1(x1) is realized by support-function
    minimization over the K1 antisphere.  The glued function is self-dual;
    with ``verify`` a sampled self-duality check runs before returning.
    """
    a = as_point(apex, 2)
    if abs(np.linalg.norm(a) - 1.0) > 1e-9:
        raise ValueError("apex must be a unit vector")
    va = f1.value(a)
    if abs(va - 1.0) > 1e-8:
        raise ValueError(f"f1(apex) = {va!r}, expected 1")
    phi_a = math.atan2(a[1], a[0])
    lo, hi = (phi_a, math.pi / 2) if side == "upper" else (0.0, phi_a)
    phis = np.linspace(lo + 1e-9, hi - 1e-9, 512)
    U = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    vals = f1._values(U)
    lin = U @ a
    bad = vals > lin + 1e-9
    if np.any(bad):
        w = U[np.argmax(vals - lin)]
        raise ValueError(f"precondition f1 <= <apex, .> fails on K1 at {w.tolist()}")
    f = ConeSplitAntinorm(f1, a, side=side, grid_n=grid_n)
    if verify:
        ok, dev = is_selfdual(f, tol=verify_tol, n_grid=160)
        if not ok:
            raise NotSelfDualError(f"glued antinorm failed self-duality: deviation {dev:.3e}")
    return f


# ---------------------------------------------------------------------------
# contact points
# ---------------------------------------------------------------------------

def _polish_tangency(f, phi, delta=2e-4):
    """Sharpen a distance-stationary direction by root-finding.

    Golden section locates a quadratic minimum only to sqrt(machine eps);
    the stationarity condition  grad f(u) . u' = 0  (tangent line orthogonal
    to the ray) is a root problem and recovers the direction to full
    precision whenever the gradient is available analytically.
    """
    from scipy.optimize import brentq

    def g(t):
        u = np.array([math.cos(t), math.sin(t)])
        gr = f.grad(u)
        return float(gr @ np.array([-u[1], u[0]]))

    lo, hi = phi - delta, phi + delta
    try:
        if g(lo) * g(hi) < 0:
            return brentq(g, lo, hi, xtol=1e-15)
    except Exception:
        pass
    return phi


def _segment_closest(p, q):
    """Closest point to the origin on segment [p, q]."""
    d = q - p
    denom = float(d @ d)
    t = 0.0 if denom == 0 else float(np.clip(-(p @ d) / denom, 0.0, 1.0))
    return p + t * d


def _ray_closest(p, direction):
    t = max(0.0, float(-(p @ direction) / (direction @ direction)))
    return p + t * direction


def _pl_boundary_candidates(pl):
    """Closest-point candidates on the antisphere of a 2-d PL antinorm."""
    G = ConicPolytope.from_halfspaces(pl.functionals)
    V = G.vertices()
    cands = [V[i] for i in range(len(V))]
    for i in range(len(V) - 1):
        cands.append(_segment_closest(V[i], V[i + 1]))
    cands.append(_ray_closest(V[0], np.array([0.0, 1.0])))
    cands.append(_ray_closest(V[-1], np.array([1.0, 0.0])))
    return np.array(cands)


def closest_antisphere_point(f, tol=1e-9):
    """The antisphere point nearest the origin, and the runner-up distance.

    Returns ``(point, second_distance)`` where ``second_distance`` is the
    nearest candidate distance outside a small cluster around the winner
    (infinity if there is none).  Works for any antinorm; self-duality is
    not assumed here.
    """
    if f.dim == 2:
        pl = as_pl(f)
        if pl is not None:
            cands = _pl_boundary_candidates(pl)
        else:
            phis = np.linspace(1e-7, math.pi / 2 - 1e-7, 4097)
            U = np.stack([np.cos(phis), np.sin(phis)], axis=1)
            vals = f._values(U)
            with np.errstate(divide="ignore"):
                r = np.where(vals > 1e-15, 1.0 / np.where(vals > 1e-15, vals, 1.0), np.inf)
            interior_min = (r[1:-1] <= r[:-2]) & (r[1:-1] <= r[2:]) & np.isfinite(r[1:-1])
            minima = list(np.nonzero(interior_min)[0] + 1)
            if np.isfinite(r[0]) and r[0] <= r[1]:
                minima.append(0)
            if np.isfinite(r[-1]) and r[-1] <= r[-2]:
                minima.append(len(r) - 1)
            invphi = (math.sqrt(5.0) - 1.0) / 2.0
            cands = []
            for j in minima:
                lo = phis[max(j - 1, 0)]
                hi = phis[min(j + 1, len(phis) - 1)]
                for _ in range(60):
                    c = hi - invphi * (hi - lo)
                    d = lo + invphi * (hi - lo)
                    rc = 1.0 / max(f.value([math.cos(c), math.sin(c)]), 1e-300)
                    rd = 1.0 / max(f.value([math.cos(d), math.sin(d)]), 1e-300)
                    if rc < rd:
                        hi = d
                    else:
                        lo = c
                m = _polish_tangency(f, 0.5 * (lo + hi))
                u = np.array([math.cos(m), math.sin(m)])
                cands.append(u / f.value(u))
            cands = np.array(cands)
    else:
        rng = np.random.default_rng(0)
        U = np.abs(rng.normal(size=(4096, f.dim)))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        U = np.vstack([U, np.eye(f.dim)])
        vals = f._values(U)
        keep = vals > 1e-15
        cands = U[keep] / vals[keep, None]
    dists = np.linalg.norm(cands, axis=1)
    j = int(np.argmin(dists))
    best = cands[j]
    away = np.linalg.norm(cands - best, axis=1) > 1e-6 * (1.0 + dists[j])
    second = float(np.min(dists[away])) if np.any(away) else math.inf
    return best, second


def contact_point(f, tol=1e-9, unique_margin=DEFAULT.contact_unique):
    """The unique point with f(a) = 1 and |a| = 1 of a self-dual antinorm.

    It is the antisphere point closest to the origin; uniqueness is
    verified by requiring every other local closest-point candidate to sit
    strictly outside the unit sphere.  Raises ``NotSelfDualError`` when no
    unit-distance point exists or the minimizer is ambiguous.
    """
    a, second = closest_antisphere_point(f, tol)
    dist = float(np.linalg.norm(a))
    if abs(dist - 1.0) > max(tol, 1e-9):
        raise NotSelfDualError(
            f"closest antisphere point has |a| = {dist!r}; no unit contact point")
    if second < 1.0 + unique_margin:
        raise NotSelfDualError(f"contact point not unique: runner-up at distance {second!r}")
    fa = f.value(a)
    if abs(fa - 1.0) > 1e-7:
        raise NotSelfDualError(f"f(a) = {fa!r} at the contact candidate")
    return a


# ---------------------------------------------------------------------------
# self-duality checks
# ---------------------------------------------------------------------------

def _probe_grid(dim, n):
    """Deterministic interior probe points on the unit simplex, spread
    logarithmically toward the boundary."""
    if dim == 2:
        tau = np.linspace(-14.0, 14.0, n)
        s = 1.0 / (1.0 + np.exp(-tau))
        return np.stack([s, 1.0 - s], axis=1)
    from .duality import _simplex_grid

    res = 2
    while True:
        g = _simplex_grid(dim, res)
        if g.shape[0] >= n:
            return g[:n]
        res += 1


def is_selfdual(f, tol=1e-7, n_grid=1000):
    """Decide f* = f by comparing dual and primal values on a probe grid.

    Piecewise-linear antinorms take the exact dual; everything else uses
    the numeric dual.  Returns ``(verdict, max deviation)``.
    """
    X = _probe_grid(f.dim, n_grid)
    pl = as_pl(f)
    if pl is not None and pl.dim <= 4:
        g = dual_pl_cached(pl)
        dev = float(np.max(np.abs(g._values(X) - pl._values(X))))
        return dev <= tol, dev
    from .duality import _dual2_batch, dual_numeric

    if f.dim == 2:
        fstar = _dual2_batch(f, X)
    else:
        fstar = np.array([dual_numeric(f, row, certify=False) for row in X])
    dev = float(np.max(np.abs(fstar - f._values(X))))
    return dev <= tol, dev


def dual_pl_cached(pl):
    from .duality import dual_pl

    return dual_pl(pl)


@dataclass(frozen=True)
class SymmetricProbeReport:
    symmetric: bool
    symmetry_dev: float
    selfdual: bool
    selfdual_dev: float
    hyperbola_dev: float
    tol: float

    @property
    def passed(self):
        """True when f is symmetric, self-dual and equals sqrt(2xy)."""
        return self.symmetric and self.selfdual and self.hyperbola_dev <= self.tol


def symmetric_selfdual_probe(f, tol=1e-7, n_grid=1000):
    """Probe the unique-symmetric-self-dual property in the plane.

    If ``f`` is symmetric and self-dual it must coincide with sqrt(2xy);
    the report carries the sampled symmetry defect, the self-duality
    deviation and the distance to sqrt(2xy) on a log-uniform antisphere
    grid (log spacing resolves the behavior near the axis rays, where
    polygonal candidates deviate most).
    """
    if f.dim != 2:
        raise DimensionMismatchError("the symmetric probe is 2-dimensional")
    tau = np.linspace(-12.0, 12.0, n_grid)
    phis = np.arctan(np.exp(tau))
    U = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    vals = f._values(U)
    sym_dev = float(np.max(np.abs(vals - f._values(U[:, ::-1]))))
    symmetric = sym_dev <= max(tol, 1e-9)
    ok, sd_dev = is_selfdual(f, tol=max(tol, 1e-7), n_grid=min(n_grid, 1000))
    keep = vals > 1e-15
    S = U[keep] / vals[keep, None]
    hyper = np.abs(1.0 - np.sqrt(2.0 * S[:, 0] * S[:, 1]))
    hyper_dev = float(np.max(hyper)) if len(S) else math.inf
    return SymmetricProbeReport(symmetric, sym_dev, ok, sd_dev, hyper_dev, tol)
