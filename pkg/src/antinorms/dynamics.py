"""Antinorm-based analysis of nonnegative matrix families.

The lower spectral radius (joint spectral subradius) of a finite family is
rho_check = lim_k min over length-k products of ||A_{d_k} ... A_{d_1}||^{1/k}.
Exact computation is NP-hard already for Boolean matrices, so this module
provides desk-scale bounds and diagnostics:

* ``lsr_upper``  -- certified upper bound  min_w rho(Pi_w)^{1/|w|} over
  words up to a given length (spectral radii of products always bound the
  limit from above); enumeration runs over necklace representatives since
  rho is invariant under cyclic shifts.
* ``lsr_lower_certificate`` -- the certified bound gamma(f) =
  inf_x min_A f(Ax)/f(x) for a supplied antinorm f; any antinorm gives a
  valid lower bound.  For piecewise-linear f the infimum is attained at the
  vertices of the antiball (superadditivity + monotonicity), which makes
  the 2- to 4-dimensional computation exact.
* ``invariant_body_iterate`` -- the positive-hull iteration
  P_{k+1} = co_+ { A P_k } run on the dual side: the vertex set iterated is
  the half-space set of the supplied body and the family acts transposed,
  which is the same object through transpose duality (the support function
  of the iterate is the antinorm iterate min_A f_k(A x) for the original
  family).  Run directly on primal vertices the iteration freezes whenever
  the start body has vertices on invariant coordinate axes, which is why
  the dual side is used.  Returns the final body plus bracketing
  gamma *estimates*: the upper end is certified (best realized word), the
  lower end discounts it by the observed stabilization residual of the
  support ratios and is a diagnostic, not a certificate.
* Lyapunov exponents of random products (Monte-Carlo with per-step sup-norm
  renormalization) and Lyapunov-antinorm / continuous-time switching
  checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.sparse import csr_matrix

from .errors import DegenerateBodyError, DimensionMismatchError, NegativeCoordinateError
from .exprs import PLAntinorm, as_pl
from .geometry import ConicPolytope, positive_hull_value, prune_positive_hull

__all__ = [
    "MatrixFamily",
    "LSRBoundReport",
    "lsr_upper",
    "lsr_lower_certificate",
    "invariant_body_iterate",
    "BodyIterationResult",
    "transpose_extremal_check",
    "TransposeDualityReport",
    "lyapunov_exponent_mc",
    "LyapunovMCResult",
    "lyapunov_antinorm_check",
    "LyapunovAntinormReport",
    "ct_switching_check",
    "CTSwitchingReport",
    "perron_certificate",
]

_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


class MatrixFamily:
    """Finite family of d x d nonnegative matrices, optionally weighted.

    Degeneracy flags are computed on construction: zero rows/columns and
    common invariant coordinate subspaces (detected as proper closed vertex
    sets of the union support digraph, i.e. the digraph not being strongly
    connected).  Operations relying on irreducibility refuse degenerate
    families unless forced.  ``allow_negative`` admits Metzler-type
    matrices for the continuous-time check only.
    """

    def __init__(self, matrices, probabilities=None, allow_negative=False):
        mats = np.asarray(matrices, dtype=float)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[0] < 1:
            raise DimensionMismatchError("matrices must be a nonempty list of square matrices")
        if not allow_negative and np.any(mats < 0):
            raise NegativeCoordinateError("matrix entries must be nonnegative")
        self.matrices = mats
        self.matrices.setflags(write=False)
        self.dim = mats.shape[1]
        self.size = mats.shape[0]
        self.allow_negative = bool(allow_negative)
        if probabilities is not None:
            p = np.asarray(probabilities, dtype=float)
            if p.shape != (self.size,) or np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-12:
                raise ValueError("probabilities must be positive and sum to 1")
            p.setflags(write=False)
        else:
            p = None
        self.probabilities = p
        absm = np.abs(mats)
        self.has_zero_row = bool(np.any(absm.sum(axis=2).min(axis=0) == 0)) or bool(
            np.any((absm.sum(axis=2) == 0)))
        self.has_zero_col = bool(np.any((absm.sum(axis=1) == 0)))
        support = (absm.sum(axis=0) > 0).astype(int)
        n_comp, _ = connected_components(csr_matrix(support), directed=True, connection="strong")
        self.has_common_invariant_subspace = bool(n_comp > 1)

    @property
    def degenerate(self):
        return self.has_zero_row or self.has_zero_col or self.has_common_invariant_subspace

    def transpose(self):
        return MatrixFamily(np.transpose(self.matrices, (0, 2, 1)),
                            self.probabilities, self.allow_negative)

    def scaled(self, lam):
        return MatrixFamily(lam * self.matrices, self.probabilities, self.allow_negative)

    def word_product(self, word):
        """Matrix product of the word, rightmost letter applied first."""
        P = np.eye(self.dim)
        for ch in word:
            idx = _LETTERS.index(ch) if isinstance(ch, str) else int(ch)
            P = self.matrices[idx] @ P
        return P

    def __repr__(self):
        return f"MatrixFamily(m={self.size}, dim={self.dim}, probs={self.probabilities is not None})"


@dataclass(frozen=True)
class LSRBoundReport:
    """Package of lower spectral radius bounds for one family."""

    lower: float
    upper: float
    certificate: PLAntinorm | None
    witness_product: str
    iterations: int
    estimate_low: float = math.nan
    estimate_high: float = math.nan

    def to_dict(self):
        d = {
            "lower": self.lower,
            "upper": self.upper,
            "witness_product": self.witness_product,
            "iterations": self.iterations,
            "estimate_low": self.estimate_low,
            "estimate_high": self.estimate_high,
        }
        if self.certificate is not None:
            d["certificate_functionals"] = self.certificate.functionals.tolist()
        return d

    def table(self):
        rows = [
            ("certified lower", f"{self.lower:.12g}"),
            ("certified upper", f"{self.upper:.12g}"),
            ("witness product", self.witness_product),
            ("estimate bracket", f"[{self.estimate_low:.12g}, {self.estimate_high:.12g}]"),
            ("iterations", str(self.iterations)),
        ]
        w = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


# ---------------------------------------------------------------------------
# word enumeration upper bound
# ---------------------------------------------------------------------------

def _necklaces(n, m):
    """All necklace representatives of length n over an m-letter alphabet
    (Fredricksen-Kessler-Maiorana generation)."""
    a = [0] * (n + 1)
    out = []

    def gen(t, p):
        if t > n:
            if n % p == 0:
                out.append(tuple(a[1:n + 1]))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, m):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    return out


def spectral_radius(M):
    return float(np.max(np.abs(np.linalg.eigvals(M))))


def lsr_upper(family, max_len=8):
    """min over words w (|w| <= max_len) of rho(Pi_w)^{1/|w|} and the word.

    rho(Pi)^{1/k} >= rho_check for every product, so the minimum is a valid
    upper bound; it is exact for families with an optimal periodic word of
    length <= max_len.  Words are enumerated over necklace representatives
    because cyclic shifts leave the spectral radius unchanged, and products
    are normalized per step to avoid overflow.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    m = family.size
    total = sum(m ** k / max(k, 1) for k in range(1, max_len + 1))
    if total > 5e6:
        raise ValueError("word enumeration too large; reduce max_len")
    best = math.inf
    best_word = ""
    mats = family.matrices
    for k in range(1, max_len + 1):
        for word in _necklaces(k, m):
            P = np.eye(family.dim)
            logscale = 0.0
            for idx in word:
                P = mats[idx] @ P
                s = np.max(np.abs(P))
                if s > 1e100 or (0 < s < 1e-100):
                    P /= s
                    logscale += math.log(s)
            rho = spectral_radius(P)
            if rho <= 0 and logscale == 0.0:
                val = 0.0
            else:
                val = math.exp((math.log(max(rho, 1e-300)) + logscale) / k)
            if val < best - 1e-15:
                best = val
                best_word = "".join(_LETTERS[i] for i in word)
    return best, best_word


# ---------------------------------------------------------------------------
# certified lower bound from an antinorm certificate
# ---------------------------------------------------------------------------

def perron_certificate(A):
    """Left Perron functional of a single nonnegative matrix as a PL antinorm.

    f(x) = <u, x> with u^T A = rho u^T satisfies f(Ax) = rho f(x) exactly,
    so it certifies gamma = rho(A) for the one-matrix family.
    """
    w, V = np.linalg.eig(np.asarray(A, dtype=float).T)
    j = int(np.argmax(np.abs(w)))
    u = np.abs(np.real(V[:, j]))
    u = u / max(u.max(), 1e-300)
    return PLAntinorm(u[None, :])


def lsr_lower_certificate(family, f, tol=1e-8, grid_n=4097, refine=True):
    """Certified bound gamma = inf_x min_A f(Ax)/f(x)  (so rho_check >= gamma).

    Piecewise-linear f in dim <= 4: the infimum equals the minimum over the
    vertices of the antiball of f.  For x in the antiball, x is a convex
    combination of vertices plus a nonnegative shift, and superadditivity
    with monotonicity push f(Ax) below the vertex values; the bound is
    therefore exact, not sampled.  Other antinorms fall back to dense
    simplex sampling with golden-section refinement of the best brackets,
    and the result is certified only to the documented sampling density.
    """
    if family.allow_negative:
        raise NegativeCoordinateError("lower bounds require nonnegative matrices")
    pl = as_pl(f)
    mats = family.matrices
    if pl is not None and pl.dim <= 4:
        V = ConicPolytope.from_halfspaces(pl.functionals).vertices()
        vals = np.min(np.stack([pl._values(V @ A.T) for A in mats]), axis=0)
        return float(np.min(vals))
    d = family.dim
    if d == 2:
        t = np.linspace(-16.0, 16.0, grid_n)
        s = 1.0 / (1.0 + np.exp(-t))
        X = np.stack([s, 1.0 - s], axis=1)
    else:
        from .duality import _simplex_grid

        X = _simplex_grid(d, {3: 64, 4: 28}.get(d, 16))
    fx = f._values(X)
    ok = fx > 1e-14
    X, fx = X[ok], fx[ok]
    ratios = np.min(np.stack([f._values(X @ A.T) for A in mats]), axis=0) / fx
    gamma = float(np.min(ratios))
    if refine and d == 2:
        j = int(np.argmin(ratios))
        lo = max(0, j - 1)
        hi = min(len(X) - 1, j + 1)
        tt = np.linspace(t[lo], t[hi], 257)
        ss = 1.0 / (1.0 + np.exp(-tt))
        XX = np.stack([ss, 1.0 - ss], axis=1)
        ffx = f._values(XX)
        keep = ffx > 1e-14
        if np.any(keep):
            rr = np.min(np.stack([f._values(XX[keep] @ A.T) for A in mats]), axis=0) / ffx[keep]
            gamma = min(gamma, float(np.min(rr)))
    return gamma


# ---------------------------------------------------------------------------
# invariant conic body iteration
# ---------------------------------------------------------------------------

@dataclass
class BodyIterationResult:
    """Final iterate and gamma bracket of ``invariant_body_iterate``.

    ``body`` collects the iterated dual-side vertex set W: its positive
    hull is the invariant-body candidate for the transposed family, and the
    PL antinorm with functionals W (``antinorm``) is the extremal-antinorm
    candidate for the original family.  ``gamma_high`` is certified;
    ``gamma_low`` is the stabilization estimate.
    """

    body: ConicPolytope
    gamma_low: float
    gamma_high: float
    antinorm: PLAntinorm
    iterations: int
    support_ratios: list = field(default_factory=list)
    stalled: bool = False


def _aitken_last(seq):
    v = np.asarray(seq, dtype=float)
    while len(v) >= 3:
        d2 = v[2:] - 2 * v[1:-1] + v[:-2]
        ok = np.abs(d2) > 1e-14 * (1.0 + np.abs(v[2:]))
        nxt = v[2:].copy()
        nxt[ok] = v[2:][ok] - (v[2:][ok] - v[1:-1][ok]) ** 2 / d2[ok]
        v = nxt
    return float(v[-1])


def invariant_body_iterate(family, P0, iters=12, max_vertices=600):
    """Positive-hull iteration toward an invariant conic body.

    The vertex set W_0 is the half-space set of ``P0`` and each step maps
    W_{k+1} = prune(co_+ {A^T w : w in W_k}), rescaled by the support ratio
    at the all-ones probe; by transpose duality this realizes
    P_{k+1} = co_+ { A P_k } for the body with half-spaces W_k, and the
    support function h_k(x) = min_w <w, x> obeys the antinorm iteration
    h_{k+1}(x) = min_A h_k(A x) for the *original* family.

    gamma_high is the certified word bound min rho(Pi_w)^{1/|w|} over words
    realized by surviving vertices plus single letters.  gamma_low is
    gamma_high discounted by the residual between the accelerated support
    ratios and gamma_high; it converges to gamma_high when the iteration
    locks onto an optimal periodic word and is reported as an estimate.
    The bracket envelope only tightens with k.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if family.allow_negative:
        raise NegativeCoordinateError("the body iteration requires nonnegative matrices")
    W = np.array(P0.halfspaces, dtype=float, copy=True)
    if W.shape[1] != family.dim:
        raise DimensionMismatchError("body dimension does not match the family")
    probe = np.ones(family.dim)
    s0 = float(np.min(W @ probe))
    if s0 <= 0:
        raise DegenerateBodyError("start body has a zero half-space functional")
    W = W / s0
    words = [()] * W.shape[0]
    ratios = []
    rho_words = {}

    def word_value(word):
        if not word:
            return math.inf
        if word not in rho_words:
            P = family.word_product(word)
            s = float(np.max(np.abs(P)))
            rho = spectral_radius(P / s) * s if s > 0 else 0.0
            rho_words[word] = rho ** (1.0 / len(word)) if rho > 0 else 0.0
        return rho_words[word]

    gamma_high = min(word_value((j,)) for j in range(family.size))
    gamma_low = 0.0
    stalled = False
    k_done = 0
    for k in range(iters):
        cand = np.concatenate([W @ A for A in family.matrices], axis=0)  # rows A^T w
        cand_words = [w + (j,) for j in range(family.size) for w in words]
        nonzero = np.max(np.abs(cand), axis=1) > 1e-300
        cand = cand[nonzero]
        cand_words = [cw for cw, nz in zip(cand_words, nonzero) if nz]
        if cand.shape[0] == 0:
            stalled = True
            break
        pruned = prune_positive_hull(cand)
        if pruned.shape[0] > max_vertices:
            raise DegenerateBodyError(f"vertex explosion at iteration {k}")
        # pruning only drops rows, so each survivor matches a candidate exactly
        new_words = []
        for row in pruned:
            new_words.append(cand_words[int(np.argmin(np.max(np.abs(cand - row), axis=1)))])
        sup = float(np.min(pruned @ probe))
        if not np.isfinite(sup) or sup <= 0:
            stalled = True
            break
        ratios.append(sup)          # previous iterate was normalized to support 1
        W = pruned / sup
        words = new_words
        for w in new_words:
            gamma_high = min(gamma_high, word_value(w))
        k_done = k + 1
        # stabilization estimate: two-step geometric means of the support
        # ratios (handles period-2 alternation), Aitken-accelerated
        if len(ratios) >= 2:
            g2 = [math.sqrt(ratios[i] * ratios[i + 1]) for i in range(len(ratios) - 1)]
            est = _aitken_last(g2[-6:])
        else:
            est = ratios[-1]
        residual = abs(est / gamma_high - 1.0) if gamma_high > 0 else 1.0
        gamma_low = max(gamma_low, gamma_high * max(0.0, 1.0 - residual))
    body = ConicPolytope.from_vertices(W)
    return BodyIterationResult(
        body=body,
        gamma_low=min(gamma_low, gamma_high),
        gamma_high=gamma_high,
        antinorm=PLAntinorm(np.maximum(W, 0.0)),
        iterations=k_done,
        support_ratios=ratios,
        stalled=stalled,
    )


# ---------------------------------------------------------------------------
# transpose duality check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransposeDualityReport:
    gamma_primal: float
    gamma_dual_transposed: float
    body_residual: float
    tol: float
    body_tol: float

    @property
    def gammas_match(self):
        return abs(self.gamma_primal - self.gamma_dual_transposed) <= self.tol

    @property
    def passed(self):
        return self.gammas_match and self.body_residual <= self.body_tol


def transpose_extremal_check(family, f, tol=0.02, body_tol=0.1):
    """Verify extremal-antinorm transpose duality for a near-extremal f.

    If f is extremal for the family then f* is extremal for the transposed
    family with the same gamma (checked within ``tol``).  The companion
    body statement  co_+ {A^T G*} = gamma G*  with G* the antipolar of the
    antiball of f is probed on an interior band of directions and the
    relative support-function residual reported against ``body_tol``; it is
    looser because iterates whose tails keep spreading (families with
    invariant coordinate axes) never equilibrate near the axis directions.
    """
    from .duality import dual_pl

    pl = as_pl(f)
    if pl is None:
        raise TypeError("transpose check needs a piecewise-linear certificate")
    fam_T = family.transpose()
    g1 = lsr_lower_certificate(family, pl)
    g2 = lsr_lower_certificate(fam_T, dual_pl(pl))
    # body statement: G* has vertices = functionals of f (canonical form)
    Vstar = np.array(ConicPolytope.from_halfspaces(pl.functionals).canonical().halfspaces)
    image = prune_positive_hull(np.concatenate([Vstar @ A for A in family.matrices], axis=0))
    if family.dim == 2:
        t = np.linspace(-2.5, 2.5, 41)
        s = 1.0 / (1.0 + np.exp(-t))
        probes = np.stack([s, 1.0 - s], axis=1)
    else:
        rng = np.random.default_rng(0)
        probes = rng.dirichlet(3.0 * np.ones(family.dim), size=48)
    h_img = np.min(probes @ image.T, axis=1)
    h_ref = np.min(probes @ Vstar.T, axis=1)
    gamma_ref = 0.5 * (g1 + g2)
    residual = float(np.max(np.abs(h_img / (gamma_ref * h_ref) - 1.0))) if gamma_ref > 0 else math.inf
    return TransposeDualityReport(g1, g2, residual, tol, body_tol)


# ---------------------------------------------------------------------------
# Lyapunov exponent of random products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LyapunovMCResult:
    estimate: float
    stderr: float
    steps: int
    trials: int
    seed: int


def lyapunov_exponent_mc(family, steps=1000, trials=32, seed=0, force=False):
    """Monte-Carlo estimate of the largest Lyapunov exponent
    lim (1/k) E log ||A_{d_k} ... A_{d_1}||.

    Each trial iterates a vector with per-step sup-norm renormalization
    (the limit is norm-independent and the telescoped log norms equal the
    log of the product norm applied to the start vector).  Deterministic
    for a fixed seed.  Families with zero rows/columns make the estimate
    unreliable and are refused unless ``force``.
    """
    if family.probabilities is None:
        raise ValueError("lyapunov_exponent_mc needs a family with probabilities")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if (family.has_zero_row or family.has_zero_col) and not force:
        raise DegenerateBodyError(
            "family has a zero row or column; the vector iteration may collapse "
            "(pass force=True to override)")
    rng = np.random.default_rng(seed)
    mats = family.matrices
    p = family.probabilities
    vals = np.empty(trials)
    for t in range(trials):
        x = np.ones(family.dim)
        acc = 0.0
        idxs = rng.choice(family.size, size=steps, p=p)
        for i in idxs:
            x = mats[i] @ x
            s = np.max(np.abs(x))
            if s <= 0:
                raise DegenerateBodyError("trajectory collapsed to zero")
            acc += math.log(s)
            x = x / s
        vals[t] = acc / steps
    est = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return LyapunovMCResult(est, stderr, steps, trials, seed)


# ---------------------------------------------------------------------------
# Lyapunov antinorm check for random products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LyapunovAntinormReport:
    min_ratio: float
    max_ratio: float
    verdict: str          # "lyapunov" | "anti_lyapunov" | "inconclusive"
    samples: int
    seed: int


def lyapunov_antinorm_check(family, f, samples=512, seed=0):
    """Range of  prod_j f(A_j x)^{p_j} / f(x)  over sampled antisphere points.

    max < 1 makes f a Lyapunov antinorm for the random product (values
    contract in the probability-weighted geometric mean), min > 1 makes it
    anti-Lyapunov; anything else is inconclusive.
    """
    if family.probabilities is None:
        raise ValueError("the check needs probabilities")
    rng = np.random.default_rng(seed)
    d = family.dim
    X = rng.dirichlet(np.ones(d), size=samples)
    X = np.vstack([X, np.eye(d), np.full((1, d), 1.0 / d)])
    fx = f._values(X)
    keep = fx > 1e-14
    X, fx = X[keep], fx[keep]
    logs = np.zeros(len(X))
    for Aj, pj in zip(family.matrices, family.probabilities):
        vj = f._values(X @ Aj.T)
        good = vj > 0
        logs[~good] = -math.inf
        logs[good] += pj * np.log(vj[good])
    ratios = np.exp(logs) / fx
    mn, mx = float(np.min(ratios)), float(np.max(ratios))
    if mx < 1.0:
        verdict = "lyapunov"
    elif mn > 1.0:
        verdict = "anti_lyapunov"
    else:
        verdict = "inconclusive"
    return LyapunovAntinormReport(mn, mx, verdict, len(X), seed)


# ---------------------------------------------------------------------------
# continuous-time switching check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CTSwitchingReport:
    eps: float
    eps_dual: float
    s: float
    samples: int
    seed: int

    @property
    def lyapunov(self):
        """True when f strictly decreases along every sampled Euler step."""
        return self.eps > 0


def ct_switching_check(family, f, s=1e-3, samples=256, seed=0):
    """Check f(x + s A x) < (1 - eps) f(x) for a continuous-time control set.

    Matrices may be Metzler (negative diagonal); the Euler step I + sA must
    stay nonnegative for the chosen s.  When a positive eps is found the
    dual statement f*(y - s A^T y) >= (1 + eps') f*(y) is verified on the
    same sample budget; the report carries both margins.
    """
    rng = np.random.default_rng(seed)
    d = family.dim
    steps = np.eye(d)[None, :, :] + s * family.matrices
    if np.any(steps < -1e-12):
        raise NegativeCoordinateError(
            f"Euler step I + s A leaves the orthant for s={s}; reduce s")
    steps = np.maximum(steps, 0.0)
    X = rng.dirichlet(np.ones(d), size=samples)
    X = np.vstack([X, np.full((1, d), 1.0 / d)])
    fx = f._values(X)
    keep = fx > 1e-14
    X, fx = X[keep], fx[keep]
    worst = -math.inf
    for S in steps:
        worst = max(worst, float(np.max(f._values(X @ S.T) / fx)))
    eps = 1.0 - worst

    from .duality import _dual2_batch, dual_numeric

    Y = rng.dirichlet(np.ones(d), size=min(samples, 64))
    dual_steps = np.eye(d)[None, :, :] - s * np.transpose(family.matrices, (0, 2, 1))
    dual_steps = np.maximum(dual_steps, 0.0)

    def fstar(P):
        P = np.atleast_2d(P)
        if d == 2:
            return _dual2_batch(f, P, n_coarse=513, iters=80)
        return np.array([dual_numeric(f, row, certify=False) for row in P])

    fy = fstar(Y)
    best_growth = math.inf
    for S in dual_steps:
        vals = fstar(Y @ S.T)
        best_growth = min(best_growth, float(np.min(vals / fy)))
    eps_dual = best_growth - 1.0
    return CTSwitchingReport(float(eps), float(eps_dual), float(s), len(X), seed)
