"""Dyadic box packing of parametric quasi-bounded domains.

``b_j`` counts the dyadic cubes ``Q_{j,m} = [0, 2^-j)^d + 2^-j m`` lying
inside the open domain.  All counts are exact: cusp boundaries are decided
with integer arithmetic (power cusps) or certified interval arithmetic
(log cusps), never by sampling.
"""
from __future__ import annotations

import bisect
import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np
from scipy import integrate, optimize, stats

__all__ = [
    "DomainSpec",
    "BoxPackProfile",
    "BExponentEstimate",
    "GeometryError",
    "ExtentOverflowError",
    "MAX_LEVEL",
    "power_cusp",
    "log_cusp",
    "box",
    "comb_domain",
    "comb_profile_formula",
    "cube_contained",
    "count_inner_cubes",
    "boxpack_profile",
    "estimate_b",
    "estimate_b_via_measure",
    "inner_measure",
    "profile_to_csv",
    "parse_domain_config",
    "domain_from_mapping",
    "worker_count",
]

MAX_LEVEL = 24
MAX_COUNT = 2 ** 62
# comb cubes are shrunk by this factor inside their dyadic cell
COMB_SHRINK = Fraction(1, 2 ** 8)


class GeometryError(ValueError):
    pass


class ExtentOverflowError(GeometryError, OverflowError):
    pass


@dataclass(frozen=True)
class DomainSpec:
    """Parametric domain.

    kinds: ``power_cusp`` (``alpha``), ``log_cusp`` (``beta``), ``box``
    (``sides``, centred at the origin) and ``comb`` (``counts`` of shrunken
    dyadic cubes per level).
    """

    kind: str
    d: int = 2
    alpha: Fraction | None = None
    beta: Fraction | None = None
    sides: tuple = ()
    counts: tuple = ()

    def __post_init__(self):
        if self.kind in ("power_cusp", "log_cusp") and self.d != 2:
            raise GeometryError(f"{self.kind} is planar (d = 2)")
        if self.d < 1:
            raise GeometryError("dimension must be positive")

    # membership of a single point; used by tests as an independent check
    def contains(self, point: Sequence) -> bool:
        pt = [Fraction(c) for c in point]
        if self.kind == "box":
            return all(-a / 2 < c < a / 2 for a, c in zip(self.sides, pt))
        if self.kind == "power_cusp":
            x, y = pt
            if x <= 1:
                return False
            a, b = self.alpha.numerator, self.alpha.denominator
            # |y| < x^(-a/b)  <=>  |y|^b x^a < 1
            return abs(y) ** b * x ** a < 1
        if self.kind == "log_cusp":
            x, y = pt
            return _gt_e(x) and _certify_lt_one(lambda ctx: _log_cusp_lhs(ctx, abs(y), x, self.beta))
        if self.kind == "comb":
            comp = _comb_component(self, pt[0])
            if comp is None:
                return False
            lo, side = comp
            return all(l < c < l + side for l, c in zip(lo, pt))
        raise GeometryError(f"unsupported kind {self.kind!r}")

    @property
    def measure(self) -> Fraction | None:
        """Lebesgue measure when finite and known exactly."""
        if self.kind == "box":
            return math.prod(self.sides, start=Fraction(1))
        if self.kind == "comb":
            return sum((n * (Fraction(1, 2 ** j) * (1 - COMB_SHRINK)) ** self.d
                        for j, n in enumerate(self.counts)), Fraction(0))
        return None

    @property
    def analytic_b(self) -> Fraction | None:
        """Known closed-form box-packing exponent, if any."""
        if self.kind == "box":
            return Fraction(self.d)
        if self.kind == "power_cusp":
            return 1 / self.alpha + 1 if self.alpha < 1 else Fraction(2)
        if self.kind == "log_cusp":
            return Fraction(2)
        return None


def power_cusp(alpha) -> DomainSpec:
    """``{(x, y): |y| < x^-alpha, x > 1}``."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise GeometryError("alpha must be positive")
    return DomainSpec("power_cusp", 2, alpha=alpha)


def log_cusp(beta) -> DomainSpec:
    """``{(x, y): |y| < 1/(x (log x)^beta), x > e}``."""
    beta = Fraction(beta)
    if beta <= 0:
        raise GeometryError("beta must be positive")
    return DomainSpec("log_cusp", 2, beta=beta)


def box(sides=None, d: int | None = None, side=1) -> DomainSpec:
    """Open box centred at the origin."""
    if sides is None:
        sides = (side,) * (d or 2)
    sides = tuple(Fraction(s) for s in sides)
    if any(s <= 0 for s in sides):
        raise GeometryError("box sides must be positive")
    if d is not None and d != len(sides):
        raise GeometryError("d does not match number of sides")
    return DomainSpec("box", len(sides), sides=sides)


def comb_domain(counts: Sequence[int], d: int = 2) -> DomainSpec:
    """Disjoint union of ``counts[j]`` open cubes of side ``2^-j (1 - 2^-8)``.

    Cube number ``i`` (ordered by level) sits centred in the level-``j``
    dyadic cell with corner ``(2i, 0, ..., 0)``, so the cubes run off along
    the first axis, are never adjacent, and every cube of one level has the
    same position relative to the dyadic grid.
    """
    counts = tuple(int(n) for n in counts)
    if any(n < 0 for n in counts):
        raise GeometryError("cube counts must be non-negative")
    if sum(counts) >= 2 ** 53:
        raise GeometryError("placement exhausted: too many cubes for the ray layout")
    if len(counts) > MAX_LEVEL + 1:
        raise GeometryError(f"levels above {MAX_LEVEL} are not supported")
    return DomainSpec("comb", d, counts=counts)


def comb_profile_formula(counts: Sequence[int], d: int, J: int) -> int:
    """Closed-form level-``J`` count of :func:`comb_domain` (independent of the scanner)."""
    total = 0
    for i, n in enumerate(counts):
        g = J - i
        if g <= 0 or n == 0:
            continue
        c = 2 ** g - 2 if g <= 8 else 2 ** (g - 8) * 255 - 1
        total += n * max(c, 0) ** d
    return total


# ---------------------------------------------------------------------------
# interval certification for the log cusp

def _certify_lt_one(expr, max_prec: int = 4096) -> bool:
    """Decide ``expr < 1`` with mpmath interval arithmetic, raising precision as needed."""
    prec = 80
    while prec <= max_prec:
        mpmath.iv.prec = prec
        v = expr(mpmath.iv)
        if v.b < 1:
            return True
        if v.a > 1:
            return False
        prec *= 2
    raise GeometryError("could not certify boundary comparison")


def _log_cusp_lhs(ctx, Y: Fraction, x1: Fraction, beta: Fraction):
    # Y * x1 * (ln x1)^beta, compared with 1
    x = ctx.mpf(x1.numerator) / x1.denominator
    y = ctx.mpf(Y.numerator) / Y.denominator
    b = ctx.mpf(beta.numerator) / beta.denominator
    return y * x * ctx.exp(b * ctx.log(ctx.log(x)))


def _floor_e_times(scale: int) -> int:
    """``floor(scale * e)`` exactly (``e`` is irrational, so no ties)."""
    prec = scale.bit_length() + 80
    with mpmath.workprec(prec):
        return int(mpmath.floor(mpmath.e * scale))


def _gt_e(x: Fraction) -> bool:
    """``x > e`` exactly: ``n/q > e`` iff ``n > floor(q e)``."""
    return x.numerator > _floor_e_times(x.denominator)


# ---------------------------------------------------------------------------
# cube containment

def _check_level(j: int):
    if j < 0:
        raise GeometryError("level must be non-negative")
    if j > MAX_LEVEL:
        raise ExtentOverflowError(f"level {j} above cap {MAX_LEVEL}")


def _axis_count(lo: Fraction, hi: Fraction, j: int) -> int:
    """``#{m : 2^-j m > lo, 2^-j (m+1) <= hi}``."""
    s = 2 ** j
    return max(0, math.floor(hi * s) - math.floor(lo * s) - 1)


def _comb_starts(domain: DomainSpec) -> list[int]:
    starts, acc = [], 0
    for n in domain.counts:
        starts.append(acc)
        acc += n
    return starts


def _comb_component(domain: DomainSpec, x: Fraction):
    """(lower corner, side) of the component whose cell column contains ``x``."""
    i = math.floor(x / 2)
    total = sum(domain.counts)
    if i < 0 or i >= total:
        return None
    starts = _comb_starts(domain)
    level = bisect.bisect_right(starts, i) - 1
    while domain.counts[level] == 0:
        level -= 1
    cell = Fraction(1, 2 ** level)
    off = cell * COMB_SHRINK / 2
    lo = (2 * i + off,) + (off,) * (domain.d - 1)
    return lo, cell * (1 - COMB_SHRINK)


def cube_contained(domain: DomainSpec, j: int, m: Sequence[int]) -> bool:
    """Is ``Q_{j,m} = [0, 2^-j)^d + 2^-j m`` inside the open domain?"""
    _check_level(j)
    m = tuple(int(c) for c in m)
    if len(m) != domain.d:
        raise GeometryError(f"lattice point has {len(m)} coordinates, domain has d = {domain.d}")
    s = 2 ** j
    if domain.kind == "box":
        return all(Fraction(c, s) > -a / 2 and Fraction(c + 1, s) <= a / 2 for a, c in zip(domain.sides, m))
    if domain.kind == "comb":
        comp = _comb_component(domain, Fraction(m[0], s))
        if comp is None:
            return False
        lo, side = comp
        return all(Fraction(c, s) > l and Fraction(c + 1, s) <= l + side for l, c in zip(lo, m))
    if domain.kind in ("power_cusp", "log_cusp"):
        mx, my = m
        # sup |y| over [my, my+1) 2^-j, compared against the profile at the right edge
        k = max(abs(my), abs(my + 1))
        if domain.kind == "power_cusp":
            if mx <= s:
                return False
            a, b = domain.alpha.numerator, domain.alpha.denominator
            return k ** b * (mx + 1) ** a <= s ** (a + b)
        if mx <= _floor_e_times(s):
            return False
        return _certify_lt_one(lambda ctx: _log_cusp_lhs(ctx, Fraction(k, s), Fraction(mx + 1, s), domain.beta))
    raise GeometryError(f"unsupported kind {domain.kind!r}")


# ---------------------------------------------------------------------------
# counting

def worker_count(requested: int | None = None) -> int:
    """Workers for row partitioning; ``NUCEMBED_THREADS`` caps it (0 = auto)."""
    if requested is None:
        env = os.environ.get("NUCEMBED_THREADS", "0").strip() or "0"
        try:
            requested = int(env)
        except ValueError as exc:
            raise GeometryError(f"NUCEMBED_THREADS must be an integer, got {env!r}") from exc
    if requested < 0:
        raise GeometryError("worker count must be >= 0")
    return requested or min(8, os.cpu_count() or 1)


def _iroot(n: int, k: int) -> int:
    """Largest ``u >= 0`` with ``u**k <= n``."""
    if n < 0:
        return -1
    if n < 2 or k == 1:
        return n
    u = int(round(math.exp(math.log(n) / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    while u ** k > n:
        u -= 1
    while (u + 1) ** k <= n:
        u += 1
    return u


def _power_rows(domain: DomainSpec, j: int):
    """(K, f) where ``f(k)`` counts admissible columns in row ``k`` (k = 1..K)."""
    s = 2 ** j
    a, b = domain.alpha.numerator, domain.alpha.denominator
    P = s ** (a + b)

    def cols(k: int) -> int:
        u = _iroot(P // k ** b, a)  # largest right edge index with k^b u^a <= P
        return max(0, u - 1 - s)

    K = _iroot(P // (s + 2) ** a, b)
    return K, cols


def _log_rows(domain: DomainSpec, j: int):
    s = 2 ** j
    beta = domain.beta
    bf = float(beta)
    first_mx = _floor_e_times(s) + 1  # smallest column with left edge > e

    def ok(k: int, u: int) -> bool:
        return _certify_lt_one(lambda ctx: _log_cusp_lhs(ctx, Fraction(k, s), Fraction(u, s), beta))

    def cols(k: int) -> int:
        # largest u with (k/s) * (u/s) * ln(u/s)^beta < 1
        target = s / k
        h = lambda x: x * math.log(x) ** bf - target
        lo = math.e
        if h(lo * (1 + 1e-15)) >= 0:
            xr = lo
        else:
            hi = max(2 * lo, target + 1)
            while h(hi) < 0:
                hi *= 2
            xr = optimize.brentq(h, lo, hi, xtol=1e-14, rtol=1e-15)
        u = max(first_mx + 1, math.floor(xr * s))
        while u > first_mx and not ok(k, u):
            u -= 1
        if u == first_mx:
            return 0
        while ok(k, u + 1):
            u += 1
        return u - first_mx

    # rows exist while k/s < g(first right edge)
    K = math.floor(s / (math.e * 1.0)) + 2
    while K > 0 and cols(K) == 0:
        K -= 1
    return K, cols


def _sum_rows(K: int, cols, workers: int) -> int:
    if K <= 0:
        return 0
    if workers <= 1 or K < 4096:
        return sum(cols(k) for k in range(1, K + 1))
    bounds = np.linspace(1, K + 1, workers + 1).astype(int)
    chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(lambda c: sum(cols(k) for k in range(c[0], c[1])), chunks))
    return sum(parts)


def count_inner_cubes(domain: DomainSpec, j: int, workers: int | None = None) -> int:
    """``b_j``: number of level-``j`` dyadic cubes inside the domain.

    Cusps are sliced along rows of height ``2^-j``; each row's admissible
    columns form an interval whose length has a closed form, so a level
    costs O(#rows) instead of O(#cubes).
    """
    _check_level(j)
    if domain.kind == "box":
        n = math.prod(_axis_count(-a / 2, a / 2, j) for a in domain.sides)
    elif domain.kind == "comb":
        n = 0
        for i, cnt in enumerate(domain.counts):
            if cnt == 0:
                continue
            cell = Fraction(1, 2 ** i)
            off = cell * COMB_SHRINK / 2
            per_axis = _axis_count(off, off + cell * (1 - COMB_SHRINK), j)
            n += cnt * per_axis ** domain.d
    elif domain.kind in ("power_cusp", "log_cusp"):
        K, cols = (_power_rows if domain.kind == "power_cusp" else _log_rows)(domain, j)
        n = 2 * _sum_rows(K, cols, worker_count(workers))
    else:
        raise GeometryError(f"unsupported kind {domain.kind!r}")
    if n > MAX_COUNT:
        raise ExtentOverflowError(f"b_{j} = {n} exceeds 2^62")
    return n


@dataclass(frozen=True)
class BoxPackProfile:
    rows: tuple  # ((j, b_j), ...)
    d: int

    @property
    def levels(self) -> list[int]:
        return [j for j, _ in self.rows]

    @property
    def counts(self) -> list[int]:
        return [b for _, b in self.rows]

    def doubling_violations(self) -> list[int]:
        """Levels ``j`` where ``b_j < 2^d b_{j-1}`` although ``b_{j-1} > 0``."""
        bad = []
        for (j0, b0), (j1, b1) in zip(self.rows, self.rows[1:]):
            if j1 == j0 + 1 and b0 > 0 and b1 < 2 ** self.d * b0:
                bad.append(j1)
        return bad


def boxpack_profile(domain: DomainSpec, j_min: int, j_max: int, workers: int | None = None) -> BoxPackProfile:
    if not 0 <= j_min <= j_max:
        raise GeometryError("need 0 <= j_min <= j_max")
    _check_level(j_max)
    return BoxPackProfile(tuple((j, count_inner_cubes(domain, j, workers)) for j in range(j_min, j_max + 1)),
                          domain.d)


@dataclass(frozen=True)
class BExponentEstimate:
    b_hat: float
    stderr: float
    j_window: tuple
    log_correction_flag: bool
    analytic_b: Fraction | None = None
    log_exponent: float | None = None


def _fit(x: np.ndarray, y: np.ndarray):
    res = stats.linregress(x, y)
    return res.slope, (res.stderr if np.isfinite(res.stderr) else 0.0)


def estimate_b(profile: BoxPackProfile, window: tuple | None = None, analytic_b=None) -> BExponentEstimate:
    """Growth exponent of ``b_j`` from a log2-linear fit.

    The default window is the upper half of the levels with positive count
    (at least three).  When the full profile bends like ``j^k 2^{bj}`` with
    ``k`` of order one, ``log_correction_flag`` is set and the slope is
    taken from the fit that includes the ``log2 j`` term.
    """
    pos = [(j, b) for j, b in profile.rows if b > 0]
    if len(pos) < 3:
        raise GeometryError("need at least three levels with positive counts")
    if window is None:
        half = max(3, math.ceil(len(pos) / 2))
        sel = pos[-half:]
    else:
        sel = [(j, b) for j, b in pos if window[0] <= j <= window[1]]
        if len(sel) < 3:
            raise GeometryError("window holds fewer than three positive levels")
    js = np.array([j for j, _ in sel], dtype=float)
    ys = np.log2([float(b) for _, b in sel])
    slope, se = _fit(js, ys)

    flag, kappa = False, None
    if len(pos) >= 5 and min(j for j, _ in pos) >= 1:
        jf = np.array([j for j, _ in pos], dtype=float)
        bf = np.array([float(b) for _, b in pos])
        kappa, _ = _log_model(jf, np.log2(bf))
        if kappa >= LOG_CORRECTION_MIN:
            # b_j ~ 2^{bj} (A j + B) against a geometric transient
            # 2^{bj} (A + B rho^j); the latter has one parameter more, so the
            # polynomial model is accepted when it is nearly as good and the
            # transient only fits by pretending to be linear (rho close to 1)
            poly = _fit_poly_factor(jf, bf)
            geo = _fit_geometric_factor(jf, bf)
            if poly.cost <= POLY_RSS_RATIO * geo.cost and geo.x[3] >= RHO_LINEAR:
                flag = True
                slope = float(poly.x[0])
                jac = poly.jac
                dof = max(len(jf) - 3, 1)
                cov = np.linalg.pinv(jac.T @ jac) * (2 * poly.cost) / dof
                se = float(math.sqrt(max(cov[0, 0], 0.0)))
    return BExponentEstimate(float(slope), float(se), (int(js[0]), int(js[-1])), flag, analytic_b, kappa)


LOG_CORRECTION_MIN = 0.5


def _log_model(j: np.ndarray, y: np.ndarray):
    """Fit ``y = b j + kappa log2 j + c``; return (kappa, residual sum of squares)."""
    X = np.column_stack([j, np.log2(j), np.ones_like(j)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ coef
    return float(coef[1]), float(r @ r)


POLY_RSS_RATIO = 8.0
RHO_LINEAR = 0.85
_SLOPE_STARTS = np.arange(1.0, 4.01, 0.25)


def _fit_poly_factor(j: np.ndarray, b: np.ndarray):
    y = np.log2(b)

    def res(p):
        return p[0] * j + np.log2(np.maximum(p[1] * j + p[2], 1e-300)) - y

    fits = [optimize.least_squares(res, [s0, 1.0, 1.0], bounds=([0, 0, -np.inf], [16, np.inf, np.inf]))
            for s0 in _SLOPE_STARTS]
    return min(fits, key=lambda r: r.cost)


def _fit_geometric_factor(j: np.ndarray, b: np.ndarray):
    y = np.log2(b)

    def res(p):
        return p[0] * j + np.log2(np.maximum(p[1] + p[2] * p[3] ** (j - j[0]), 1e-300)) - y

    fits = [optimize.least_squares(res, [s0, 1.0, -0.5, r0], bounds=([0, 0, -np.inf, 0], [16, np.inf, np.inf, 0.999]))
            for s0 in _SLOPE_STARTS for r0 in (0.3, 0.6, 0.8)]
    return min(fits, key=lambda r: r.cost)


# ---------------------------------------------------------------------------
# inner-region measure

def _profile_fn(domain: DomainSpec):
    if domain.kind == "power_cusp":
        a = float(domain.alpha)
        return 1.0, (lambda x: x ** -a), (lambda r: r ** (-1.0 / a))
    if domain.kind == "log_cusp":
        b = float(domain.beta)
        g = lambda x: 1.0 / (x * math.log(x) ** b)

        def ginv(r):
            hi = 2 * math.e
            while g(hi) > r:
                hi *= 2
            return optimize.brentq(lambda x: g(x) - r, math.e, hi, xtol=1e-12)

        return math.e, g, ginv
    raise GeometryError(f"inner-region measure not supported for kind {domain.kind!r}")


def inner_measure(domain: DomainSpec, r: float) -> float:
    """``|Omega_r|``, the area of points farther than ``r`` from the boundary."""
    if r <= 0:
        raise GeometryError("r must be positive")
    if domain.kind == "box":
        return float(math.prod(max(Fraction(0), a - 2 * Fraction(r)) for a in domain.sides))
    x0, g, ginv = _profile_fn(domain)

    def half_width(x: float) -> float:
        # largest y with the r-disc around (x, y) below the graph of g
        f = lambda th: g(x + r * math.sin(th)) - r * math.cos(th)
        res = optimize.minimize_scalar(f, bounds=(0.0, math.pi / 2), method="bounded",
                                       options={"xatol": 1e-12})
        return min(res.fun, f(0.0), f(math.pi / 2))

    lo = x0 + r
    if half_width(lo) <= 0:
        return 0.0
    hi = ginv(r)
    while half_width(hi) > 0:
        hi *= 2
    X = optimize.brentq(half_width, lo, hi, xtol=1e-12 * hi)
    # integrate in log x so long thin tails are resolved
    fn = lambda s: max(half_width(math.exp(s)), 0.0) * math.exp(s)
    a, b = math.log(lo), math.log(X)
    pts = np.linspace(a, b, 17)
    total = sum(integrate.quad(fn, u, v, limit=200, epsabs=0, epsrel=1e-9)[0] for u, v in zip(pts, pts[1:]))
    return 2.0 * total


DEFAULT_R_GRID = tuple(2.0 ** -k for k in range(6, 15))


def estimate_b_via_measure(domain: DomainSpec, r_grid: Iterable[float] = DEFAULT_R_GRID) -> BExponentEstimate:
    """``d + |slope|`` of ``log2 |Omega_r|`` against ``log2 r`` as ``r -> 0``."""
    if domain.kind == "comb":
        raise GeometryError("inner-region measure not supported for comb domains")
    rs = sorted(float(r) for r in r_grid)
    if len(rs) < 3:
        raise GeometryError("need at least three radii")
    meas = [inner_measure(domain, r) for r in rs]
    if min(meas) <= 0:
        raise GeometryError("inner region empty for some radius; use smaller radii")
    x = np.log2(rs)
    y = np.log2(meas)
    slope, se = _fit(x, y)
    ks = (int(round(-x[-1])), int(round(-x[0])))
    return BExponentEstimate(domain.d + abs(float(slope)), float(se), ks, False, domain.analytic_b)


# ---------------------------------------------------------------------------
# I/O

def profile_to_csv(profile: BoxPackProfile) -> str:
    """CSV with header ``j,b_j,log2bj_over_j`` (shortest round-trip floats)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "b_j", "log2bj_over_j"])
    for j, b in profile.rows:
        ratio = math.log2(b) / j if (b > 0 and j > 0) else math.nan
        w.writerow([j, b, repr(float(ratio))])
    return buf.getvalue()


def _parse_fraction(text: str) -> Fraction:
    t = text.strip()
    if "." in t or "e" in t.lower():
        raise GeometryError(f"decimal {text!r} rejected; use an exact fraction")
    return Fraction(t)


def domain_from_mapping(cfg: dict) -> DomainSpec:
    """Build a domain from flat keys: kind, alpha | beta | side(s) | counts, d."""
    kind = str(cfg.get("kind", "")).strip()
    d = int(cfg["d"]) if cfg.get("d") not in (None, "") else None
    if kind == "power_cusp":
        return power_cusp(_parse_fraction(str(cfg["alpha"])))
    if kind == "log_cusp":
        return log_cusp(_parse_fraction(str(cfg["beta"])))
    if kind == "box":
        if cfg.get("sides"):
            return box([_parse_fraction(s) for s in str(cfg["sides"]).split(",")], d)
        return box(side=_parse_fraction(str(cfg.get("side", "1"))), d=d or 2)
    if kind == "comb":
        return comb_domain([int(n) for n in str(cfg["counts"]).split(",") if n.strip()], d or 2)
    raise GeometryError(f"unknown domain kind {kind!r}")


def parse_domain_config(text: str) -> DomainSpec:
    """Parse ``key = value`` lines (``#`` comments allowed)."""
    cfg = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise GeometryError(f"line {ln}: expected key = value")
        k, v = line.split("=", 1)
        cfg[k.strip()] = v.strip()
    return domain_from_mapping(cfg)
