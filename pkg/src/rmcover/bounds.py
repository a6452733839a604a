"""Bounds on R_t(r, m).

Upper bounds are reported with their floor and lower bounds with their ceiling,
since R_t is an integer. A bound is ``certified`` when it holds at the exact
parameters given; the asymptotic formulas are evaluated with their o(1) and
O(.) terms dropped and are flagged as display-only.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, isqrt

import mpmath

from .exactradius import closed_form_exact
from .rmcode import rm_dimension

ASYMPTOTIC_CAVEAT = "asymptotic form: o(1)/O(.) terms dropped, not a bound at finite m"
SQRT2 = math.sqrt(2.0)
EXACT_BALL_BITS = 1 << 15


@dataclass(frozen=True)
class BoundValue:
    raw: float
    integer_form: int
    certified: bool
    source: str
    kind: str = "upper"
    caveat: str = ""

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "kind": self.kind,
            "raw": self.raw,
            "integer_form": self.integer_form,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class BoundQuery:
    t: int
    r: int
    m: int
    alpha: float = field(init=False)
    s: int = field(init=False)

    def __post_init__(self):
        if self.t < 1 or not 0 <= self.r <= self.m:
            raise ValueError(f"invalid parameters t={self.t}, r={self.r}, m={self.m}")
        object.__setattr__(self, "alpha", self.r / self.m if self.m else 0.0)
        object.__setattr__(self, "s", self.m - self.r)


def _check(t: int, r: int, m: int) -> None:
    BoundQuery(t, r, m)


# ---------------------------------------------------------------- primitives

def ball_volume(q_t: int, n: int, r: int) -> int:
    """Exact size of a radius-r Hamming ball in a q_t-ary space of length n."""
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    total, term = 0, 1
    for i in range(r + 1):
        if i:
            term = term * (n - i + 1) * (q_t - 1) // i
        total += term
    return total


def entropy(q: float, x: float) -> float:
    """q-ary entropy, with 0 log 0 = 0."""
    if q < 2 or not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy undefined for q={q}, x={x}")
    out = 0.0
    if x > 0:
        out += x * math.log(q - 1, q) - x * math.log(x, q)
    if x < 1:
        out -= (1 - x) * math.log(1 - x, q)
    return out


def _real_binom(x: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= (x - i) / (i + 1)
    return out


def krawtchouk(k: int, x: float, n: int, q: int) -> float:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    return sum((-1) ** j * _real_binom(x, j) * _real_binom(n - x, k - j) * (q - 1) ** (k - j)
               for j in range(k + 1))


def _k2_root(n: int, q: int) -> float:
    return (1 - 1 / q) * n - 0.5 + 1 / q - math.sqrt((4 * q - 4) * n + (q - 2) ** 2) / (2 * q)


def krawtchouk_min_root(k: int, n: int, q: int, method: str = "auto", tol: float = 1e-9) -> float:
    """Smallest real root of K_k(.; n, q).

    Degree 2 has a closed form; otherwise (or with ``method="bisect"``) the
    first sign change on a grid of step n/1024 over [0, n] is refined by
    bisection.
    """
    if k < 1:
        raise ValueError("K_0 is constant and has no root")
    if k == 2 and method == "auto":
        return _k2_root(n, q)
    step = n / 1024
    a, fa = 0.0, krawtchouk(k, 0.0, n, q)
    for i in range(1, 1025):
        b = i * step
        fb = krawtchouk(k, b, n, q)
        if fb == 0.0:
            return b
        if (fa < 0) != (fb < 0):
            break
        a, fa = b, fb
    else:
        raise ValueError(f"no sign change of K_{k} found on [0, {n}]")
    while b - a > tol:
        mid = (a + b) / 2
        fm = krawtchouk(k, mid, n, q)
        if fm == 0.0:
            return mid
        if (fa < 0) != (fm < 0):
            b = mid
        else:
            a, fa = mid, fm
    return (a + b) / 2


def _floor_minus_sqrt(a: int, d: int, den: int) -> int:
    """Exact floor((a - sqrt(d)) / den) for integers a, d >= 0, den > 0."""
    s = isqrt(d)
    if s * s == d:
        return (a - s) // den
    f = (a - s - 1) // den
    while True:
        rest = a - den * (f + 1)
        if rest >= 0 and rest * rest >= d:
            f += 1
        else:
            return f


# ----------------------------------------------------------- certified bounds

def _interval_norm(lo: int, hi: int, e: int, prec: int = 160) -> tuple[int, int, int]:
    s = hi.bit_length() - prec
    if s > 0:
        lo >>= s
        hi = -((-hi) >> s)
        e += s
    return lo, hi, e


def _interval_add(x, y):
    (xl, xh, xe), (yl, yh, ye) = x, y
    if xe < ye:
        (xl, xh, xe), (yl, yh, ye) = (yl, yh, ye), (xl, xh, xe)
    shift = xe - ye
    # y has the smaller exponent: round it onto x's grid
    yl2 = yl >> shift
    yh2 = -((-yh) >> shift)
    return _interval_norm(xl + yl2, xh + yh2, xe)


def _ball_radius_reaching(q_t: int, n: int, exponent: int) -> int:
    """Smallest rho with V_{q_t, n, rho} >= 2^exponent, in integer interval arithmetic."""
    if exponent <= EXACT_BALL_BITS:
        target = 1 << exponent
        total, term = 0, 1
        for i in range(n + 1):
            if i:
                term = term * (n - i + 1) * (q_t - 1) // i
            total += term
            if total >= target:
                return i
        raise ValueError("target exceeds the whole space")
    term = (1, 1, 0)
    acc = (1, 1, 0)
    for i in range(n + 1):
        if i:
            lo, hi, e = term
            p = (n - i + 1) * (q_t - 1)
            lo, hi = (lo * p) << 64, (hi * p) << 64
            term = _interval_norm(lo // i, -((-hi) // i), e - 64)
            acc = _interval_add(acc, term)
        lo, hi, e = acc
        if e >= exponent or lo >= 1 << (exponent - e):
            return i
        if hi < 1 << (exponent - e):
            continue
        # undecided: settle with exact arithmetic
        if ball_volume(q_t, n, i) >= 1 << exponent:
            return i
    raise ValueError("target exceeds the whole space")


def lb_ball_covering(t: int, r: int, m: int) -> BoundValue:
    """Smallest rho whose t-metric ball times |C^t| reaches the whole space."""
    _check(t, r, m)
    n = 1 << m
    redundancy = n - rm_dimension(r, m)
    rho = _ball_radius_reaching(1 << t, n, t * redundancy)
    return BoundValue(float(rho), rho, True, "ball-covering", "lower")


def ub_dual_distance(t: int, m: int) -> BoundValue:
    """R_t(1, m) <= x(2, 2^m; 2^t), via dual distance 4."""
    if m < 2 or t < 1:
        raise ValueError("needs m >= 2 and t >= 1")
    n, q = 1 << m, 1 << t
    raw = _k2_root(n, q)
    # 2q * x = 2(q-1)n - q + 2 - sqrt((4q-4)n + (q-2)^2)
    floor = _floor_minus_sqrt(2 * (q - 1) * n - q + 2, (4 * q - 4) * n + (q - 2) ** 2, 2 * q)
    return BoundValue(raw, floor, True, "dual-distance")


def ub_binom(t: int, r: int, m: int) -> BoundValue:
    _check(t, r, m)
    if r < 1:
        raise ValueError("needs r >= 1")
    q = 1 << t
    c = comb(m, r)
    raw = (1 - 1 / q) * (1 << m) - math.sqrt(q - 1) / q * c
    floor = _floor_minus_sqrt((q - 1) << m, (q - 1) * c * c, q)
    return BoundValue(raw, floor, True, "binomial")


def improved_binom_applies(r: int, m: int) -> bool:
    # r <= m / (2 + sqrt 2)  <=>  sqrt(2) r <= m - 2r
    return m >= 3 and r >= 2 and m - 2 * r >= 0 and 2 * r * r <= (m - 2 * r) ** 2


def ub_improved_binom(t: int, r: int, m: int) -> BoundValue | None:
    """The sharpened binomial bound; None outside 2 <= r <= m/(2+sqrt 2), m >= 3."""
    _check(t, r, m)
    if not improved_binom_applies(r, m):
        return None
    with mpmath.workdps(60):
        q = mpmath.mpf(2) ** t
        c = mpmath.sqrt(q - 1) / q
        val = ((1 - 1 / q) * mpmath.mpf(2) ** m
               - c * (1 + mpmath.sqrt(2)) ** (r - 1) * mpmath.mpf(2) ** (mpmath.mpf(m - 1) / 2)
               + c / mpmath.root(2, 4) * r * comb(m, r))
        floor = int(mpmath.floor(val))
        raw = float(val)
    return BoundValue(raw, floor, True, "improved-binomial")


@lru_cache(maxsize=None)
def _dp(t: int, r: int, m: int) -> tuple[int, str]:
    cands: list[tuple[int, str]] = []
    exact = closed_form_exact(t, r, m)
    if exact is not None:
        cands.append((exact, "closed-form"))
    if r == 1 and m >= 2:
        cands.append((ub_dual_distance(t, m).integer_form, "dual-distance"))
    if 1 <= r <= m - 1:
        cands.append((_dp(t, r - 1, m - 1)[0] + _dp(t, r, m - 1)[0], "recursion"))
    if t > 1:
        cands.append((t * _dp(1, r, m)[0], "subadditivity"))
    if r >= 1:
        cands.append((ub_binom(t, r, m).integer_form, "binomial"))
        imp = ub_improved_binom(t, r, m)
        if imp is not None:
            cands.append((imp.integer_form, "improved-binomial"))
    return min(cands, key=lambda c: c[0])


def ub_dp(t: int, r: int, m: int) -> BoundValue:
    """Dynamic program over (r', m') combining every certified bound with the
    (u, u+v) recursion and subadditivity in t."""
    _check(t, r, m)
    val, _ = _dp(t, r, m)
    return BoundValue(float(val), val, True, "recursive-dp")


def certified_upper_bounds(t: int, r: int, m: int) -> list[BoundValue]:
    _check(t, r, m)
    out = []
    exact = closed_form_exact(t, r, m)
    if exact is not None:
        out.append(BoundValue(float(exact), exact, True, "closed-form"))
    if r == 1 and m >= 2:
        out.append(ub_dual_distance(t, m))
    if r >= 1:
        out.append(ub_binom(t, r, m))
        imp = ub_improved_binom(t, r, m)
        if imp is not None:
            out.append(imp)
    out.append(ub_dp(t, r, m))
    return out


def best_upper_bound(t: int, r: int, m: int) -> BoundValue:
    """The smallest certified upper bound available at (t, r, m)."""
    return min(certified_upper_bounds(t, r, m), key=lambda b: b.integer_form)


# --------------------------------------------------------- asymptotic forms

REGIMES = (
    "const-r-upper", "const-r-lower",
    "const-s-upper", "const-s-lower",
    "alpha-high-upper", "alpha-high-lower",
    "alpha-low-upper", "alpha-low-lower",
    "alpha-vlow-upper",
)


def _regime_ok(regime: str, r: int, m: int) -> bool:
    a = r / m if m else 0.0
    if regime.startswith("const-r"):
        return 1 <= r <= m
    if regime.startswith("const-s"):
        return 3 <= m - r <= m
    if regime.startswith("alpha-high"):
        return 0.5 < a < 1
    if regime.startswith("alpha-low"):
        return 0 < a <= 0.5
    if regime == "alpha-vlow-upper":
        return 0 < a < 1 - 1 / SQRT2
    raise ValueError(f"unknown regime {regime!r}; choose from {REGIMES}")


def asymptotic_display(t: int, r: int, m: int, regime: str) -> BoundValue:
    """Leading terms of an asymptotic bound, evaluated at finite (t, r, m)."""
    _check(t, r, m)
    if not _regime_ok(regime, r, m):
        raise ValueError(f"regime {regime!r} does not apply at r={r}, m={m}")
    q = 2.0 ** t
    n = 2.0 ** m
    c = math.sqrt(q - 1) / q
    a = r / m
    s = m - r
    top = (1 - 1 / q) * n
    if regime == "const-r-upper":
        val = top - c * (1 + SQRT2) ** (r - 1) * 2 ** (m / 2)
    elif regime == "const-r-lower":
        val = top - math.sqrt(2 * t * (q - 1) * math.log(2)) / (q * math.sqrt(math.factorial(r))) \
            * m ** (r / 2) * 2 ** (m / 2)
    elif regime == "const-s-upper":
        val = t / math.factorial(s - 2) * m ** (s - 2)
    elif regime == "const-s-lower":
        val = t / math.factorial(s - 1) * m ** (s - 2)
    elif regime == "alpha-high-upper":
        h = entropy(2, a)
        val = t * 4 ** h * 2 ** (m * h)
    elif regime == "alpha-high-lower":
        val = t * math.sqrt((1 - a) / (8 * (a * m) ** 3)) * 2 ** (m * entropy(2, a))
    elif regime == "alpha-low-upper":
        val = top - c / math.sqrt(8 * m * a * (1 - a)) * 2 ** (m * entropy(2, a))
    elif regime == "alpha-low-lower":
        val = top - math.sqrt(2 * t * (q - 1) * math.log(2)) / q * 2 ** (m / 2 * (1 + entropy(2, a)))
    else:  # alpha-vlow-upper
        val = top - c / (2 + SQRT2) * 2 ** (m * (0.5 + a * math.log2(1 + SQRT2)))
    kind = "upper" if regime.endswith("upper") else "lower"
    integer = math.floor(val) if kind == "upper" else math.ceil(val)
    return BoundValue(val, integer, False, regime, kind, ASYMPTOTIC_CAVEAT)


def display_bounds(t: int, r: int, m: int) -> list[BoundValue]:
    """Every applicable display form, minus those that come out negative
    (leading terms far outside their regime say nothing at this point)."""
    rows = [asymptotic_display(t, r, m, g) for g in REGIMES if _regime_ok(g, r, m)]
    return [b for b in rows if b.raw >= 0]


# ------------------------------------------------------------- kappa points

@dataclass(frozen=True)
class KappaPoint:
    rho: float
    rate: float
    r: int
    m: int
    bound: BoundValue

    @property
    def source(self) -> str:
        return f"rm({self.r},{self.m})"


def kappa_points(t: int, m_max: int) -> list[KappaPoint]:
    """(U_t(r,m)/2^m, dim RM(r,m)/2^m) for 2 <= m <= m_max, 1 <= r <= m."""
    if t < 1 or m_max < 2:
        raise ValueError("needs t >= 1 and m_max >= 2")
    pts = []
    for m in range(2, m_max + 1):
        n = 1 << m
        for r in range(1, m + 1):
            b = best_upper_bound(t, r, m)
            if not b.certified:
                raise AssertionError("kappa points must come from certified bounds")
            pts.append(KappaPoint(b.integer_form / n, rm_dimension(r, m) / n, r, m, b))
    return pts


def kappa_entropy_curve(t: int, q: int, rho: float) -> float:
    """1 - H_q(rho / t), the general rate bound this is compared against."""
    limit = t * (1 - 1 / q)
    if not 0 <= rho <= limit + 1e-12:
        raise ValueError(f"rho={rho} outside [0, {limit}]")
    return 1 - entropy(q, min(rho / t, 1 - 1 / q))


def below_entropy(p: KappaPoint, t: int, q: int = 2) -> bool:
    return p.rate < kappa_entropy_curve(t, q, p.rho)


def kappa_csv(t: int, m_max: int, samples: int = 101) -> str:
    """CSV with header rho,rate,source: RM points (tagged ``:below-entropy`` when strictly
    under the entropy curve) followed by sampled entropy-curve rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "rate", "source"])
    for p in kappa_points(t, m_max):
        tag = p.source + (":below-entropy" if below_entropy(p, t) else "")
        w.writerow([f"{p.rho:.6f}", f"{p.rate:.6f}", tag])
    hi = min(t * 0.5, 1.0)
    for i in range(samples):
        rho = hi * i / (samples - 1)
        w.writerow([f"{rho:.6f}", f"{kappa_entropy_curve(t, 2, rho):.6f}", "entropy"])
    return buf.getvalue()
