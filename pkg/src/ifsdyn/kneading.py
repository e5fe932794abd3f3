"""Kneading series, its certified smallest root, entropy and the conjugate uniform system.

The kneading series is ``D(x) = sum_n (beta_n - alpha_n) x**n``.  Its smallest
zero ``r`` in (0, 1) gives the topological entropy ``-ln r`` and the slope of
the uniform system conjugate to the overlapping one; the uniform mask point
is ``p = (1 - r) * sum_n alpha_n r**n``.

Certification
-------------
Only finitely many coefficients are known, so every sign statement accounts
for the truncation tail ``x**(N+1)/(1 - x)`` (coefficients lie in {-1,0,1}).
The grid scan runs in float64 with an a-priori Horner rounding bound; every
claim that ends up in a :class:`RootEnclosure` is re-checked either by that
rigorous float bound or by exact integer arithmetic at dyadic points.  When
both critical itineraries are eventually periodic the series is an exact
rational function and its root is isolated exactly.
"""

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import mpmath
import numpy as np
import sympy

from .errors import DomainError, DepthError, LengthMismatch, NoRootFound, NotCertified
from .maps import OverlappingIFS, UniformSystem, Variant, as_rational
from .symbolic import (CriticalPair, EntropyEstimate, Itinerary, Period, count_words,
                       critical_itineraries, entropy_estimate)

DEFAULT_DEPTH = 256
DEFAULT_GRID = 4096
DEFAULT_REFINE = 16
GRID_END = 1 - 2.0 ** -20
CROSS_CHECK_N = 30

_UNIT = 2.0 ** -53
_INFLATE = 1.0 + 1e-9


def precision_bits() -> int:
    """Mantissa width for high-precision values, from ``IFSDYN_PRECISION_BITS``."""
    raw = os.environ.get("IFSDYN_PRECISION_BITS", "128")
    try:
        bits = int(raw)
    except ValueError:
        raise DomainError(f"IFSDYN_PRECISION_BITS={raw!r} is not an integer") from None
    if bits < 64:
        raise DomainError("IFSDYN_PRECISION_BITS must be at least 64")
    return bits


def default_tolerance() -> Fraction:
    return Fraction(1, 2 ** (precision_bits() - 8))


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def _round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


@dataclass(frozen=True)
class KneadingSeries:
    """Coefficients ``beta_n - alpha_n`` for ``n = 0..N``.

    With ``period`` set the coefficient sequence is eventually periodic and
    the series is known exactly, not just its truncation.
    """

    coeffs: tuple
    period: Optional[Period] = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs or self.coeffs[0] != 1:
            raise DomainError("kneading series must start with coefficient +1")
        if any(c not in (-1, 0, 1) for c in self.coeffs):
            raise DomainError("kneading coefficients must lie in {-1, 0, 1}")
        if self.period is not None:
            pre, length = self.period
            if pre + length > len(self.coeffs) or length < 1:
                raise DomainError("period certificate exceeds known coefficients")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> int:
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.period is None:
            raise DepthError(f"coefficient {n} unknown")
        pre, length = self.period
        return self.coeffs[pre + (n - pre) % length]

    def cleared_polynomial(self) -> list:
        """Integer coefficients (low degree first) of ``(1 - x**L) * D(x)``."""
        if self.period is None:
            raise DomainError("only eventually periodic series have a closed form")
        pre, length = self.period
        head = list(self.coeffs[:pre])
        cycle = list(self.coeffs[pre:pre + length])
        out = [0] * (pre + length + 1)
        for n, c in enumerate(head):
            out[n] += c
            out[n + length] -= c
        for j, c in enumerate(cycle):
            out[pre + j] += c
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out


def kneading_series(crit: CriticalPair) -> KneadingSeries:
    """Termwise difference ``beta_n - alpha_n`` of the critical itineraries."""
    a, b = crit.alpha, crit.beta
    if len(a.prefix) != len(b.prefix):
        raise LengthMismatch(f"alpha has {len(a.prefix)} symbols, beta {len(b.prefix)}")
    coeffs = [int(y) - int(x) for x, y in zip(a.prefix, b.prefix)]
    period = None
    if a.period is not None and b.period is not None:
        pre = max(a.period.preperiod, b.period.preperiod)
        length = math.lcm(a.period.length, b.period.length)
        need = pre + length
        if need > len(coeffs):
            coeffs = [b.symbol(n) - a.symbol(n) for n in range(need)]
        period = Period(pre, length)
    return KneadingSeries(tuple(coeffs), period)


def _tail(x, order: int):
    return x ** (order + 1) / (1 - x)


def eval_series(series: KneadingSeries, x) -> tuple:
    """``(value, tail_bound)`` of ``D`` at ``x`` in (0, 1).

    Fractions are evaluated exactly, floats and mpf values in their own
    arithmetic.  A periodic series is summed in closed form with tail 0.
    """
    if isinstance(x, str):
        x = as_rational(x)
    if not 0 < x < 1:
        raise DomainError(f"x = {x} outside (0, 1)")
    if series.period is not None:
        pre, length = series.period
        head = 0
        for c in reversed(series.coeffs[:pre]):
            head = head * x + c
        cyc = 0
        for c in reversed(series.coeffs[pre:pre + length]):
            cyc = cyc * x + c
        value = head + x ** pre * cyc / (1 - x ** length)
        return value, 0 * x
    value = 0
    for c in reversed(series.coeffs):
        value = value * x + c
    return value, _tail(x, series.order)


# -- float scan with rigorous error bounds ------------------------------------

def _horner_float(coeffs: np.ndarray, xs: np.ndarray):
    value = np.zeros_like(xs)
    deriv = np.zeros_like(xs)
    for c in coeffs[::-1]:
        deriv = deriv * xs + value
        value = value * xs + c
    return value, deriv


class _FloatBounds:
    """Rigorous enclosures of ``D`` and ``D'`` at float points (exactly representable)."""

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        self.order = len(coeffs) - 1
        n = self.order + 1
        self.gamma0 = 2 * n * _UNIT / (1 - 2 * n * _UNIT)
        self.gamma1 = 4 * n * _UNIT / (1 - 4 * n * _UNIT)

    def at(self, xs: np.ndarray):
        value, deriv = _horner_float(self.coeffs, xs)
        one_minus = 1.0 - xs
        big_n = self.order
        tail0 = xs ** (big_n + 1) / one_minus
        tail1 = xs ** big_n * ((big_n + 1) - big_n * xs) / one_minus ** 2
        err0 = (self.gamma0 / one_minus + tail0) * _INFLATE + 1e-300
        err1 = (self.gamma1 / one_minus ** 2 + tail1) * _INFLATE + 1e-300
        return value, err0, deriv, err1

    def signs(self, xs: np.ndarray) -> np.ndarray:
        value, err0, _, _ = self.at(xs)
        out = np.zeros(xs.shape, dtype=np.int8)
        out[value - err0 > 0] = 1
        out[value + err0 < 0] = -1
        return out

    def cell_lower(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Lower bound of ``D`` over each cell ``[s, t]`` (second-order Taylor)."""
        value, err0, deriv, err1 = self.at(s)
        h = t - s
        second = 2.0 / (1.0 - t) ** 3 * _INFLATE
        slope = np.minimum(0.0, (deriv - err1) * h)
        return (value - err0) + slope - second * h * h / 2

    def slope_upper(self, s: float, t: float) -> float:
        """Upper bound of ``D'`` over ``[s, t]``."""
        _, _, deriv, err1 = self.at(np.array([s]))
        second = 2.0 / (1.0 - t) ** 3 * _INFLATE
        return float(deriv[0] + err1[0] + second * (t - s))


def _certify_positive(bounds: _FloatBounds, lo: float, hi: float, cells: int = 64,
                      max_rounds: int = 40, max_cells: int = 200000) -> bool:
    """True when ``D > 0`` is proved on all of ``[lo, hi]``."""
    if hi <= lo:
        return True
    edges = np.linspace(lo, hi, cells + 1)
    # linspace points need not be dyadic; snap interior edges to a coarse binary grid
    edges[1:-1] = np.round(edges[1:-1] * 2.0 ** 40) / 2.0 ** 40
    s, t = edges[:-1], edges[1:]
    for _ in range(max_rounds):
        ok = bounds.cell_lower(s, t) > 0
        s, t = s[~ok], t[~ok]
        if s.size == 0:
            return True
        if s.size > max_cells:
            return False
        mid = (s + t) / 2
        if np.any(mid <= s) or np.any(mid >= t):
            return False
        s, t = np.concatenate([s, mid]), np.concatenate([mid, t])
    return False


# -- exact evaluation at rational points --------------------------------------

def _exact_sign(coeffs, x: Fraction) -> int:
    """Sign of the full series at rational ``x`` if the tail cannot flip it, else 0."""
    a, b = x.numerator, x.denominator
    order = len(coeffs) - 1
    acc = 0
    bpow = 1
    # acc = b**N * D_N(a/b) accumulated from the top coefficient down
    for c in reversed(coeffs):
        acc = acc * a + c * bpow
        bpow *= b
    # |tail| = a**(N+1) / (b**N * (b - a)); compare against |acc| / b**N
    if abs(acc) * (b - a) > a ** (order + 1):
        return 1 if acc > 0 else -1
    return 0


def _exact_value(coeffs, x: Fraction) -> Fraction:
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * x + c
    return value


@dataclass(frozen=True)
class RootEnclosure:
    """Interval ``[lo, hi]`` containing the smallest zero of ``D`` in (0, 1).

    ``certified`` means: ``D > 0`` was proved on ``(0, lo]`` and ``D`` has a
    proved sign change (or exact zero) in ``[lo, hi]``.  ``exact`` marks the
    closed-form route for eventually periodic series.
    """

    lo: Fraction
    hi: Fraction
    certified: bool
    exact: bool = False
    evidence: dict = field(default_factory=dict, compare=False)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= as_rational(x) <= self.hi


def _periodic_root(series: KneadingSeries, tol: Fraction) -> RootEnclosure:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(series.cleared_polynomial())), x, domain="ZZ")
    one = sympy.Poly(x - 1, x, domain="ZZ")
    while poly.degree() > 0 and poly.eval(1) == 0:
        poly = poly.quo(one)
    sqf = poly.sqf_part()
    roots = [iv for iv, _ in sqf.intervals(inf=0, sup=1)]
    roots = [(s, t) for s, t in roots if t > 0 and s < 1]
    if not roots:
        raise NoRootFound("closed-form kneading function has no zero in (0, 1)",
                          {"method": "exact", "period": tuple(series.period)})
    s, t = min(roots, key=lambda iv: iv[0])
    if s != t:
        s, t = sqf.refine_root(s, t, eps=sympy.Rational(tol.numerator, tol.denominator))
    lo = Fraction(int(s.p), int(s.q))
    hi = Fraction(int(t.p), int(t.q))
    return RootEnclosure(lo, hi, True, exact=True,
                         evidence={"method": "exact", "period": tuple(series.period)})


def smallest_root(series: KneadingSeries, tol=None, grid: int = DEFAULT_GRID,
                  refine: int = DEFAULT_REFINE) -> RootEnclosure:
    """Certified enclosure of the smallest zero of the kneading series in (0, 1).

    Scans ``grid`` points of ``(0, 1 - 2**-20)``, refines ``refine``-fold
    between the first non-positive sample and the first certified negative
    one, proves positivity to the left, then bisects on exact dyadic signs.
    Raises :class:`NoRootFound` when no negative value can be certified.
    """
    tol = default_tolerance() if tol is None else as_rational(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    if series.period is not None:
        return _periodic_root(series, tol)

    bounds = _FloatBounds(series.coeffs)
    step = GRID_END / grid
    xs = np.arange(1, grid + 1, dtype=np.float64) * step
    signs = bounds.signs(xs)
    evidence = {
        "method": "scan",
        "grid": grid,
        "order": series.order,
        "positive": int(np.sum(signs > 0)),
        "negative": int(np.sum(signs < 0)),
        "undecided": int(np.sum(signs == 0)),
    }
    negatives = np.flatnonzero(signs < 0)
    if negatives.size == 0:
        raise NoRootFound("no certified negative value of the kneading series", evidence)
    j = int(negatives[0])
    i = int(np.flatnonzero(signs != 1)[0])
    left = xs[i - 1] if i > 0 else 0.0
    fine = np.linspace(left, xs[j], (j - i + 1) * refine + 1)
    fine = np.round(fine * 2.0 ** 40) / 2.0 ** 40
    fine = fine[(fine > left) & (fine <= xs[j])]
    fsigns = bounds.signs(fine)
    a = int(np.flatnonzero(fsigns != 1)[0])
    b = int(np.flatnonzero(fsigns < 0)[0])
    u = fine[a - 1] if a > 0 else left
    v = fine[b]
    evidence["bracket"] = (float(u), float(v))

    certified = a == b and _certify_positive(bounds, 0.0, float(u), cells=max(64, i * 2))
    if not certified:
        # a zero exists in [u, v]; without positivity on (0, u] it may not be the smallest
        evidence["reason"] = "positivity left of the bracket not proved"
        return RootEnclosure(Fraction(u), Fraction(v), False, evidence=evidence)

    lo, hi = Fraction(u), Fraction(v)
    coeffs = series.coeffs
    decreasing = bounds.slope_upper(float(lo), float(hi)) < 0
    while not decreasing and hi - lo > tol:
        mid = (lo + hi) / 2
        sgn = _exact_sign(coeffs, mid)
        if sgn < 0:
            hi = mid
        elif sgn > 0 and _certify_positive(bounds, float(lo), float(mid)):
            lo = mid
        else:
            break
        if float(hi) - float(lo) < 2.0 ** -45:
            break
        decreasing = bounds.slope_upper(float(lo), float(hi)) < 0
    evidence["unique_in_bracket"] = bool(decreasing)
    if decreasing:
        while hi - lo > tol:
            mid = (lo + hi) / 2
            sgn = _exact_sign(coeffs, mid)
            if sgn == 0:
                break
            if sgn > 0:
                lo = mid
            else:
                hi = mid
    evidence["resolved"] = hi - lo <= tol
    return RootEnclosure(lo, hi, True, evidence=evidence)


# -- coding map of the uniform IFS --------------------------------------------

def pi_uniform(a, w, depth: Optional[int] = None) -> tuple:
    """``(value, error_bound)`` for ``(1 - a) * sum_k w_k a**k``.

    Finite words are summed through index ``depth`` (default: the last
    symbol) with error ``a**(depth + 1)``; an eventually periodic
    :class:`Itinerary` is summed in closed form with error 0.
    """
    if isinstance(a, str):
        a = as_rational(a)
    if not 0 < a < 1:
        raise DomainError(f"a = {a} outside (0, 1)")
    if isinstance(w, Itinerary) and w.period is not None:
        pre, length = w.period
        head = 0
        for k in range(pre - 1, -1, -1):
            head = head * a + w.symbol(k)
        cyc = 0
        for j in range(length - 1, -1, -1):
            cyc = cyc * a + w.symbol(pre + j)
        value = (1 - a) * (head + a ** pre * cyc / (1 - a ** length))
        return value, 0 * a
    word = w.prefix if isinstance(w, Itinerary) else str(w)
    if depth is None:
        depth = len(word) - 1
    if depth >= len(word):
        raise DepthError(f"depth {depth} needs {depth + 1} symbols, word has {len(word)}")
    total = 0
    for k in range(depth, -1, -1):
        total = total * a + (1 if word[k] == "1" else 0)
    return (1 - a) * total, a ** (depth + 1)


def _pi_enclosure(itin: Itinerary, root: RootEnclosure, bits: int) -> tuple:
    """Outward-rounded enclosure of ``pi_r(itin)`` over ``r`` in the root enclosure.

    ``|d/da pi_a(w)| <= 2/(1 - a)`` bounds the spread over the enclosure.
    """
    mid = root.mid
    if root.lo == root.hi and itin.period is not None:
        value, _ = pi_uniform(mid, itin)
        return value, value
    value, err = pi_uniform(mid, itin, None if itin.period else len(itin.prefix) - 1)
    spread = 2 / (1 - root.hi) * (root.hi - root.lo) / 2
    slack = err + spread
    return _round_down(value - slack, bits), _round_up(value + slack, bits)


# -- entropy and conjugacy ----------------------------------------------------

@dataclass(frozen=True)
class EntropyResult:
    root: RootEnclosure
    entropy: object
    entropy_bounds: tuple
    p: object
    p_enclosure: tuple
    guaranteed: bool
    equal_ratio: bool
    cross_check: Optional[EntropyEstimate]
    critical: CriticalPair = field(repr=False, compare=False)
    series: KneadingSeries = field(repr=False, compare=False)

    @property
    def exact_periodic_root(self) -> bool:
        return self.root.exact

    def to_dict(self) -> dict:
        with mpmath.workprec(precision_bits()):
            out = {
                "r_lo": mpmath.nstr(_mpf(self.root.lo), 40),
                "r_hi": mpmath.nstr(_mpf(self.root.hi), 40),
                "certified": self.root.certified,
                "exact_periodic_root": self.root.exact,
                "entropy": mpmath.nstr(self.entropy, 30),
                "entropy_lo": mpmath.nstr(self.entropy_bounds[0], 30),
                "entropy_hi": mpmath.nstr(self.entropy_bounds[1], 30),
                "p": mpmath.nstr(self.p, 30),
                "p_lo": mpmath.nstr(_mpf(self.p_enclosure[0]), 40),
                "p_hi": mpmath.nstr(_mpf(self.p_enclosure[1]), 40),
                "guaranteed": self.guaranteed,
                "equal_ratio": self.equal_ratio,
            }
        if self.cross_check is not None:
            out["cross_check"] = {"n": self.cross_check.n,
                                  "slope": self.cross_check.slope_estimate,
                                  "ratio": self.cross_check.ratio_estimate}
        return out


def entropy(ifs: OverlappingIFS, q, depth: int = DEFAULT_DEPTH, tol=None,
            grid: int = DEFAULT_GRID, cross_check_n: int = CROSS_CHECK_N) -> EntropyResult:
    """Topological entropy ``-ln r`` of the overlapping system with mask point ``q``.

    ``guaranteed`` is set only for certified roots of equal-ratio affine
    systems; for all other maps the result rests on the root-existence
    assertion that is only known to hold in that class.
    """
    bits = precision_bits()
    crit = critical_itineraries(ifs, q, depth)
    series = kneading_series(crit)
    root = smallest_root(series, tol, grid=grid)
    p_lo, p_hi = _pi_enclosure(crit.alpha, root, bits)
    with mpmath.workprec(bits):
        h = -mpmath.log(_mpf(root.mid))
        bounds = (-mpmath.log(_mpf(root.hi)), -mpmath.log(_mpf(root.lo)))
        p = _mpf((p_lo + p_hi) / 2)
    estimate = None
    n = min(cross_check_n, depth - 1)
    if n >= 1:
        estimate = entropy_estimate(count_words(crit, n))
    equal_ratio = ifs.equal_ratio
    return EntropyResult(root, h, bounds, p, (p_lo, p_hi), root.certified and equal_ratio,
                         equal_ratio, estimate, crit, series)


def conjugate_uniform(ifs: OverlappingIFS, q, depth: int = DEFAULT_DEPTH, tol=None,
                      grid: int = DEFAULT_GRID) -> UniformSystem:
    """Uniform system ``U_(r, p)`` with the same critical itineraries as ``(ifs, q)``."""
    result = entropy(ifs, q, depth, tol, grid, cross_check_n=0)
    return uniform_from_result(result)


def uniform_from_result(result: EntropyResult) -> UniformSystem:
    if not result.root.certified:
        raise NotCertified("smallest kneading root is not certified")
    bits = precision_bits()
    a = result.root.mid
    p = (result.p_enclosure[0] + result.p_enclosure[1]) / 2
    # keep the representatives dyadic and short
    a = _round_down(a, bits) if a.denominator > 1 << bits else a
    p = _round_down(p, bits) if p.denominator > 1 << bits else p
    return UniformSystem(a, p, (result.root.lo, result.root.hi), result.p_enclosure)


# -- replaying the critical itineraries in the uniform system -----------------

MATCH, MISMATCH, INDETERMINATE = "match", "mismatch", "indeterminate"


class ReplayReport(NamedTuple):
    alpha: tuple
    beta: tuple

    @property
    def mismatches(self) -> int:
        return self.alpha.count(MISMATCH) + self.beta.count(MISMATCH)

    @property
    def indeterminate(self) -> int:
        return self.alpha.count(INDETERMINATE) + self.beta.count(INDETERMINATE)

    @property
    def matches(self) -> int:
        return self.alpha.count(MATCH) + self.beta.count(MATCH)


def _uniform_step(symbol: int, lo: Fraction, hi: Fraction, r_lo: Fraction, r_hi: Fraction,
                  bits: int) -> tuple:
    if symbol == 0:
        new_lo, new_hi = lo / r_hi, hi / r_lo
    else:
        new_lo, new_hi = 1 - (1 - lo) / r_lo, 1 - (1 - hi) / r_hi
    new_lo = max(Fraction(0), _round_down(new_lo, bits))
    new_hi = min(Fraction(1), _round_up(new_hi, bits))
    return new_lo, new_hi


def _replay_one(target: Itinerary, variant: Variant, r_enc, p_enc, n: int, bits: int) -> tuple:
    r_lo, r_hi = r_enc
    p_lo, p_hi = p_enc
    statuses = []
    # the orbit starts exactly at the mask point, so the first symbol is the variant's
    symbol = 0 if variant is Variant.MINUS else 1
    statuses.append(MATCH if symbol == target.symbol(0) else MISMATCH)
    lo, hi = p_lo, p_hi
    for i in range(1, n):
        lo, hi = _uniform_step(symbol, lo, hi, r_lo, r_hi, bits)
        expected = target.symbol(i)
        if hi < p_lo:
            symbol = 0
        elif lo > p_hi:
            symbol = 1
        else:
            statuses.append(INDETERMINATE)
            symbol = expected
            continue
        statuses.append(MATCH if symbol == expected else MISMATCH)
    return tuple(statuses)


def replay_critical(uniform: UniformSystem, crit: CriticalPair, n: int = 64) -> ReplayReport:
    """Iterate the mask point of ``uniform`` with interval arithmetic and compare to ``crit``.

    Symbols whose orbit enclosure straddles the mask-point enclosure are
    INDETERMINATE; the orbit then continues on the expected branch.
    """
    if crit.depth < n:
        raise DepthError(f"critical depth {crit.depth} < replay length {n}")
    bits = precision_bits() + 64
    r_enc = uniform.a_enclosure or (uniform.a, uniform.a)
    p_enc = uniform.p_enclosure or (uniform.p, uniform.p)
    alpha = _replay_one(crit.alpha, Variant.MINUS, r_enc, p_enc, n, bits)
    beta = _replay_one(crit.beta, Variant.PLUS, r_enc, p_enc, n, bits)
    return ReplayReport(alpha, beta)
