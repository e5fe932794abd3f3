"""Itineraries, critical itineraries and the admissible-word language.

Words are plain strings over ``"0"``/``"1"``; Python's string ordering on
equal-length strings is exactly the lexicographic order used throughout.

A word is admissible when each of its suffixes sits on the correct side of
the critical itineraries: suffixes starting with 0 must not exceed alpha,
suffixes starting with 1 must not fall below beta.  Strictness at the two
endpoints depends on the mask variant and only matters when a suffix is
*equal* to alpha or beta as an infinite sequence.
"""

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Optional, Union

from .errors import DepthError, DomainError, InsufficientData, MaskRangeError, RangeError
from .maps import MaskedSystem, OverlappingIFS, Variant, apply_matrix, as_rational, invert


class Period(NamedTuple):
    preperiod: int
    length: int


class Ordering(Enum):
    LESS = "less"
    EQUAL_TO_DEPTH = "equal-to-depth"
    GREATER = "greater"


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Itinerary:
    """Known prefix of an itinerary plus what the exact orbit revealed.

    ``period`` is set only when an exact orbit state repeated.  ``mask_hits``
    lists the indices ``k < len(prefix)`` where the orbit sat exactly on the
    mask point ``mask_point``; at those indices the shifted itinerary *is*
    a critical itinerary (beta for PLUS, alpha for MINUS).
    """

    prefix: str
    period: Optional[Period] = None
    variant: Optional[Variant] = None
    mask_point: Optional[Fraction] = None
    mask_hits: frozenset = frozenset()

    def __len__(self):
        return len(self.prefix)

    def __str__(self):
        return self.prefix

    def _index(self, i: int) -> Optional[int]:
        if i < len(self.prefix):
            return i
        if self.period is None:
            return None
        pre, length = self.period
        return pre + (i - pre) % length

    def symbol(self, i: int) -> int:
        j = self._index(i)
        if j is None:
            raise DepthError(f"symbol {i} beyond known prefix of length {len(self.prefix)}")
        return 1 if self.prefix[j] == "1" else 0

    def extend(self, n: int) -> str:
        """First ``n`` symbols, using the period certificate past the prefix."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        return "".join(str(self.symbol(i)) for i in range(n))

    def hit_at(self, k: int) -> Optional[bool]:
        if self.variant is None or self.mask_point is None:
            return None
        j = self._index(k)
        if j is None:
            return None
        return j in self.mask_hits


@dataclass(frozen=True)
class CriticalPair:
    alpha: Itinerary
    beta: Itinerary
    q: Fraction
    depth: int

    def __post_init__(self):
        if min(len(self.alpha.prefix), len(self.beta.prefix)) < self.depth:
            raise DepthError(f"critical prefixes shorter than declared depth {self.depth}")


WordLike = Union[str, Itinerary]


def _prefix(w: WordLike) -> str:
    return w.prefix if isinstance(w, Itinerary) else str(w)


def step(system: MaskedSystem, x) -> tuple:
    """One application of the expanding map: ``(symbol, next_point)``."""
    x = as_rational(x)
    if x < 0 or x > 1:
        raise DomainError(f"x = {x} outside [0, 1]")
    symbol = 0 if system.left_cell(x) else 1
    return symbol, invert(system.ifs.branch(symbol), x)


def itinerary(system: MaskedSystem, x, depth: int) -> Itinerary:
    """First ``depth`` symbols of the itinerary of ``x`` by exact iteration.

    Orbit points are kept as reduced integer pairs; a repeated pair proves
    eventual periodicity and the remaining symbols are filled from the cycle.
    """
    if depth < 1:
        raise DepthError("depth must be at least 1")
    x = as_rational(x)
    if x < 0 or x > 1:
        raise DomainError(f"x = {x} outside [0, 1]")
    inv0 = system.ifs.f0.inverse_matrix
    inv1 = system.ifs.f1.inverse_matrix
    qn, qd = system.q.numerator, system.q.denominator
    plus = system.variant is Variant.PLUS
    n, k = x.numerator, x.denominator
    seen = {}
    symbols = []
    hits = set()
    period = None
    for i in range(depth):
        state = (n, k)
        if state in seen:
            start = seen[state]
            period = Period(start, i - start)
            break
        seen[state] = i
        lhs, rhs = n * qd, qn * k
        if lhs == rhs:
            hits.add(i)
        left = lhs < rhs if plus else lhs <= rhs
        if left:
            symbols.append("0")
            n, k = apply_matrix(inv0, n, k)
        else:
            symbols.append("1")
            n, k = apply_matrix(inv1, n, k)
        if n < 0 or n > k:
            raise RangeError(f"orbit left [0, 1] at step {i}; system invariants violated")
    prefix = "".join(symbols)
    if period is not None:
        pre, length = period
        cycle = prefix[pre:]
        cycle_hits = {h - pre for h in hits if h >= pre}
        for m in range(len(prefix), depth):
            j = (m - pre) % length
            symbols.append(cycle[j])
            if j in cycle_hits:
                hits.add(m)
        prefix = "".join(symbols)
    return Itinerary(prefix, period, system.variant, system.q, frozenset(hits))


def critical_itineraries(ifs: OverlappingIFS, q, depth: int) -> CriticalPair:
    """alpha = itinerary of q under MINUS, beta = itinerary of q under PLUS."""
    q = as_rational(q)
    lo, hi = ifs.overlap
    if not lo < q < hi:
        raise MaskRangeError(f"mask point {q} outside the overlap ({lo}, {hi})")
    alpha = itinerary(MaskedSystem(ifs, q, Variant.MINUS), q, depth)
    beta = itinerary(MaskedSystem(ifs, q, Variant.PLUS), q, depth)
    assert alpha.prefix[0] == "0" and beta.prefix[0] == "1"
    return CriticalPair(alpha, beta, q, depth)


def lex_compare(u: WordLike, v: WordLike) -> Ordering:
    """Lexicographic verdict on the common prefix of ``u`` and ``v``."""
    a, b = _prefix(u), _prefix(v)
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL_TO_DEPTH


def _exact_compare(w: Itinerary, k: int, c: Itinerary) -> Optional[int]:
    """Exact sign of ``S^k(w) - c`` when both are eventually periodic."""
    if w.period is None or c.period is None:
        return None
    pre = max(w.period.preperiod - k, 0, c.period.preperiod)
    span = pre + math.lcm(w.period.length, c.period.length)
    for i in range(span):
        a, b = w.symbol(k + i), c.symbol(i)
        if a != b:
            return -1 if a < b else 1
    return 0


def _closed_at(endpoint: str, variant: Variant) -> bool:
    if variant is Variant.CLOSURE:
        return True
    if endpoint == "alpha":
        return variant is Variant.MINUS
    return variant is Variant.PLUS


def is_admissible(w: WordLike, crit: CriticalPair, variant=Variant.CLOSURE) -> Verdict:
    """Interval test on every suffix of ``w`` against ``crit``.

    A suffix that agrees with alpha (or beta) on all of its symbols is a
    valid prefix of admissible strings and passes, unless the agreement is
    known to be exact equality of infinite sequences, in which case the
    endpoint's openness under ``variant`` decides.  Agreement that uses up
    the whole known critical prefix without an exactness certificate gives
    UNKNOWN.
    """
    variant = Variant.parse(variant)
    word = _prefix(w)
    if crit.depth < len(word):
        raise DepthError(f"critical depth {crit.depth} < word length {len(word)}")
    exact_info = (isinstance(w, Itinerary) and w.variant is not None
                  and w.mask_point == crit.q)
    unknown = False
    for k in range(len(word)):
        u = word[k:]
        if u[0] == "0":
            c, name, inside = crit.alpha, "alpha", -1
        else:
            c, name, inside = crit.beta, "beta", 1
        cp = c.prefix[:len(u)]
        if u != cp:
            sign = -1 if u < cp else 1
            if sign != inside:
                return Verdict.NO
            continue
        equal = None
        if exact_info:
            hit = w.hit_at(k)
            if hit:
                hit_name = "beta" if w.variant is Variant.PLUS else "alpha"
                equal = hit_name == name
        if equal is None and isinstance(w, Itinerary):
            sign = _exact_compare(w, k, c)
            if sign is not None:
                if sign != 0:
                    if sign != inside:
                        return Verdict.NO
                    continue
                equal = True
        if equal:
            if not _closed_at(name, variant):
                return Verdict.NO
            continue
        if len(u) >= crit.depth:
            unknown = True
    return Verdict.UNKNOWN if unknown else Verdict.YES


def _advance(state: tuple, s: str, alpha: str, beta: str):
    """Extend a word's match state by symbol ``s``; ``None`` means rejected.

    The state records the lengths of the suffixes that currently equal a
    prefix of alpha (first set) or of beta (second set).  Suffixes already
    strictly inside their interval impose nothing further and are dropped;
    so are matches that exhaust the known critical prefix.
    """
    amatch, bmatch = state
    new_a, new_b = [], []
    for m in amatch:
        if m >= len(alpha):
            continue
        c = alpha[m]
        if s > c:
            return None
        if s == c:
            new_a.append(m + 1)
    for m in bmatch:
        if m >= len(beta):
            continue
        c = beta[m]
        if s < c:
            return None
        if s == c:
            new_b.append(m + 1)
    if s == "0":
        new_a.append(1)
    else:
        new_b.append(1)
    return frozenset(new_a), frozenset(new_b)


_EMPTY_STATE = (frozenset(), frozenset())


def _check_depth(crit: CriticalPair, n: int):
    if n < 0:
        raise DepthError("n must be non-negative")
    if crit.depth < n + 1:
        raise DepthError(f"critical depth {crit.depth} < word length {n + 1}")


def enumerate_words(crit: CriticalPair, variant=Variant.CLOSURE, n: int = 0) -> set:
    """All admissible words of length ``n + 1``, grown by pruned extension.

    Words whose admissibility is UNKNOWN are kept, so the result can only
    over-count.  The prefix languages of the PLUS, MINUS and closure address
    spaces coincide, hence ``variant`` is accepted for symmetry only.
    """
    Variant.parse(variant)
    _check_depth(crit, n)
    alpha, beta = crit.alpha.prefix, crit.beta.prefix
    level = {"": _EMPTY_STATE}
    for _ in range(n + 1):
        nxt = {}
        for word, state in level.items():
            for s in "01":
                st = _advance(state, s, alpha, beta)
                if st is not None:
                    nxt[word + s] = st
        level = nxt
    return set(level)


def count_words(crit: CriticalPair, n_max: int) -> list:
    """``[|W_0|, ..., |W_n_max|]`` where ``W_n`` are the admissible words of length n+1.

    Same transition rule as :func:`enumerate_words`, but words sharing a
    match state are merged, so the cost is polynomial in ``n_max``.
    """
    _check_depth(crit, n_max)
    alpha, beta = crit.alpha.prefix, crit.beta.prefix
    level = Counter({_EMPTY_STATE: 1})
    counts = []
    for _ in range(n_max + 1):
        nxt = Counter()
        for state, mult in level.items():
            for s in "01":
                st = _advance(state, s, alpha, beta)
                if st is not None:
                    nxt[st] += mult
        level = nxt
        counts.append(sum(level.values()))
    return counts


def brute_force_words(crit: CriticalPair, variant=Variant.CLOSURE, n: int = 0) -> set:
    """Test oracle: filter all ``2**(n+1)`` words through :func:`is_admissible`."""
    _check_depth(crit, n)
    out = set()
    for bits in product("01", repeat=n + 1):
        w = "".join(bits)
        if is_admissible(w, crit, variant) is not Verdict.NO:
            out.add(w)
    return out


class EntropyEstimate(NamedTuple):
    n: int
    slope_estimate: float
    ratio_estimate: float


def entropy_estimate(counts, window: int = 10) -> EntropyEstimate:
    """Growth-rate estimates from word counts ``counts[i] = |W_i|``.

    ``slope_estimate = ln(counts[n]) / n`` and ``ratio_estimate`` is the log
    of the mean growth factor over the last ``window`` levels.
    """
    counts = list(counts)
    if len(counts) < 2:
        raise InsufficientData("need counts for at least two word lengths")
    if any(c < 1 for c in counts):
        raise InsufficientData("word counts must be positive")
    n = len(counts) - 1
    m = max(n - window, 0)
    slope = math.log(counts[n]) / n
    ratio = (math.log(counts[n]) - math.log(counts[m])) / (n - m)
    return EntropyEstimate(n, slope, ratio)
