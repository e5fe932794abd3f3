"""Coding maps and fractal transformations between masked overlapping systems.

``h = pi_G o tau_F`` sends a point of [0, 1] to the point of the other
system with the same address.  ``h`` is only ever evaluated pointwise: the
address is computed to a finite depth and the coding map returns the exact
image interval of that prefix, which contains ``h(x)``.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import VariantMismatch
from .maps import MaskedSystem, OverlappingIFS, Variant, as_rational
from .symbolic import CriticalPair, Itinerary, critical_itineraries, itinerary


@dataclass(frozen=True)
class PointEnclosure:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= as_rational(x) <= self.hi

    def to_dict(self) -> dict:
        return {"lo": _fmt(self.lo), "hi": _fmt(self.hi)}


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def coding_point(ifs: OverlappingIFS, w) -> PointEnclosure:
    """``[f_w(0), f_w(1)]``, the image of [0, 1] under the composition along ``w``."""
    word = w.prefix if isinstance(w, Itinerary) else str(w)
    m0, m1 = ifs.f0.matrix, ifs.f1.matrix
    ln, ld, hn, hd = 0, 1, 1, 1
    for s in reversed(word):
        a, b, c, d = m1 if s == "1" else m0
        ln, ld = a * ln + b * ld, c * ln + d * ld
        hn, hd = a * hn + b * hd, c * hn + d * hd
    return PointEnclosure(Fraction(ln, ld), Fraction(hn, hd))


def _check_pair(F: MaskedSystem, G: MaskedSystem):
    if F.variant is not G.variant:
        raise VariantMismatch(f"cannot pair a {F.variant.value} section with a "
                              f"{G.variant.value} one")


def fractal_transform(F: MaskedSystem, G: MaskedSystem, x, depth: int = 48) -> PointEnclosure:
    """Enclosure of ``pi_G(tau_F(x))`` from the first ``depth`` address symbols."""
    _check_pair(F, G)
    w = itinerary(F, x, depth)
    return coding_point(G.ifs, w)


def transform_grid(F: MaskedSystem, G: MaskedSystem, points, depth: int = 48) -> list:
    _check_pair(F, G)
    return [fractal_transform(F, G, x, depth) for x in points]


class Outcome(str, Enum):
    AGREE_TO_DEPTH = "agree-to-depth"
    PROVEN_EQUAL = "proven-equal"
    MISMATCH_AT = "mismatch-at"


@dataclass(frozen=True)
class HomeoVerdict:
    """Result of comparing critical itineraries of two masked systems.

    AGREE_TO_DEPTH is evidence only; MISMATCH_AT is a proof that the
    fractal transformation is not a homeomorphism; PROVEN_EQUAL needs
    matching eventual-period certificates on both sides.
    """

    outcome: Outcome
    depth: int
    index: Optional[int] = None
    which: Optional[str] = None

    @property
    def is_mismatch(self) -> bool:
        return self.outcome is Outcome.MISMATCH_AT

    def to_dict(self) -> dict:
        out = {"outcome": self.outcome.value, "depth": self.depth}
        if self.is_mismatch:
            out.update(index=self.index, which=self.which)
        elif self.outcome is Outcome.AGREE_TO_DEPTH:
            out["caveat"] = ("equality of infinite itineraries is only semi-decidable; "
                             "agreement to finite depth is necessary, not sufficient")
        return out


def _first_difference(u: str, v: str) -> Optional[int]:
    for i, (a, b) in enumerate(zip(u, v)):
        if a != b:
            return i
    return None


def _provably_equal(x: Itinerary, y: Itinerary) -> bool:
    if x.period is None or y.period is None:
        return False
    span = max(x.period.preperiod, y.period.preperiod) + math.lcm(x.period.length,
                                                                  y.period.length)
    return x.extend(span) == y.extend(span)


def compare_critical(cf: CriticalPair, cg: CriticalPair, depth: int) -> HomeoVerdict:
    hits = []
    for name in ("alpha", "beta"):
        x, y = getattr(cf, name), getattr(cg, name)
        i = _first_difference(x.prefix[:depth], y.prefix[:depth])
        if i is not None:
            hits.append((i, name))
    if hits:
        index, which = min(hits)
        return HomeoVerdict(Outcome.MISMATCH_AT, depth, index, which)
    if _provably_equal(cf.alpha, cg.alpha) and _provably_equal(cf.beta, cg.beta):
        return HomeoVerdict(Outcome.PROVEN_EQUAL, depth)
    return HomeoVerdict(Outcome.AGREE_TO_DEPTH, depth)


def check_homeomorphism(F, G, depth: int = 256) -> HomeoVerdict:
    """Compare the critical itineraries of ``F`` (mask ``q``) and ``G`` (mask ``p``).

    ``F`` and ``G`` may be :class:`MaskedSystem` values or ``(ifs, point)``
    pairs; the variant plays no role since both critical itineraries are
    compared.
    """
    cf = critical_itineraries(*_as_pair(F), depth)
    cg = critical_itineraries(*_as_pair(G), depth)
    return compare_critical(cf, cg, depth)


def _as_pair(system):
    if isinstance(system, MaskedSystem):
        return system.ifs, system.q
    ifs, point = system
    return ifs, as_rational(point)


def round_trip(F: MaskedSystem, G: MaskedSystem, x, depth: int = 48) -> PointEnclosure:
    """Apply ``F -> G`` at ``x``, then ``G -> F`` to both ends of the result.

    The returned enclosure is the hull of the two backward images.  When the
    backward transform is monotone and inverts the forward one it contains
    ``x``; a midpoint alone can land across a discontinuity of the section.
    """
    forward = fractal_transform(F, G, x, depth)
    lo = fractal_transform(G, F, forward.lo, depth)
    hi = fractal_transform(G, F, forward.hi, depth)
    return PointEnclosure(min(lo.lo, hi.lo), max(lo.hi, hi.hi))


def address_space_nested(F, G, depth: int = 256) -> bool:
    """Whether the addresses of ``F`` look like a subset of those of ``G``.

    Compares critical itineraries to ``depth``: alpha_F <= alpha_G and
    beta_F >= beta_G.  On such pairs ``pi_G`` restricted to the addresses of
    ``F`` is monotone and ``G -> F`` inverts ``F -> G``.
    """
    cf = critical_itineraries(*_as_pair(F), depth)
    cg = critical_itineraries(*_as_pair(G), depth)
    return cf.alpha.prefix <= cg.alpha.prefix and cf.beta.prefix >= cg.beta.prefix
