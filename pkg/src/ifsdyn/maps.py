"""Exact increasing contractions on [0, 1] and overlapping two-map IFS.

All coordinates are :class:`fractions.Fraction`.  Two map families are
supported, affine ``x -> a*x + b`` and Moebius ``x -> (a*x + b)/(c*x + d)``;
both invert in closed form, so orbits of the expanding inverse branches stay
exact forever.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainError, MaskRangeError, RangeError, SingularError

RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions, ``"num/den"`` strings (and floats, exactly)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Variant(str, Enum):
    """Which mask cell receives the mask point.

    PLUS uses {[0,q), [q,1]}, MINUS uses {[0,q], (q,1]}.  CLOSURE is only
    meaningful for admissibility tests (union of both address spaces).
    """

    PLUS = "plus"
    MINUS = "minus"
    CLOSURE = "closure"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, Variant):
            return value
        text = str(value).strip().lower()
        aliases = {"+": "plus", "-": "minus"}
        return cls(aliases.get(text, text))


@dataclass(frozen=True)
class MonotoneMap:
    """Affine ``(a, b)`` or Moebius ``(a, b, c, d)`` map with rational coefficients."""

    kind: str
    coeffs: tuple

    def __post_init__(self):
        if self.kind not in ("affine", "moebius"):
            raise DomainError(f"unknown map kind {self.kind!r}")
        expected = 2 if self.kind == "affine" else 4
        if len(self.coeffs) != expected:
            raise DomainError(f"{self.kind} map needs {expected} coefficients")
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))
        if self.kind == "moebius":
            c, d = self.coeffs[2], self.coeffs[3]
            # c*x + d is affine in x, so a sign change on [0,1] shows up at the endpoints
            if d == 0 or c + d == 0 or (d > 0) != (c + d > 0):
                raise SingularError(f"denominator {c}*x + {d} vanishes on [0,1]")

    @classmethod
    def affine(cls, a: RationalLike, b: RationalLike) -> "MonotoneMap":
        return cls("affine", (a, b))

    @classmethod
    def moebius(cls, a: RationalLike, b: RationalLike, c: RationalLike,
                d: RationalLike) -> "MonotoneMap":
        return cls("moebius", (a, b, c, d))

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    @property
    def determinant(self) -> Fraction:
        if self.kind == "affine":
            return self.coeffs[0]
        a, b, c, d = self.coeffs
        return a * d - b * c

    def _raw(self, x: Fraction) -> Fraction:
        if self.kind == "affine":
            a, b = self.coeffs
            return a * x + b
        a, b, c, d = self.coeffs
        return (a * x + b) / (c * x + d)

    def _raw_inverse(self, y: Fraction) -> Fraction:
        if self.kind == "affine":
            a, b = self.coeffs
            return (y - b) / a
        a, b, c, d = self.coeffs
        return (d * y - b) / (a - c * y)

    @property
    def matrix(self) -> tuple:
        """Integer matrix ``(A, B, C, D)`` with ``f(x) = (A*x + B)/(C*x + D)``, ``C*x + D > 0``."""
        if self.kind == "affine":
            a, b = self.coeffs
            c, d = Fraction(0), Fraction(1)
        else:
            a, b, c, d = self.coeffs
        if d < 0:
            a, b, c, d = -a, -b, -c, -d
        return _integer_matrix(a, b, c, d)

    @property
    def inverse_matrix(self) -> tuple:
        a, b, c, d = self.matrix
        # inverse is (d*y - b)/(-c*y + a); a - c*y > 0 on the image since det > 0
        return d, -b, -c, a

    def to_dict(self) -> dict:
        names = "ab" if self.kind == "affine" else "abcd"
        out = {"kind": self.kind}
        out.update({n: format_rational(v) for n, v in zip(names, self.coeffs)})
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MonotoneMap":
        kind = str(data.get("kind", "")).lower()
        names = "ab" if kind == "affine" else "abcd"
        try:
            coeffs = [as_rational(data[n]) for n in names]
        except KeyError as exc:
            raise DomainError(f"map description lacks coefficient {exc}") from None
        return cls(kind, tuple(coeffs))

    def __str__(self):
        if self.kind == "affine":
            a, b = self.coeffs
            return f"{a}*x + {b}"
        a, b, c, d = self.coeffs
        return f"({a}*x + {b})/({c}*x + {d})"


def _integer_matrix(*entries) -> tuple:
    scale = 1
    for e in entries:
        scale = scale * e.denominator // math.gcd(scale, e.denominator)
    ints = [int(e * scale) for e in entries]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints) if g > 1 else tuple(ints)


def apply_matrix(m: tuple, num: int, den: int) -> tuple:
    """Act on ``num/den`` (``den > 0``); returns a reduced pair with positive denominator."""
    a, b, c, d = m
    n, k = a * num + b * den, c * num + d * den
    if k < 0:
        n, k = -n, -k
    g = math.gcd(n, k)
    if g > 1:
        n, k = n // g, k // g
    return n, k


def _check_unit(x) -> Fraction:
    x = as_rational(x)
    if x < 0 or x > 1:
        raise DomainError(f"x = {x} outside [0, 1]")
    return x


def evaluate(fmap: MonotoneMap, x) -> Fraction:
    """Exact value of ``fmap`` at a rational ``x`` in [0, 1]."""
    return fmap._raw(_check_unit(x))


def invert(fmap: MonotoneMap, y) -> Fraction:
    """The unique ``x`` in [0, 1] with ``fmap(x) == y``."""
    y = as_rational(y)
    lo, hi = fmap._raw(ZERO), fmap._raw(ONE)
    if not lo <= y <= hi:
        raise RangeError(f"y = {y} outside the image [{lo}, {hi}]")
    return fmap._raw_inverse(y)


def contraction_factor(fmap: MonotoneMap) -> Fraction:
    """Supremum of the derivative over [0, 1].

    The Moebius derivative ``det/(c*x + d)**2`` is monotone on any interval
    that avoids the pole, so the supremum sits at an endpoint.
    """
    if fmap.kind == "affine":
        return fmap.coeffs[0]
    a, b, c, d = fmap.coeffs
    at0, at1 = d * d, (c + d) * (c + d)
    if at0 == 0 or at1 == 0:
        raise SingularError("denominator vanishes on [0,1]")
    return (a * d - b * c) / min(at0, at1)


@dataclass(frozen=True)
class OverlappingIFS:
    """Two increasing contractions ``f0, f1`` of [0, 1]."""

    f0: MonotoneMap
    f1: MonotoneMap

    @classmethod
    def uniform(cls, a: RationalLike) -> "OverlappingIFS":
        a = as_rational(a)
        return cls(MonotoneMap.affine(a, 0), MonotoneMap.affine(a, 1 - a))

    def branch(self, symbol: int) -> MonotoneMap:
        return self.f1 if symbol else self.f0

    @property
    def overlap(self) -> tuple:
        """Open interval ``(f1(0), f0(1))`` of admissible mask points."""
        return self.f1._raw(ZERO), self.f0._raw(ONE)

    @property
    def max_contraction(self) -> Fraction:
        return max(contraction_factor(self.f0), contraction_factor(self.f1))

    @property
    def equal_ratio(self) -> bool:
        return (self.f0.kind == "affine" and self.f1.kind == "affine"
                and self.f0.coeffs[0] == self.f1.coeffs[0])

    def to_dict(self) -> dict:
        return {"maps": [self.f0.to_dict(), self.f1.to_dict()]}


@dataclass(frozen=True)
class MaskedSystem:
    """An overlapping IFS with mask point ``q`` and mask variant.

    Equivalently the expanding map ``T`` that applies ``f0^-1`` on the left
    mask cell and ``f1^-1`` on the right one.
    """

    ifs: OverlappingIFS
    q: Fraction
    variant: Variant = Variant.PLUS

    def __post_init__(self):
        object.__setattr__(self, "q", as_rational(self.q))
        variant = Variant.parse(self.variant)
        if variant is Variant.CLOSURE:
            raise DomainError("a masked system is either plus or minus")
        object.__setattr__(self, "variant", variant)
        lo, hi = self.ifs.overlap
        if not lo < self.q < hi:
            raise MaskRangeError(f"mask point {self.q} outside the overlap ({lo}, {hi})")

    def with_variant(self, variant) -> "MaskedSystem":
        return MaskedSystem(self.ifs, self.q, Variant.parse(variant))

    def left_cell(self, x: Fraction) -> bool:
        if self.variant is Variant.PLUS:
            return x < self.q
        return x <= self.q


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    equal_ratio: bool

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "equal_ratio": self.equal_ratio,
            "checks": [
                {"axiom": c.name, "passed": c.passed,
                 "values": {k: format_rational(v) for k, v in c.values.items()}}
                for c in self.checks
            ],
        }


def validate(ifs: OverlappingIFS) -> ValidationReport:
    """Check the overlapping-IFS axioms; failures are recorded, not raised."""
    f0, f1 = ifs.f0, ifs.f1
    checks = []
    f0_0, f0_1 = f0._raw(ZERO), f0._raw(ONE)
    f1_0, f1_1 = f1._raw(ZERO), f1._raw(ONE)

    checks.append(AxiomCheck("endpoints fixed", f0_0 == 0 and f1_1 == 1,
                             {"f0(0)": f0_0, "f1(1)": f1_1}))
    checks.append(AxiomCheck("monotone increasing",
                             f0.determinant > 0 and f1.determinant > 0,
                             {"f0 det": f0.determinant, "f1 det": f1.determinant}))
    checks.append(AxiomCheck("maps into [0,1]",
                             0 <= f0_0 and f0_1 <= 1 and 0 <= f1_0 and f1_1 <= 1,
                             {"f0(0)": f0_0, "f0(1)": f0_1, "f1(0)": f1_0, "f1(1)": f1_1}))
    try:
        s0, s1 = contraction_factor(f0), contraction_factor(f1)
        checks.append(AxiomCheck("strict contraction", s0 < 1 and s1 < 1,
                                 {"f0 factor": s0, "f1 factor": s1}))
    except SingularError:
        checks.append(AxiomCheck("strict contraction", False, {}))
    checks.append(AxiomCheck("strict overlap", 0 < f1_0 < f0_1 < 1,
                             {"f1(0)": f1_0, "f0(1)": f0_1}))
    return ValidationReport(tuple(checks), ifs.equal_ratio)


@dataclass(frozen=True)
class UniformSystem:
    """Uniform system ``L0(x) = a*x``, ``L1(x) = a*x + 1 - a`` with mask point ``p``.

    ``a`` and ``p`` are representative rationals (dyadic midpoints when they
    come from a certified root); the optional enclosures bound the true
    values.
    """

    a: Fraction
    p: Fraction
    a_enclosure: Optional[tuple] = None
    p_enclosure: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "p", as_rational(self.p))
        if not HALF < self.a < 1:
            raise DomainError(f"uniform slope {self.a} outside (1/2, 1)")
        if not 1 - self.a < self.p < self.a:
            raise MaskRangeError(f"mask point {self.p} outside (1-a, a)")

    @property
    def ifs(self) -> OverlappingIFS:
        return OverlappingIFS.uniform(self.a)

    def masked(self, variant=Variant.PLUS) -> MaskedSystem:
        return MaskedSystem(self.ifs, self.p, Variant.parse(variant))
