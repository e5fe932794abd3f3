import math
from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, settings, strategies as st

from testsystems import MOEBIUS, MOEBIUS_Q

from ifsdyn.errors import DepthError, InsufficientData, MaskRangeError
from ifsdyn.maps import MaskedSystem, OverlappingIFS, Variant, evaluate
from ifsdyn.symbolic import (CriticalPair, Itinerary, Ordering, Period, Verdict,
                             brute_force_words, count_words, critical_itineraries,
                             entropy_estimate, enumerate_words, is_admissible, itinerary,
                             lex_compare, step)

U7 = OverlappingIFS.uniform(Q(7, 10))
U3 = OverlappingIFS.uniform(Q(3, 5))


def slow_itinerary(system, x, depth):
    """Oracle: repeated single steps, no period detection."""
    out = []
    for _ in range(depth):
        s, x = step(system, x)
        out.append(str(s))
    return "".join(out)


def periodic(head, cycle, depth):
    body = head + cycle * depth
    return Itinerary(body[:depth], Period(len(head), len(cycle)))


# alpha = 0111..., beta = 1000...
FULL = CriticalPair(periodic("0", "1", 64), periodic("1", "0", 64), Q(1, 2), 64)


def test_step_examples():
    assert step(MaskedSystem(U7, Q(1, 2), Variant.PLUS), Q(1, 2)) == (1, Q(2, 7))
    assert step(MaskedSystem(U7, Q(1, 2), Variant.MINUS), Q(1, 2)) == (0, Q(5, 7))
    assert step(MaskedSystem(MOEBIUS, MOEBIUS_Q), 0) == (0, 0)


def test_fixed_points_are_periodic():
    system = MaskedSystem(U7, Q(1, 2))
    zero, one = itinerary(system, 0, 20), itinerary(system, 1, 20)
    assert zero.prefix == "0" * 20 and zero.period == (0, 1)
    assert one.prefix == "1" * 20 and one.period == (0, 1)


def test_itinerary_matches_stepwise_oracle():
    system = MaskedSystem(U7, Q(1, 2))
    w = itinerary(system, Q(1, 2), 8)
    assert w.prefix[:2] == "10"
    assert w.prefix == slow_itinerary(system, Q(1, 2), 8)


def test_critical_prefixes_match_oracle():
    for ifs, q, depth in ((U3, Q(1, 2), 12), (MOEBIUS, MOEBIUS_Q, 32), (U7, Q(1, 2), 40)):
        crit = critical_itineraries(ifs, q, depth)
        assert crit.alpha.prefix == slow_itinerary(MaskedSystem(ifs, q, Variant.MINUS), q, depth)
        assert crit.beta.prefix == slow_itinerary(MaskedSystem(ifs, q, Variant.PLUS), q, depth)
        assert crit.alpha.prefix[0] == "0" and crit.beta.prefix[0] == "1"
        assert 0 in crit.alpha.mask_hits and 0 in crit.beta.mask_hits


def test_critical_rejects_mask_outside_overlap():
    with pytest.raises(MaskRangeError):
        critical_itineraries(U7, Q(1, 5), 10)


def test_periodic_orbit_detected_exactly():
    # 3/5 -> 9/10 -> 4/5 -> 3/5 under the minus section
    from ifsdyn.maps import MonotoneMap
    skew = OverlappingIFS(MonotoneMap.affine(Q(2, 3), 0), MonotoneMap.affine(Q(1, 2), Q(1, 2)))
    alpha = critical_itineraries(skew, Q(3, 5), 30).alpha
    assert alpha.period == (0, 3)
    assert alpha.prefix == "011" * 10
    assert sorted(alpha.mask_hits) == list(range(0, 30, 3))


def test_lex_compare_examples():
    assert lex_compare("01", "10") is Ordering.LESS
    assert lex_compare("0110", "0110") is Ordering.EQUAL_TO_DEPTH
    assert lex_compare("0" * 12, "1") is Ordering.LESS
    assert lex_compare("1", "0" * 12) is Ordering.GREATER


def test_full_shift_admits_everything():
    for n in range(1, 9):
        words = brute_force_words(FULL, Variant.CLOSURE, n - 1)
        assert len(words) == 2 ** n
    assert len(enumerate_words(FULL, Variant.CLOSURE, 3)) == 16
    for bits in range(2 ** 6):
        w = format(bits, "06b")
        assert is_admissible(w, FULL, Variant.CLOSURE) is Verdict.YES


def test_critical_itineraries_lie_on_the_correct_side():
    crit = critical_itineraries(U7, Q(1, 2), 64)
    alpha = itinerary(MaskedSystem(U7, Q(1, 2), Variant.MINUS), Q(1, 2), 40)
    beta = itinerary(MaskedSystem(U7, Q(1, 2), Variant.PLUS), Q(1, 2), 40)
    assert is_admissible(alpha, crit, Variant.MINUS) is Verdict.YES
    assert is_admissible(alpha, crit, Variant.PLUS) is Verdict.NO
    assert is_admissible(beta, crit, Variant.PLUS) is Verdict.YES
    assert is_admissible(beta, crit, Variant.MINUS) is Verdict.NO
    # as plain words they are only prefixes of admissible strings
    assert is_admissible(alpha.prefix, crit, Variant.PLUS) is Verdict.YES


def test_unknown_when_known_prefix_is_exhausted():
    crit = critical_itineraries(U7, Q(1, 2), 10)
    assert is_admissible(crit.alpha.prefix, crit) is Verdict.UNKNOWN
    with pytest.raises(DepthError):
        is_admissible("0" * 11, crit)


def test_words_beyond_alpha_rejected():
    crit = critical_itineraries(U7, Q(1, 2), 32)
    a = crit.alpha.prefix
    i = a.index("0", 1)
    too_big = a[:i] + "1"
    assert is_admissible(too_big, crit) is Verdict.NO


def test_enumeration_base_cases():
    crit = critical_itineraries(MOEBIUS, MOEBIUS_Q, 16)
    assert enumerate_words(crit, n=0) == {"0", "1"}
    assert count_words(crit, 0) == [2]


def test_counts_match_enumeration():
    crit = critical_itineraries(U3, Q(11, 20), 32)
    counts = count_words(crit, 12)
    assert counts == [len(enumerate_words(crit, n=n)) for n in range(13)]


def test_enumeration_matches_oracle_u35():
    crit = critical_itineraries(U3, Q(1, 2), 32)
    assert enumerate_words(crit, Variant.PLUS, 10) == brute_force_words(crit, Variant.PLUS, 10)


def test_entropy_estimate_examples():
    est = entropy_estimate([2 ** (n + 1) for n in range(31)])
    assert est.ratio_estimate == pytest.approx(math.log(2))
    assert est.slope_estimate == pytest.approx(math.log(2), rel=0.05)
    assert entropy_estimate([2, 3]).slope_estimate == pytest.approx(math.log(3))
    with pytest.raises(InsufficientData):
        entropy_estimate([2])


def test_entropy_estimate_uniform():
    crit = critical_itineraries(U7, Q(1, 2), 64)
    est = entropy_estimate(count_words(crit, 30))
    assert est.ratio_estimate == pytest.approx(-math.log(0.7), abs=0.01)


# -- properties over random uniform systems -----------------------------------

@st.composite
def masked_uniform(draw):
    a = draw(st.fractions(min_value=Q(11, 20), max_value=Q(9, 10), max_denominator=50))
    q = draw(st.fractions(min_value=1 - a, max_value=a, max_denominator=200))
    assume(1 - a < q < a)
    return OverlappingIFS.uniform(a), q


points = st.fractions(min_value=0, max_value=1, max_denominator=10 ** 5)
variants = st.sampled_from([Variant.PLUS, Variant.MINUS])


@settings(max_examples=60, deadline=None)
@given(masked_uniform(), points, points, variants)
def test_sections_are_monotone(sys_q, x, y, variant):
    ifs, q = sys_q
    assume(x < y)
    system = MaskedSystem(ifs, q, variant)
    assert lex_compare(itinerary(system, x, 48), itinerary(system, y, 48)) is not Ordering.GREATER
    minus = itinerary(MaskedSystem(ifs, q, Variant.MINUS), y, 48)
    plus = itinerary(MaskedSystem(ifs, q, Variant.PLUS), x, 48)
    assert lex_compare(minus, plus) is not Ordering.LESS


@settings(max_examples=60, deadline=None)
@given(masked_uniform(), points, variants)
def test_orbits_are_admissible(sys_q, x, variant):
    ifs, q = sys_q
    crit = critical_itineraries(ifs, q, 128)
    w = itinerary(MaskedSystem(ifs, q, variant), x, 40)
    assert is_admissible(w, crit, variant) is Verdict.YES


@settings(max_examples=25, deadline=None)
@given(masked_uniform(), st.integers(min_value=0, max_value=8))
def test_enumeration_matches_oracle(sys_q, n):
    ifs, q = sys_q
    crit = critical_itineraries(ifs, q, 32)
    assert enumerate_words(crit, n=n) == brute_force_words(crit, n=n)


@settings(max_examples=25, deadline=None)
@given(masked_uniform())
def test_shift_invariance(sys_q):
    ifs, q = sys_q
    crit = critical_itineraries(ifs, q, 32)
    previous = enumerate_words(crit, n=0)
    for n in range(1, 10):
        words = enumerate_words(crit, n=n)
        assert {w[1:] for w in words} <= previous
        previous = words


def _agreement(u, v):
    for i, (a, b) in enumerate(zip(u, v)):
        if a != b:
            return i
    return min(len(u), len(v))


@pytest.mark.parametrize("word", ["0", "1", "01", "10", "110"])
def test_itineraries_are_continuous_from_the_left_into_alpha(word):
    ifs, q = U7, Q(1, 2)
    x = q
    for s in reversed(word):
        x = evaluate(ifs.branch(int(s)), x)
    plus = MaskedSystem(ifs, q, Variant.PLUS)
    w = itinerary(plus, x, 80)
    n = len(word)
    assert w.prefix[:n] == word and w.hit_at(n)
    crit = critical_itineraries(ifs, q, 80)
    limit = w.prefix[:n] + crit.alpha.prefix[:80 - n]
    lengths = [_agreement(itinerary(plus, x - Q(1, 2 ** k), 80).prefix, limit)
               for k in (20, 40, 60, 80)]
    assert lengths == sorted(lengths)
    assert lengths[-1] >= n + 40
