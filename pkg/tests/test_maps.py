from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from ifsdyn.errors import DomainError, MaskRangeError, RangeError, SingularError
from ifsdyn.maps import (MaskedSystem, MonotoneMap, OverlappingIFS, UniformSystem, Variant,
                         apply_matrix, as_rational, contraction_factor, evaluate, invert,
                         validate)

AFF = MonotoneMap.affine(Q(7, 10), Q(3, 10))
MOB0 = MonotoneMap.moebius(9, 0, 1, 10)
MOB1 = MonotoneMap.moebius(2, 3, 1, 4)

unit = st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6)


def test_evaluate_examples():
    assert evaluate(AFF, Q(1, 2)) == Q(13, 20)
    assert evaluate(MOB0, 1) == Q(9, 11)
    assert evaluate(MOB0, 0) == 0
    assert evaluate(MonotoneMap.affine(Q(1, 3), 0), 0) == 0


def test_evaluate_rejects_points_outside_unit_interval():
    with pytest.raises(DomainError):
        evaluate(AFF, Q(3, 2))
    with pytest.raises(DomainError):
        evaluate(AFF, -Q(1, 100))


def test_invert_examples():
    assert invert(AFF, Q(13, 20)) == Q(1, 2)
    assert invert(MOB1, 1) == 1
    with pytest.raises(RangeError):
        invert(AFF, Q(1, 10))


def test_contraction_factors():
    assert contraction_factor(MonotoneMap.affine(Q(7, 10), 0)) == Q(7, 10)
    assert contraction_factor(MOB0) == Q(9, 10)
    # derivative 5/(x+4)^2 is largest at x = 0
    assert contraction_factor(MOB1) == Q(5, 16)


def test_singular_moebius_rejected():
    with pytest.raises(SingularError):
        MonotoneMap.moebius(1, 0, -2, 1)


def test_rational_parsing():
    assert as_rational("3/4") == Q(3, 4)
    assert as_rational(0.5) == Q(1, 2)
    assert as_rational(2) == 2
    with pytest.raises((TypeError, ValueError)):
        as_rational(True)


def test_map_json_round_trip():
    for m in (AFF, MOB0, MOB1):
        assert MonotoneMap.from_dict(m.to_dict()) == m


def test_validate_boundary_overlap_fails():
    report = validate(OverlappingIFS.uniform(Q(1, 2)))
    assert not report.ok
    assert [c.name for c in report.failures()] == ["strict overlap"]
    assert report.failures()[0].values == {"f1(0)": Q(1, 2), "f0(1)": Q(1, 2)}


def test_validate_uniform_and_moebius():
    report = validate(OverlappingIFS.uniform(Q(7, 10)))
    assert report.ok and report.equal_ratio
    report = validate(OverlappingIFS(MOB0, MOB1))
    assert report.ok and not report.equal_ratio
    assert OverlappingIFS(MOB0, MOB1).overlap == (Q(3, 4), Q(9, 11))


def test_validate_reports_every_broken_axiom():
    ifs = OverlappingIFS(MonotoneMap.affine(Q(1, 2), Q(1, 10)), MonotoneMap.affine(Q(6, 5), 0))
    names = {c.name for c in validate(ifs).failures()}
    assert {"endpoints fixed", "strict contraction"} <= names


def test_masked_system_range():
    ifs = OverlappingIFS.uniform(Q(7, 10))
    MaskedSystem(ifs, Q(1, 2))
    for q in (Q(3, 10), Q(7, 10), Q(9, 10)):
        with pytest.raises(MaskRangeError):
            MaskedSystem(ifs, q)
    with pytest.raises((MaskRangeError, ValueError)):
        MaskedSystem(ifs, Q(1, 2), Variant.CLOSURE)


def test_left_cell_tie_follows_variant():
    ifs = OverlappingIFS.uniform(Q(7, 10))
    assert not MaskedSystem(ifs, Q(1, 2), Variant.PLUS).left_cell(Q(1, 2))
    assert MaskedSystem(ifs, Q(1, 2), Variant.MINUS).left_cell(Q(1, 2))


def test_uniform_system_bounds():
    UniformSystem(Q(7, 10), Q(1, 2))
    with pytest.raises(DomainError):
        UniformSystem(Q(1, 2), Q(1, 2))
    with pytest.raises(MaskRangeError):
        UniformSystem(Q(7, 10), Q(1, 4))


@given(unit)
def test_inverse_undoes_evaluate(x):
    for m in (AFF, MOB0, MOB1):
        assert invert(m, evaluate(m, x)) == x


@given(unit, unit)
def test_maps_are_increasing(x, y):
    for m in (AFF, MOB0, MOB1):
        if x < y:
            assert evaluate(m, x) < evaluate(m, y)


@given(unit)
def test_integer_matrix_action_matches_map(x):
    for m in (AFF, MOB0, MOB1):
        n, k = apply_matrix(m.matrix, x.numerator, x.denominator)
        assert Q(n, k) == evaluate(m, x)
        n, k = apply_matrix(m.inverse_matrix, n, k)
        assert Q(n, k) == x
