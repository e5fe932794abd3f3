"""Systems shared by the test modules."""

from fractions import Fraction as Q

from ifsdyn.maps import MaskedSystem, MonotoneMap, OverlappingIFS, Variant

SLOPES = (Q(3, 5), Q(7, 10), Q(4, 5))
MASKS = (Q(1, 2), Q(11, 20))

MOEBIUS = OverlappingIFS(MonotoneMap.moebius(9, 0, 1, 10), MonotoneMap.moebius(2, 3, 1, 4))
MOEBIUS_Q = Q(7, 9)

# unequal-slope affine systems
SKEW = OverlappingIFS(MonotoneMap.affine(Q(2, 3), 0), MonotoneMap.affine(Q(1, 2), Q(1, 2)))
SKEW_Q = Q(3, 5)
MILD = OverlappingIFS(MonotoneMap.affine(Q(7, 10), 0), MonotoneMap.affine(Q(13, 20), Q(7, 20)))
MILD_Q = Q(1, 2)


def uniform_systems():
    return {f"U({a}) q={q}": (OverlappingIFS.uniform(a), q) for a in SLOPES for q in MASKS}


def all_systems():
    out = uniform_systems()
    out[f"Moebius q={MOEBIUS_Q}"] = (MOEBIUS, MOEBIUS_Q)
    return out


def masked(name_or_pair, variant=Variant.PLUS):
    ifs, q = name_or_pair
    return MaskedSystem(ifs, q, variant)
