"""
A non-affine system and its uniform model
=========================================

``9x/(x+10)`` and ``(2x+3)/(x+4)`` overlap on [3/4, 9/11].  With mask point
7/9 we compute the entropy, build the uniform system with the same
critical itineraries and check the match symbol by symbol.
"""

from fractions import Fraction

from ifsdyn import (MaskedSystem, MonotoneMap, OverlappingIFS, check_homeomorphism, entropy,
                    fractal_transform, replay_critical, uniform_from_result, validate)

ifs = OverlappingIFS(MonotoneMap.moebius(9, 0, 1, 10), MonotoneMap.moebius(2, 3, 1, 4))
q = Fraction(7, 9)
print("axioms hold:", validate(ifs).ok, " overlap:", [str(v) for v in ifs.overlap])

result = entropy(ifs, q)
print(f"r = {float(result.root.mid):.20f}")
print(f"entropy = {float(result.entropy):.12f}   word-count ratio = "
      f"{result.cross_check.ratio_estimate:.6f}")
# only equal-slope affine systems carry the existence guarantee
print("guaranteed:", result.guaranteed)

# %%
# The uniform model U(r, p).  Replaying its mask point with interval
# arithmetic should reproduce alpha and beta.

uniform = uniform_from_result(result)
print(f"a = {float(uniform.a):.15f}, p = {float(uniform.p):.15f}")
report = replay_critical(uniform, result.critical, 64)
print(f"replay: {report.matches} match, {report.mismatches} mismatch, "
      f"{report.indeterminate} indeterminate")

F, G = MaskedSystem(ifs, q), uniform.masked()
print("critical itineraries:", check_homeomorphism(F, G, 128).to_dict()["outcome"])

# %%
# The homeomorphism itself, sampled at a few points.

for x in (Fraction(0), Fraction(1, 4), Fraction(1, 2), q, Fraction(1)):
    enc = fractal_transform(F, G, x)
    print(f"h({str(x):>4}) = {float(enc.mid):.10f}  (width {float(enc.width):.1e})")
