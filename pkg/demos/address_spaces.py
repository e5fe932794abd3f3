"""
Which binary words are addresses?
=================================

A word is admissible when every suffix starting with 0 stays below alpha
and every suffix starting with 1 stays above beta.  We list the short
words for one system and compare address spaces of several systems.
"""

from fractions import Fraction

from ifsdyn import (OverlappingIFS, address_space_nested, brute_force_words,
                    critical_itineraries, enumerate_words)

ifs = OverlappingIFS.uniform(Fraction(4, 5))
crit = critical_itineraries(ifs, Fraction(1, 2), 64)
print("alpha:", crit.alpha.prefix[:24], "...")
print("beta: ", crit.beta.prefix[:24], "...")

words = sorted(enumerate_words(crit, n=3))
print(len(words), "admissible words of length 4 out of 16:", " ".join(words))
assert set(words) == brute_force_words(crit, n=3)

# dropping the first symbol never leaves the language
print("shift invariant:", {w[1:] for w in words} <= enumerate_words(crit, n=2))

# %%
# A larger slope means a larger overlap and fewer admissible words, so the
# addresses of U(4/5) sit inside those of U(3/5).  Transforms are monotone
# and invertible only in the direction of inclusion.

systems = {a: (OverlappingIFS.uniform(a), Fraction(1, 2))
           for a in (Fraction(3, 5), Fraction(7, 10), Fraction(4, 5))}
for a, f in systems.items():
    row = "  ".join("yes" if address_space_nested(f, g) else " no" for g in systems.values())
    print(f"U({a}) inside  U(3/5) U(7/10) U(4/5): {row}")
