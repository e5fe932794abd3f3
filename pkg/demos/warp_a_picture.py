"""
Warping a picture
=================

A picture is pulled back through a fractal homeomorphism on each axis.
The output goes to ``demo_output/`` (or the directory given as argument).
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from ifsdyn import (MaskedSystem, MonotoneMap, OverlappingIFS, entropy, uniform_from_result,
                    warp_image, write_pnm)
from ifsdyn.picture import gradient

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

# a checker pattern over the colour ramp makes the distortion easy to see
img = gradient(256, 256)
checks = ((np.arange(256)[:, None] // 32 + np.arange(256)[None, :] // 32) % 2).astype(bool)
img[checks] //= 2
write_pnm(out / "source.ppm", img)

ifs = OverlappingIFS(MonotoneMap.moebius(9, 0, 1, 10), MonotoneMap.moebius(2, 3, 1, 4))
q = Fraction(7, 9)
F = MaskedSystem(ifs, q)
G = uniform_from_result(entropy(ifs, q, cross_check_n=0)).masked()

# horizontal axis: Moebius -> uniform; vertical axis: the inverse
warped = warp_image(img, F, G, G, F)
write_pnm(out / "moebius_to_uniform.ppm", warped)

back = warp_image(warped, G, F, F, G)
write_pnm(out / "and_back.ppm", back)
print("wrote", *sorted(p.name for p in out.glob("*.ppm")))
print("pixels unchanged after the round trip:", f"{np.mean(back == img):.1%}")
