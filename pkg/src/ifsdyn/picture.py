"""Binary PGM/PPM input and output, and image warping by fractal transforms.

Rasters are numpy ``uint8`` arrays: ``(h, w)`` for greyscale and
``(h, w, 3)`` for colour.  Warping pulls back: output pixel ``(i, j)``
takes the colour of the source pixel nearest ``h(x_j), h(y_i)``.
"""

import re
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import DimensionError
from .maps import MaskedSystem
from .transform import _check_pair, fractal_transform

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_pnm(path: Union[str, Path]) -> np.ndarray:
    """Read a P5 or P6 file with maxval at most 255; comments are skipped."""
    data = Path(path).read_bytes()
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise DimensionError(f"{path}: truncated header")
        fields.append(m.group(1))
        pos = m.end()
    magic = fields[0]
    if magic not in (b"P5", b"P6"):
        raise DimensionError(f"{path}: unsupported format {magic!r}")
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise DimensionError(f"{path}: malformed header") from None
    if not 0 < maxval <= 255 or width <= 0 or height <= 0:
        raise DimensionError(f"{path}: need positive size and maxval <= 255")
    pos += 1  # single whitespace byte after maxval
    channels = 3 if magic == b"P6" else 1
    size = width * height * channels
    if len(data) - pos < size:
        raise DimensionError(f"{path}: expected {size} bytes of pixel data")
    raster = np.frombuffer(data, dtype=np.uint8, count=size, offset=pos)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return raster.reshape(shape).copy()


def write_pnm(path: Union[str, Path], raster: np.ndarray) -> None:
    raster = np.asarray(raster)
    if raster.dtype != np.uint8:
        raise DimensionError(f"raster dtype must be uint8, got {raster.dtype}")
    if raster.ndim == 2:
        magic = b"P5"
    elif raster.ndim == 3 and raster.shape[2] == 3:
        magic = b"P6"
    else:
        raise DimensionError(f"unsupported raster shape {raster.shape}")
    height, width = raster.shape[:2]
    header = b"%s\n%d %d\n255\n" % (magic, width, height)
    Path(path).write_bytes(header + np.ascontiguousarray(raster).tobytes())


def index_table(F: MaskedSystem, G: MaskedSystem, n: int, depth: int = 48) -> np.ndarray:
    """Source index for each of ``n`` sample positions along one axis.

    Sample ``j`` sits at ``x = j/(n-1)``; its source is the index nearest
    ``mid(h(x)) * (n-1)``, clipped to the raster.
    """
    if n < 1:
        raise DimensionError("axis length must be positive")
    _check_pair(F, G)
    if n == 1:
        return np.zeros(1, dtype=np.intp)
    table = np.empty(n, dtype=np.intp)
    for j in range(n):
        mid = fractal_transform(F, G, Fraction(j, n - 1), depth).mid * (n - 1)
        table[j] = min(max(round(mid), 0), n - 1)
    return table


def warp_1d(samples, F: MaskedSystem, G: MaskedSystem, depth: int = 48) -> np.ndarray:
    samples = np.asarray(samples)
    return samples[index_table(F, G, len(samples), depth)]


def warp_image(raster: np.ndarray, fx: MaskedSystem, gx: MaskedSystem,
               fy: Optional[MaskedSystem] = None, gy: Optional[MaskedSystem] = None,
               depth: int = 48) -> np.ndarray:
    """Warp a raster by ``h_x`` horizontally and ``h_y`` vertically.

    The vertical pair defaults to the horizontal one.
    """
    raster = np.asarray(raster)
    if raster.ndim not in (2, 3) or (raster.ndim == 3 and raster.shape[2] != 3):
        raise DimensionError(f"unsupported raster shape {raster.shape}")
    fy = fx if fy is None else fy
    gy = gx if gy is None else gy
    height, width = raster.shape[:2]
    cols = index_table(fx, gx, width, depth)
    rows = index_table(fy, gy, height, depth)
    return raster[np.ix_(rows, cols)]


def gradient(width: int = 256, height: int = 256) -> np.ndarray:
    """Colour test card: red ramps left to right, green top to bottom."""
    x = np.linspace(0, 255, width).round().astype(np.uint8)
    y = np.linspace(0, 255, height).round().astype(np.uint8)
    out = np.empty((height, width, 3), dtype=np.uint8)
    out[..., 0] = x[None, :]
    out[..., 1] = y[:, None]
    out[..., 2] = 128
    return out
