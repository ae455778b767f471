"""Pure-Python kernels, used when the compiled extension is unavailable.

Both backends must agree exactly: rasterization uses the same crossing
formula and the same pixel-center quantization (integer results, IEEE-754
doubles evaluated in the same order), and summation is exact integer
arithmetic, so outputs are bit-identical across backends.
"""
from __future__ import annotations

import math


def polygon_runs(xs, ys, width: int, height: int) -> list[tuple[int, int, int]]:
    """Rasterize a polygon to half-open row runs ``(row, col_start, col_end)``.

    A pixel (c, r) is covered iff its center (c+0.5, r+0.5) is inside the
    polygon under the even-odd rule, using a horizontal ray with half-open
    edge crossings (``y1 <= y < y2`` or ``y2 <= y < y1``). Runs are clipped
    to the frame and emitted in row-major order.
    """
    n = len(xs)
    if n != len(ys):
        raise ValueError("xs and ys must have the same length")
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    runs: list[tuple[int, int, int]] = []
    for row in range(height):
        y = row + 0.5
        crossings: list[float] = []
        for i in range(n):
            x1 = xs[i]
            y1 = ys[i]
            j = i + 1 if i + 1 < n else 0
            x2 = xs[j]
            y2 = ys[j]
            if (y1 <= y < y2) or (y2 <= y < y1):
                crossings.append(x1 + (y - y1) * (x2 - x1) / (y2 - y1))
        crossings.sort()
        for k in range(0, len(crossings) - 1, 2):
            c0 = math.ceil(crossings[k] - 0.5)
            c1 = math.ceil(crossings[k + 1] - 0.5)
            if c0 < 0:
                c0 = 0
            if c1 > width:
                c1 = width
            if c0 < c1:
                runs.append((row, c0, c1))
    return runs


def masked_green_sum(rgb, width: int, runs) -> int:
    """Exact integer sum of green bytes over mask runs.

    ``rgb`` is the interleaved row-major RGB buffer of one frame. The caller
    guarantees runs lie within the frame.
    """
    rgb = bytes(rgb)
    total = 0
    for row, c0, c1 in runs:
        start = (row * width + c0) * 3 + 1
        stop = (row * width + c1) * 3
        total += sum(rgb[start:stop:3])
    return total
