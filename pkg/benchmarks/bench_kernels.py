#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Workloads mirror the pipeline hot path: rasterizing a forehead polygon and
summing green bytes over the resulting mask for a 320x240 frame, plus a
whole-clip trace extraction. Run after building the extension:

    python benchmarks/bench_kernels.py [--frames 300] [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from rppgkit._kernels import available_backends
from rppgkit.ingest import Frame
from rppgkit.roi import RoiMask
from rppgkit.trace import spatial_mean_green

WIDTH, HEIGHT = 320, 240

# 12-vertex ring around the forehead band, the realistic landmark workload
FOREHEAD_POLYGON = [
    (
        WIDTH * (0.5 + 0.12 * math.cos(2 * math.pi * k / 12)),
        HEIGHT * (0.2 + 0.08 * math.sin(2 * math.pi * k / 12)),
    )
    for k in range(12)
]


def _bench(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=300, help="frames per workload")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("note: compiled backend not built; timing the fallback only")

    rng = np.random.default_rng(1)
    pixels = rng.integers(0, 256, size=WIDTH * HEIGHT * 3, dtype=np.uint8).tobytes()
    xs = [x for x, _ in FOREHEAD_POLYGON]
    ys = [y for _, y in FOREHEAD_POLYGON]

    rows = []
    for name, impl in backends.items():
        runs = impl.polygon_runs(xs, ys, WIDTH, HEIGHT)

        def rasterize_workload():
            for _ in range(args.frames):
                impl.polygon_runs(xs, ys, WIDTH, HEIGHT)

        def sum_workload():
            for _ in range(args.frames):
                impl.masked_green_sum(pixels, WIDTH, runs)

        raster_s = _bench(rasterize_workload, args.repeat)
        sum_s = _bench(sum_workload, args.repeat)
        rows.append((name, raster_s, sum_s, sum(c1 - c0 for _, c0, c1 in runs)))

    print(f"\nworkload: {args.frames} frames at {WIDTH}x{HEIGHT}, "
          f"mask of {rows[0][3]} px, best of {args.repeat}\n")
    print(f"{'backend':<10} {'rasterize':>12} {'green sum':>12}")
    for name, raster_s, sum_s, _ in rows:
        print(f"{name:<10} {raster_s * 1e3:>10.2f}ms {sum_s * 1e3:>10.2f}ms")
    if len(rows) == 2:
        base = {name: (r, s) for name, r, s, _ in rows}
        print(
            f"\nspeedup (compiled vs python): "
            f"rasterize x{base['python'][0] / base['compiled'][0]:.1f}, "
            f"green sum x{base['python'][1] / base['compiled'][1]:.1f}"
        )

    # end-to-end flavor: one frame's mean through the public path
    frame = Frame(index=0, pixels=pixels, width=WIDTH, height=HEIGHT)
    mask = RoiMask(frame_index=0, runs=tuple(backends[next(iter(backends))].polygon_runs(xs, ys, WIDTH, HEIGHT)))
    value = spatial_mean_green(frame, mask)
    print(f"\nsanity: spatial_mean_green = {value:.6f} (active backend)")


if __name__ == "__main__":
    main()
