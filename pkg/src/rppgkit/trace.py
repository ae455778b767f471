"""Green-channel trace extraction: per-frame spatial means over the ROI.

Sums are exact integer arithmetic over the 8-bit green bytes, so results are
bit-reproducible regardless of pixel order, platform, or frame-level
parallelism.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import _kernels
from .errors import CoverageError, EmptyRoiError, GeometryError, RppgError
from .ingest import ClipManifest, Frame, load_frame
from .roi import FaceGeometry, ForeheadSpec, RoiMask, forehead_polygon, forehead_rect

METHODS = ("bbox", "landmark")


@dataclass(frozen=True)
class GreenTrace:
    """Per-frame mean green values for the retained frames of one clip."""

    samples: tuple[float, ...]
    fps: float
    skipped_frames: tuple[int, ...] = field(default_factory=tuple)

    @property
    def frame_count(self) -> int:
        return len(self.samples) + len(self.skipped_frames)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.fps

    def retained_indices(self) -> list[int]:
        skipped = set(self.skipped_frames)
        return [i for i in range(self.frame_count) if i not in skipped]


def spatial_mean_green(frame: Frame, mask: RoiMask) -> float:
    """Mean green value over the mask: exact integer sum, one division."""
    count = mask.pixel_count
    if count == 0:
        raise EmptyRoiError(mask.frame_index)
    if not mask.bounds_ok(frame.width, frame.height):
        raise GeometryError(
            f"mask for frame {mask.frame_index} exceeds frame bounds "
            f"{frame.width}x{frame.height}"
        )
    total = _kernels.masked_green_sum(frame.pixels, frame.width, mask.runs)
    return total / count


def _frame_mask(
    geom: FaceGeometry, method: str, spec: ForeheadSpec, width: int, height: int
) -> RoiMask | None:
    """Mask for one frame, or None when the frame is unusable."""
    try:
        if method == "bbox":
            if geom.box is None:
                return None
            return forehead_rect(geom.box, spec, width, height, frame_index=geom.frame_index)
        if geom.landmarks is None:
            return None
        return forehead_polygon(
            geom.landmarks, spec, width, height, frame_index=geom.frame_index
        )
    except (EmptyRoiError, GeometryError):
        return None


def extract_trace(
    manifest: ClipManifest,
    geometry: list[FaceGeometry],
    method: str,
    spec: ForeheadSpec,
    min_coverage: float = 0.8,
    workers: int = 1,
) -> GreenTrace:
    """Extract the clip's green trace with the chosen ROI method.

    Frames with missing geometry or an empty mask are skipped (recorded, not
    interpolated). More than ``1 - min_coverage`` unusable frames is an error.
    Frame-level work may run on ``workers`` threads; results are identical to
    sequential execution because the reduction is exact.
    """
    if method not in METHODS:
        raise RppgError(f"method must be one of {METHODS}, got {method!r}")
    if len(geometry) != manifest.frame_count:
        raise GeometryError(
            f"geometry/frame count mismatch: {len(geometry)} records, "
            f"{manifest.frame_count} frames"
        )
    for i, geom in enumerate(geometry):
        if geom.frame_index != i:
            raise GeometryError(f"geometry record {i} has frame_index {geom.frame_index}")

    def one(geom: FaceGeometry) -> float | None:
        mask = _frame_mask(geom, method, spec, manifest.width, manifest.height)
        if mask is None:
            return None
        frame = load_frame(manifest, geom.frame_index)
        return spatial_mean_green(frame, mask)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, geometry))
    else:
        results = [one(g) for g in geometry]

    samples = [v for v in results if v is not None]
    skipped = [i for i, v in enumerate(results) if v is None]
    usable_frac = len(samples) / manifest.frame_count
    if usable_frac < min_coverage:
        raise CoverageError(
            f"insufficient geometry coverage for method '{method}': "
            f"{len(skipped)}/{manifest.frame_count} frames unusable, "
            f"need >= {min_coverage:.0%} usable"
        )
    return GreenTrace(samples=tuple(samples), fps=manifest.fps, skipped_frames=tuple(skipped))


def trace_csv(trace: GreenTrace) -> str:
    """Debug/plot export: ``frame,t_seconds,green_mean``, one row per retained frame."""
    lines = ["frame,t_seconds,green_mean"]
    for idx, value in zip(trace.retained_indices(), trace.samples):
        lines.append(f"{idx},{idx / trace.fps:.6f},{value:.6f}")
    return "\n".join(lines) + "\n"
