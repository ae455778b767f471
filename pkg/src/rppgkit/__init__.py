"""Offline green-channel rPPG heart-rate toolkit.

Estimates heart rate from frame sequences by spatially averaging the green
channel over a forehead region of interest and picking the dominant spectral
peak in the 1.0-4.0 Hz band. Two ROI strategies are provided (face-box
sub-rectangle and landmark polygon mask) together with a synthetic clip
generator that supplies known-frequency ground truth for verification.
"""

from .errors import (
    RppgError,
    ManifestError,
    FrameReadError,
    GeometryError,
    EmptyRoiError,
    CoverageError,
    SpectrumError,
    NoSpectralPeakError,
)
from .ingest import ClipManifest, Frame, load_manifest, load_frame, write_frame
from .roi import (
    FaceBox,
    LandmarkSet,
    FaceGeometry,
    ForeheadSpec,
    RoiMask,
    forehead_rect,
    forehead_polygon,
    rasterize_polygon,
    load_geometry_sidecar,
    default_forehead_spec,
)
from .trace import GreenTrace, spatial_mean_green, extract_trace
from .spectral import BandLimits, Spectrum, HrEstimate, preprocess, power_spectrum, pick_peak, estimate_hr
from .synth import SynthConfig, generate_clip, expected_trace
from .stats import RunSet, RunStats, summarize, render_comparison, render_distribution

__version__ = "0.1.0"

__all__ = [
    "RppgError",
    "ManifestError",
    "FrameReadError",
    "GeometryError",
    "EmptyRoiError",
    "CoverageError",
    "SpectrumError",
    "NoSpectralPeakError",
    "ClipManifest",
    "Frame",
    "load_manifest",
    "load_frame",
    "write_frame",
    "FaceBox",
    "LandmarkSet",
    "FaceGeometry",
    "ForeheadSpec",
    "RoiMask",
    "forehead_rect",
    "forehead_polygon",
    "rasterize_polygon",
    "load_geometry_sidecar",
    "default_forehead_spec",
    "GreenTrace",
    "spatial_mean_green",
    "extract_trace",
    "BandLimits",
    "Spectrum",
    "HrEstimate",
    "preprocess",
    "power_spectrum",
    "pick_peak",
    "estimate_hr",
    "SynthConfig",
    "generate_clip",
    "expected_trace",
    "RunSet",
    "RunStats",
    "summarize",
    "render_comparison",
    "render_distribution",
    "__version__",
]
