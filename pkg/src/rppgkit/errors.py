"""Exception types shared across the toolkit.

Every error carries a short machine-readable ``code`` so the CLI can emit
stable JSON diagnostics on stderr.
"""


class RppgError(Exception):
    """Base class for all toolkit errors."""

    code = "error"


class ManifestError(RppgError):
    """Manifest missing, malformed, or failing a field invariant."""

    code = "manifest"


class FrameReadError(RppgError):
    """Frame file missing, truncated, or inconsistent with the manifest."""

    code = "frame_read"


class GeometryError(RppgError):
    """Sidecar record malformed or inconsistent with the clip."""

    code = "geometry"


class EmptyRoiError(RppgError):
    """ROI construction produced zero pixels for a frame."""

    code = "empty_roi"

    def __init__(self, frame_index: int, detail: str = ""):
        self.frame_index = frame_index
        msg = f"empty ROI at frame {frame_index}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CoverageError(RppgError):
    """Too many frames lacked usable geometry for a trustworthy trace."""

    code = "coverage"


class SpectrumError(RppgError):
    """Bad spectral parameters (transform length, band, trace length)."""

    code = "spectrum"


class SynthError(RppgError):
    """Invalid synthetic clip configuration or unwritable output."""

    code = "synth"


class NoSpectralPeakError(RppgError):
    """All in-band spectral power is zero; no heart-rate peak exists."""

    code = "no_spectral_peak"
