"""Video-to-clip adapter for the rppgkit toolkit.

Decodes a real video, runs an off-the-shelf face detector / landmark model
per frame, and writes the toolkit's input pair: a PPM frame sequence with a
``manifest.json`` plus a ``geometry.ndjson`` sidecar. ROI policy (which part
of the face is the forehead) stays entirely in the toolkit; this package
only emits whole face boxes and full landmark sets.
"""

from .convert import AdapterConfig, AdapterError, adapt
from .engines import available_engines, resolve_engine

__version__ = "0.1.0"

__all__ = ["AdapterConfig", "AdapterError", "adapt", "available_engines", "resolve_engine"]
