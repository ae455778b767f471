import json

import pytest

import rppgkit.spectral


@pytest.fixture(autouse=True, scope="session")
def parseval_check():
    """Verify the Parseval identity on every power_spectrum call in tests."""
    rppgkit.spectral.PARSEVAL_CHECK = True
    yield
    rppgkit.spectral.PARSEVAL_CHECK = False


@pytest.fixture
def write_manifest(tmp_path):
    """Write a manifest dict (defaults filled) and return its path."""

    def _write(doc: dict, name="manifest.json"):
        base = {
            "width": 4,
            "height": 3,
            "fps": 30.0,
            "frame_count": 2,
            "pixel_format": "raw_rgb24",
            "source": "frames.rgb24",
        }
        base.update(doc)
        path = tmp_path / name
        path.write_text(json.dumps(base))
        return str(path)

    return _write
