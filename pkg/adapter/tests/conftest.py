import pytest

from rppg_adapter.sample import write_blank_video, write_face_video


@pytest.fixture(scope="session")
def face_video(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("videos") / "face.avi")
    frames = write_face_video(path, seconds=4.0, fps=30.0, bpm=72.0, seed=1)
    return path, frames


@pytest.fixture(scope="session")
def gappy_video(tmp_path_factory):
    """Face video with every 10th frame blank (simulated detection dropouts)."""
    path = str(tmp_path_factory.mktemp("videos") / "gappy.avi")
    blank = list(range(0, 120, 10))
    frames = write_face_video(path, seconds=4.0, fps=30.0, blank_frames=blank, seed=2)
    return path, frames, blank


@pytest.fixture(scope="session")
def blank_video(tmp_path_factory):
    path = str(tmp_path_factory.mktemp("videos") / "blank.avi")
    write_blank_video(path, seconds=2.0, fps=30.0)
    return path
