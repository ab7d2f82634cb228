"""Photon-pair source simulation, coincidence counting and estimation."""

import os
from pathlib import Path

_bundled = Path(__file__).resolve().parent / "data"
if _bundled.is_dir():
    os.environ.setdefault("TWINPHOTON_DATA_DIR", str(_bundled))

from ._core import *  # noqa: E402,F401,F403
from ._core import default_data_dir, run_cli, version  # noqa: E402,F401


def data_file(name):
    """Path of a bundled data file."""
    return Path(default_data_dir()) / name
