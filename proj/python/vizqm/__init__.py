"""Visualization quality metrics.

Thin Python veneer over the native module: edge congestion, fine-detail
saliency, colour vision simulations, colour preference and colourfulness
scores, corpus ranking, and feedback report assembly.
"""

import os
from pathlib import Path

# Point the native library at the packaged data tables unless the caller
# already chose a directory.
_packaged_data = Path(__file__).resolve().parent / "data"
if "VIZQM_DATA_DIR" not in os.environ and _packaged_data.is_dir():
    os.environ["VIZQM_DATA_DIR"] = str(_packaged_data)

from ._core import (  # noqa: E402
    VizqmError,
    __version__,
    analyze,
    assemble_report,
    default_data_dir,
    generate_test_image,
    scores,
)

__all__ = [
    "VizqmError",
    "__version__",
    "analyze",
    "assemble_report",
    "default_data_dir",
    "generate_test_image",
    "scores",
]
