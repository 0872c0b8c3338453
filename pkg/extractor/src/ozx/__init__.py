"""Feature and text-bank extraction for the oztal streaming localizer.

The package converts raw videos and per-class text descriptions into the
on-disk formats (feature manifest + binaries, text bank) that the localizer
consumes; it shares no code with the localizer, only the file formats.
"""

from .encoders import get_encoder, list_encoders, register_encoder
from .extract import extract_video_features, write_dataset_manifest
from .textbank import FIXED_TEMPLATE, build_textbank

__all__ = [
    "FIXED_TEMPLATE",
    "build_textbank",
    "extract_video_features",
    "get_encoder",
    "list_encoders",
    "register_encoder",
    "write_dataset_manifest",
]

__version__ = "0.1.0"
