"""Text to embedding-JSONL dumper for the ekcpd segmentation engine."""

from .dump import DumpConfig, dump
from .encoders import (
    DEFAULT_MODEL,
    HashingEncoder,
    SentenceTransformerEncoder,
    resolve_encoder,
)
from .errors import DumpError, ModelError, OptionsError
from .split import SPLIT_NONE, SPLIT_RULES, SPLITTERS, load_units, split_sentences

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MODEL",
    "DumpConfig",
    "DumpError",
    "HashingEncoder",
    "ModelError",
    "OptionsError",
    "SPLITTERS",
    "SPLIT_NONE",
    "SPLIT_RULES",
    "SentenceTransformerEncoder",
    "dump",
    "load_units",
    "resolve_encoder",
    "split_sentences",
]
