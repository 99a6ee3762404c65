"""Batch dependency-parse adapter emitting CoNLL-U for the rc2nli pipeline."""

__version__ = "0.1.0"

from .batch import RequestError, SentenceRequest, parse_batch, read_requests  # noqa: F401
