"""Python bindings for the nmtprep preprocessing library."""

from ._core import (
    InputError,
    MergeTable,
    corpus_bleu,
    desegment_line,
    ensemble_scores,
    learn_bpe,
    mask_plan,
    rerank,
    segment_line,
    strip_diacritics,
    to_cyrillic,
    to_latin,
)

__all__ = [
    "InputError",
    "MergeTable",
    "corpus_bleu",
    "desegment_line",
    "ensemble_scores",
    "learn_bpe",
    "mask_plan",
    "rerank",
    "segment_line",
    "strip_diacritics",
    "to_cyrillic",
    "to_latin",
]
