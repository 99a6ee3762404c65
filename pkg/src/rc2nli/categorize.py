"""Keyword-driven question categories and manual annotation ingestion.

The five heuristic flags are non-exclusive and purely lexical: matching is
case-insensitive on word boundaries (so "nothing" never triggers the
negation rule and "untrue" never triggers the deductive rule), and phrases
match as token sequences.  The exclusive 7-way reasoning taxonomy is
ingestion-only; it comes from a manually produced CSV.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import AnnotationError

DIALOGUE_QUOTE_THRESHOLD = 10

_MAIN_IDEA = re.compile(r"\b(?:mainly|title|purpose|topic)\b", re.IGNORECASE)
_NEGATION = re.compile(r"\b(?:not|except)\b|\bwhich\s+of\s+the\s+following\s+is\s+wrong\b", re.IGNORECASE)
_MATH = re.compile(r"\bhow\s+(?:many|old|much)\b", re.IGNORECASE)
_DEDUCTIVE = re.compile(r"\btrue\b", re.IGNORECASE)

_CURLY_DOUBLE = {"“": '"', "”": '"'}


@dataclass(frozen=True)
class HeuristicFlags:
    main_idea: bool
    negation: bool
    dialogue: bool
    math: bool
    deductive: bool

    def to_dict(self) -> dict[str, bool]:
        return {
            "main_idea": self.main_idea,
            "negation": self.negation,
            "dialogue": self.dialogue,
            "math": self.math,
            "deductive": self.deductive,
        }

    def __getitem__(self, name: str) -> bool:
        return self.to_dict()[name]


HEURISTIC_CATEGORIES = ("main_idea", "negation", "dialogue", "math", "deductive")

CATEGORY_DISPLAY_NAMES = {
    "main_idea": "Main Idea",
    "negation": "Negation",
    "dialogue": "Dialogue",
    "math": "Math",
    "deductive": "Deductive",
}


def quote_count(passage: str) -> int:
    """Number of double-quote marks, with curly doubles normalized to '"'."""
    for curly, straight in _CURLY_DOUBLE.items():
        passage = passage.replace(curly, straight)
    return passage.count('"')


def heuristic_categorize(question: str, passage: str) -> HeuristicFlags:
    return HeuristicFlags(
        main_idea=_MAIN_IDEA.search(question) is not None,
        negation=_NEGATION.search(question) is not None,
        dialogue=quote_count(passage) > DIALOGUE_QUOTE_THRESHOLD,
        math=_MATH.search(question) is not None,
        deductive=_DEDUCTIVE.search(question) is not None,
    )


class ReasoningCategory(Enum):
    LINGUISTIC_MATCHING = "linguistic_matching"
    MAIN_IDEA = "main_idea"
    NEGATION = "negation"
    DIALOGUE = "dialogue"
    MATH = "math"
    DEDUCTIVE = "deductive"
    INDUCTIVE = "inductive"

    @classmethod
    def from_string(cls, raw: str) -> "ReasoningCategory":
        key = re.sub(r"[\s\-]+", "_", raw.strip()).lower()
        for member in cls:
            if key == member.value:
                return member
        raise ValueError(f"unknown reasoning category {raw!r}")


@dataclass(frozen=True)
class AnnotationRecord:
    example_id: str
    category: ReasoningCategory
    properly_converted: bool


_BOOL_STRINGS = {
    "true": True,
    "false": False,
    "1": True,
    "0": False,
    "yes": True,
    "no": False,
}


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    """Read the annotation CSV (example_id, category, properly_converted)."""
    path = Path(path)
    records: list[AnnotationRecord] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        required = {"example_id", "category", "properly_converted"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise AnnotationError(
                f"{path}: header must contain example_id,category,properly_converted "
                f"(got {reader.fieldnames})"
            )
        for rownum, row in enumerate(reader, start=1):
            where = f"{path} row {rownum}"
            example_id = (row["example_id"] or "").strip()
            if not example_id:
                raise AnnotationError(f"{where}: empty example_id")
            if example_id in seen:
                raise AnnotationError(f"{where}: duplicate example_id {example_id!r}")
            seen.add(example_id)
            try:
                category = ReasoningCategory.from_string(row["category"] or "")
            except ValueError as e:
                raise AnnotationError(f"{where}: {e}") from e
            raw_bool = (row["properly_converted"] or "").strip().lower()
            if raw_bool not in _BOOL_STRINGS:
                raise AnnotationError(f"{where}: properly_converted {raw_bool!r} is not a boolean")
            records.append(AnnotationRecord(example_id, category, _BOOL_STRINGS[raw_bool]))
    return records
