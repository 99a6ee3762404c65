"""RACE-format ingestion, cloze detection, and the non-cloze subset.

Input files are one JSON object per file with fields article, questions,
options (4 strings per question), answers ("A".."D") and id.  All text is
whitespace-normalized on load (internal runs collapsed to single spaces)
so downstream rule matching sees stable, tokenizable strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DatasetError

SPLITS = ("train", "dev", "test")

_WS = re.compile(r"\s+")
_BLANK = re.compile(r"_+")

# Directory names that imply a split when walking a dataset tree.
_SPLIT_ALIASES = {"train": "train", "dev": "dev", "validation": "dev", "val": "dev", "test": "test"}


def normalize_ws(text: str) -> str:
    return _WS.sub(" ", text).strip()


@dataclass(frozen=True)
class RCExample:
    """One passage/question/options/answer record."""

    example_id: str
    passage: str
    question: str
    options: tuple[str, str, str, str]
    gold_index: int
    split: str

    def __post_init__(self):
        if len(self.options) != 4:
            raise ValueError(f"{self.example_id}: expected 4 options, got {len(self.options)}")
        if self.gold_index not in (0, 1, 2, 3):
            raise ValueError(f"{self.example_id}: gold_index {self.gold_index} outside 0..3")
        if not self.passage.strip() or not self.question.strip():
            raise ValueError(f"{self.example_id}: empty passage or question")
        if self.split not in SPLITS:
            raise ValueError(f"{self.example_id}: unknown split {self.split!r}")


@dataclass(frozen=True)
class DatasetStats:
    total: int
    cloze_count: int
    subset_count: int
    excluded_count: int
    per_split_counts: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def cloze_fraction(self) -> float | None:
        if self.total == 0:
            return None
        return self.cloze_count / self.total

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "cloze_count": self.cloze_count,
            "subset_count": self.subset_count,
            "excluded_count": self.excluded_count,
            "cloze_fraction": self.cloze_fraction,
            "per_split": {
                split: {"total": t, "subset": s}
                for split, (t, s) in self.per_split_counts.items()
            },
        }


def is_cloze(question: str) -> bool:
    """A question is cloze iff it contains a blank marker (a run of underscores)."""
    return _BLANK.search(question) is not None


def _infer_split(path: Path) -> str | None:
    # Nearest ancestor directory named like a split wins.
    for part in reversed(path.parts[:-1]):
        alias = _SPLIT_ALIASES.get(part.lower())
        if alias:
            return alias
    return None


def _load_file(path: Path, split: str) -> list[RCExample]:
    raw = path.read_text(encoding="utf-8")
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as e:
        raise DatasetError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(record, dict):
        raise DatasetError(f"{path}: expected a JSON object, got {type(record).__name__}")

    for key in ("article", "questions", "options", "answers"):
        if key not in record:
            raise DatasetError(f"{path}: missing field {key!r}")
    questions = record["questions"]
    options = record["options"]
    answers = record["answers"]
    if not (len(questions) == len(options) == len(answers)):
        raise DatasetError(
            f"{path}: questions/options/answers lengths differ "
            f"({len(questions)}/{len(options)}/{len(answers)})"
        )
    file_id = record.get("id") or path.name
    passage = normalize_ws(str(record["article"]))

    examples = []
    for qi, (question, opts, answer) in enumerate(zip(questions, options, answers)):
        where = f"{path} question {qi}"
        if not isinstance(opts, list) or len(opts) != 4:
            raise DatasetError(f"{where}: expected 4 options, got {opts!r}")
        if not isinstance(answer, str) or answer not in ("A", "B", "C", "D"):
            raise DatasetError(f"{where}: answer letter {answer!r} outside A-D")
        try:
            examples.append(
                RCExample(
                    example_id=f"{file_id}#{qi}",
                    passage=passage,
                    question=normalize_ws(str(question)),
                    options=tuple(normalize_ws(str(o)) for o in opts),
                    gold_index=ord(answer) - ord("A"),
                    split=split,
                )
            )
        except ValueError as e:
            raise DatasetError(f"{where}: {e}") from e
    return examples


def load_race(root: str | Path, split: str | None = None) -> list[RCExample]:
    """Load RACE-format JSON files under ``root`` (a directory or one file).

    Split is inferred from directory names (train/dev/test, "validation"
    counts as dev) unless given explicitly.  Ordering is stable: files
    sorted by path, questions by index.
    """
    root = Path(root)
    if not root.exists():
        raise DatasetError(f"input path does not exist: {root}")
    if root.is_file():
        files = [root]
    else:
        files = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in (".txt", ".json"))

    examples: list[RCExample] = []
    seen: dict[str, Path] = {}
    for path in files:
        file_split = split or _infer_split(path)
        if file_split is None:
            raise DatasetError(
                f"{path}: cannot infer split from directory names; pass split explicitly"
            )
        for ex in _load_file(path, file_split):
            if ex.example_id in seen:
                raise DatasetError(
                    f"duplicate example_id {ex.example_id!r} in {path} "
                    f"(already seen in {seen[ex.example_id]}); load splits separately"
                )
            seen[ex.example_id] = path
            examples.append(ex)
    return examples


def in_subset(example: RCExample, strict_question_mark: bool = False) -> bool:
    if is_cloze(example.question):
        return False
    if strict_question_mark and not example.question.rstrip().endswith("?"):
        return False
    return True


def filter_subset(
    examples: Iterable[RCExample], strict_question_mark: bool = False
) -> list[RCExample]:
    """Keep non-cloze examples, preserving order.

    Strict mode additionally requires a terminal "?" on the question.
    """
    return [e for e in examples if in_subset(e, strict_question_mark)]


def compute_stats(
    examples: Iterable[RCExample], strict_question_mark: bool = False
) -> DatasetStats:
    examples = list(examples)
    total = len(examples)
    cloze = sum(1 for e in examples if is_cloze(e.question))
    subset = sum(1 for e in examples if in_subset(e, strict_question_mark))
    per_split: dict[str, tuple[int, int]] = {}
    for name in SPLITS:
        members = [e for e in examples if e.split == name]
        if members:
            per_split[name] = (
                len(members),
                sum(1 for e in members if in_subset(e, strict_question_mark)),
            )
    return DatasetStats(
        total=total,
        cloze_count=cloze,
        subset_count=subset,
        excluded_count=total - cloze - subset,
        per_split_counts=per_split,
    )


# --- canonical dataset JSONL ---------------------------------------------

_JSONL_FIELDS = ("example_id", "split", "passage", "question", "options", "gold_index")


def write_dataset_jsonl(examples: Iterable[RCExample], path: str | Path) -> None:
    from .io_utils import atomic_write_text

    lines = []
    for e in examples:
        rec = {
            "example_id": e.example_id,
            "split": e.split,
            "passage": e.passage,
            "question": e.question,
            "options": list(e.options),
            "gold_index": e.gold_index,
        }
        lines.append(json.dumps(rec, ensure_ascii=False))
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def read_dataset_jsonl(path: str | Path) -> list[RCExample]:
    path = Path(path)
    examples = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise DatasetError(f"{path} line {lineno}: not valid JSON ({e})") from e
            if not isinstance(rec, dict):
                raise DatasetError(f"{path} line {lineno}: expected a JSON object")
            missing = [k for k in _JSONL_FIELDS if k not in rec]
            if missing:
                raise DatasetError(f"{path} line {lineno}: missing fields {missing}")
            try:
                examples.append(
                    RCExample(
                        example_id=rec["example_id"],
                        passage=rec["passage"],
                        question=rec["question"],
                        options=tuple(rec["options"]),
                        gold_index=rec["gold_index"],
                        split=rec["split"],
                    )
                )
            except ValueError as e:
                raise DatasetError(f"{path} line {lineno}: {e}") from e
    return examples
