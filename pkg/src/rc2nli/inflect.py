"""English verb inflection for undoing do-support.

Irregular (and consonant-doubling) verbs come from a bundled data file;
everything else falls back to regular suffix rules, so lookup never fails.
The data file is plain TSV (lemma, past, third-singular) and can be
extended without code changes.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

VOWELS = "aeiou"
SIBILANT_ENDINGS = ("s", "x", "z", "ch", "sh")

_TARGETS = ("past", "third_singular", "base")


@lru_cache(maxsize=1)
def _irregulars() -> dict[str, tuple[str, str]]:
    table = {}
    data = resources.files("rc2nli.data").joinpath("irregular_verbs.tsv").read_text("utf-8")
    for line in data.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lemma, past, third = line.split("\t")
        table[lemma] = (past, third)
    return table


def _regular_past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if len(lemma) >= 2 and lemma.endswith("y") and lemma[-2] not in VOWELS:
        return lemma[:-1] + "ied"
    return lemma + "ed"


def _regular_third(lemma: str) -> str:
    if lemma.endswith(SIBILANT_ENDINGS):
        return lemma + "es"
    if len(lemma) >= 2 and lemma.endswith("y") and lemma[-2] not in VOWELS:
        return lemma[:-1] + "ies"
    return lemma + "s"


def inflect(lemma: str, target: str) -> str:
    """Inflect a lowercase verb lemma to past / third_singular / base."""
    if target not in _TARGETS:
        raise ValueError(f"unknown inflection target {target!r}")
    if target == "base":
        return lemma
    entry = _irregulars().get(lemma)
    if entry is not None:
        return entry[0] if target == "past" else entry[1]
    return _regular_past(lemma) if target == "past" else _regular_third(lemma)


def lexicon_size() -> int:
    return len(_irregulars())
