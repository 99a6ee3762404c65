"""CoNLL-U dependency parses and the tree queries the conversion rules need.

Only basic syntactic words are modeled: multiword-token ranges (ids like
"3-4") and empty nodes (ids like "3.1") are skipped on read.  Reading
validates structure (contiguous ids, head ranges, exactly one root with
deprel "root", acyclicity); writing emits standard 10-column lines plus a
"# sent_id = ..." comment, so files round-trip through ordinary tooling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import ConlluFormatError, ConlluStructureError

# Closed interrogative lexicon; parser evidence (feats, xpos) has priority.
WH_WORDS = frozenset(
    {"who", "whom", "whose", "what", "which", "when", "where", "why", "how"}
)
WH_XPOS = frozenset({"WP", "WP$", "WDT", "WRB"})

_BUNDLE_ID = re.compile(r"^.+/(q|o[0-3])$")


@dataclass(frozen=True)
class ParseToken:
    index: int
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: dict[str, str]
    head: int
    deprel: str
    deps: str = "_"
    misc: str = "_"

    def __hash__(self):
        return hash((self.index, self.form, self.head, self.deprel))


@dataclass(frozen=True)
class SentenceParse:
    sentence_id: str
    tokens: tuple[ParseToken, ...]

    @property
    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)

    @property
    def root_token(self) -> ParseToken:
        return next(t for t in self.tokens if t.head == 0)

    def token(self, index: int) -> ParseToken:
        return self.tokens[index - 1]

    def children(self, index: int, deprels: Optional[set[str]] = None) -> list[ParseToken]:
        out = [t for t in self.tokens if t.head == index]
        if deprels is not None:
            out = [t for t in out if t.deprel in deprels]
        return out


@dataclass(frozen=True)
class Span:
    lo: int
    hi: int
    contiguous: bool = True


def _parse_feats(raw: str) -> dict[str, str]:
    if raw in ("_", ""):
        return {}
    feats = {}
    for item in raw.split("|"):
        key, _, value = item.partition("=")
        feats[key] = value
    return feats


def _emit_feats(feats: dict[str, str]) -> str:
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in sorted(feats.items(), key=lambda kv: kv[0].lower()))


def _validate(sentence_id: str, tokens: list[ParseToken]) -> None:
    n = len(tokens)
    where = f"sentence {sentence_id!r}"
    indices = [t.index for t in tokens]
    if indices != list(range(1, n + 1)):
        raise ConlluStructureError(f"{where}: token ids not contiguous 1..{n}: {indices}")
    for t in tokens:
        if t.head < 0 or t.head > n:
            raise ConlluStructureError(f"{where}: token {t.index} head {t.head} out of range")
        if t.head == t.index:
            raise ConlluStructureError(f"{where}: token {t.index} is its own head")
    roots = [t for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise ConlluStructureError(f"{where}: expected exactly one root, found {len(roots)}")
    if roots[0].deprel != "root":
        raise ConlluStructureError(
            f"{where}: head-0 token has deprel {roots[0].deprel!r}, expected 'root'"
        )
    # Walk head links; any token that cannot reach 0 within n steps sits on a cycle.
    for t in tokens:
        cur, steps = t.head, 0
        while cur != 0:
            cur = tokens[cur - 1].head
            steps += 1
            if steps > n:
                raise ConlluStructureError(f"{where}: cyclic heads involving token {t.index}")


def parse_conllu(text: str) -> list[SentenceParse]:
    """Parse a CoNLL-U document into validated sentences."""
    sentences: list[SentenceParse] = []
    sent_id: Optional[str] = None
    rows: list[ParseToken] = []
    counter = 0

    def flush():
        nonlocal sent_id, rows, counter
        if rows:
            counter += 1
            sid = sent_id if sent_id is not None else f"sentence-{counter}"
            _validate(sid, rows)
            sentences.append(SentenceParse(sentence_id=sid, tokens=tuple(rows)))
        sent_id, rows = None, []

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*sent_id\s*=\s*(.+)$", line)
            if m:
                sent_id = m.group(1).strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluFormatError(f"line {lineno}: expected 10 tab-separated columns, got {len(cols)}")
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword-token range or empty node
        try:
            index = int(tok_id)
            head = int(cols[6])
        except ValueError:
            raise ConlluFormatError(f"line {lineno}: non-integer id or head ({tok_id!r}, {cols[6]!r})")
        rows.append(
            ParseToken(
                index=index,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=_parse_feats(cols[5]),
                head=head,
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )
    flush()
    return sentences


def parse_conllu_file(path: str | Path) -> list[SentenceParse]:
    return parse_conllu(Path(path).read_text(encoding="utf-8"))


def emit_conllu(parses: Iterable[SentenceParse]) -> str:
    blocks = []
    for p in parses:
        lines = [f"# sent_id = {p.sentence_id}", f"# text = {p.text}"]
        for t in p.tokens:
            lines.append(
                "\t".join(
                    (
                        str(t.index),
                        t.form,
                        t.lemma,
                        t.upos,
                        t.xpos,
                        _emit_feats(t.feats),
                        str(t.head),
                        t.deprel,
                        t.deps,
                        t.misc,
                    )
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def is_interrogative(token: ParseToken) -> bool:
    """Parser evidence first: PronType feat, then xpos, then the lexicon."""
    prontype = token.feats.get("PronType")
    if prontype is not None:
        return prontype == "Int"
    if token.xpos and token.xpos != "_":
        return token.xpos in WH_XPOS
    return token.form.lower() in WH_WORDS


def find_wh(parse: SentenceParse) -> Optional[int]:
    """Index of the leftmost interrogative token, if any."""
    for token in parse.tokens:
        if is_interrogative(token):
            return token.index
    return None


def subtree_span(parse: SentenceParse, index: int) -> Span:
    """Covering range of a token and its transitive dependents.

    Non-projective subtrees get the minimal covering range with
    ``contiguous=False``.
    """
    members = {index}
    stack = [index]
    while stack:
        head = stack.pop()
        for child in parse.children(head):
            if child.index not in members:
                members.add(child.index)
                stack.append(child.index)
    lo, hi = min(members), max(members)
    return Span(lo=lo, hi=hi, contiguous=(hi - lo + 1 == len(members)))


class ParseBundle:
    """Parses keyed by "<example_id>/q" (questions) and "<example_id>/o<k>" (options)."""

    def __init__(self, parses: dict[str, SentenceParse]):
        self._parses = parses

    @classmethod
    def from_parses(cls, parses: Iterable[SentenceParse]) -> "ParseBundle":
        out: dict[str, SentenceParse] = {}
        for p in parses:
            if not _BUNDLE_ID.match(p.sentence_id):
                raise ValueError(
                    f"sentence id {p.sentence_id!r} does not match '<example_id>/q' or '<example_id>/o<k>'"
                )
            if p.sentence_id in out:
                raise ValueError(f"duplicate sentence id {p.sentence_id!r}")
            out[p.sentence_id] = p
        return cls(out)

    @classmethod
    def from_file(cls, path: str | Path) -> "ParseBundle":
        return cls.from_parses(parse_conllu_file(path))

    def get(self, sentence_id: str) -> Optional[SentenceParse]:
        return self._parses.get(sentence_id)

    def question_parse(self, example_id: str) -> Optional[SentenceParse]:
        return self._parses.get(f"{example_id}/q")

    def option_parse(self, example_id: str, k: int) -> Optional[SentenceParse]:
        return self._parses.get(f"{example_id}/o{k}")

    def __len__(self) -> int:
        return len(self._parses)
