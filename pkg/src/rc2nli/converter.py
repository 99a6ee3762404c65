"""Turn (question, answer option) pairs into declarative hypotheses.

One rule fires per question, chosen by a total classification:

* cloze questions get the blank replaced by the answer;
* "which of the following ... is/are ... true" questions become
  "<answer> is TRUE." (or "is NOT true." when negated) with the question's
  trailing material dropped;
* WH questions are rewritten on the dependency parse: the WH phrase is
  excised, subject-auxiliary inversion and do-support are undone, and the
  answer is placed in the vacated role (subject position, after the
  predicate for object/attribute WH, clause-final for when/where/why/how,
  with "why" joining question and answer via "because");
* everything else falls back to question-plus-answer concatenation,
  flagged low-confidence in the trace.

Outputs always pass finalize(): no "?" survives, terminal punctuation is
guaranteed, and the first letter is capitalized.  The rules are applied
literally and their awkward outputs are kept as-is (clause-sized answers
land in object position, for instance); no grammar repair is attempted,
so conversion quality stays auditable from the rule trace alone.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .corpus import RCExample, is_cloze, normalize_ws
from .inflect import inflect
from .parsetree import ParseBundle, ParseToken, SentenceParse, Span, find_wh, subtree_span

LABELS = ("entailment", "not_entailment")

_BLANK = re.compile(r"_+")
_WH_SURFACE = re.compile(r"\b(who|whom|whose|what|which|when|where|why|how)\b", re.IGNORECASE)
_WHICH_TRUE = re.compile(
    r"\bwhich\s+of\s+the\s+following\b(?P<tail>.*?\b(?:is|are|was|were)\b.*?\btrue\b)",
    re.IGNORECASE,
)
_NOT = re.compile(r"\bnot\b", re.IGNORECASE)
_TRAILING_SENT_PUNCT = re.compile(r"[.!?]+$")
_CLITIC = re.compile(r"^(?:'(?:s|re|ll|ve|d|m)|n't)$", re.IGNORECASE)
_CLOSING_PUNCT = frozenset({".", ",", "!", "?", ";", ":", ")", "]", "%"})

_ADJUNCT_WH = frozenset({"when", "where", "why", "how"})
_SUBJ_DEPRELS = frozenset({"nsubj", "nsubj:pass"})
_DO_FORMS = {"did": "past", "does": "third_singular", "do": "base"}

# Relations that attach clause machinery rather than WH-phrase material;
# excision must not swallow them when the WH token heads the clause.
_EXCISION_CUT = frozenset(
    {
        "nsubj",
        "nsubj:pass",
        "csubj",
        "csubj:pass",
        "cop",
        "aux",
        "aux:pass",
        "punct",
        "expl",
        "discourse",
        "parataxis",
    }
)


class QuestionKind(Enum):
    CLOZE = "cloze"
    WHICH_OF_FOLLOWING = "which_of_following"
    WHICH_OF_FOLLOWING_NEGATED = "which_of_following_negated"
    WH = "wh"
    WHY = "why"
    OTHER = "other"


@dataclass(frozen=True)
class ConversionResult:
    hypothesis: str
    rule_id: str
    trace: tuple[str, ...]


@dataclass(frozen=True)
class NLIExample:
    example_id: str
    option_index: int
    premise: str
    hypothesis: str
    label: str
    rule_id: str
    trace: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "option_index": self.option_index,
            "premise": self.premise,
            "hypothesis": self.hypothesis,
            "label": self.label,
            "rule_id": self.rule_id,
        }


@dataclass(frozen=True)
class QAExample:
    example_id: str
    option_index: int
    premise: str
    qa_text: str
    label: str

    def to_dict(self) -> dict:
        return {
            "example_id": self.example_id,
            "option_index": self.option_index,
            "premise": self.premise,
            "qa_text": self.qa_text,
            "label": self.label,
        }


def classify_question(question: str) -> QuestionKind:
    """Total classification; every question maps to exactly one kind."""
    if is_cloze(question):
        return QuestionKind.CLOZE
    m = _WHICH_TRUE.search(question)
    if m:
        if _NOT.search(m.group("tail")):
            return QuestionKind.WHICH_OF_FOLLOWING_NEGATED
        return QuestionKind.WHICH_OF_FOLLOWING
    m = _WH_SURFACE.search(question)
    if m:
        if m.group(1).lower() == "why":
            return QuestionKind.WHY
        return QuestionKind.WH
    return QuestionKind.OTHER


# --- text massaging ---------------------------------------------------------


def finalize(text: str) -> str:
    """Normalize a hypothesis: drop "?" tokens, fix spacing, close the sentence.

    Idempotent; "" passes through untouched.
    """
    t = text.replace("?", " ")
    t = normalize_ws(t)
    t = re.sub(r"\s+([.,!;:%)\]])", r"\1", t)
    t = re.sub(r"\s+('(?:s|re|ll|ve|d|m)|n't)\b", r"\1", t, flags=re.IGNORECASE)
    t = re.sub(r"[,;:]+$", "", t).rstrip()
    if not t:
        return ""
    if not (t.endswith(".") or t.endswith("!") or t.endswith('."')):
        t += "."
    for i, ch in enumerate(t):
        if ch.isalpha():
            if not ch.isupper():
                t = t[:i] + ch.upper() + t[i + 1 :]
            break
    return t


def _strip_trailing_punct(answer: str) -> str:
    return _TRAILING_SENT_PUNCT.sub("", answer).rstrip()


def _lower_first_unless_proper(answer: str, a_parse: Optional[SentenceParse]) -> str:
    """Lowercase the answer's first letter for mid-sentence insertion.

    A first token tagged PROPN/NNP(S) keeps its case; without a parse,
    tokens with interior capitals ("USA", "McNulty") and bare "I" are kept.
    """
    if not answer:
        return answer
    if a_parse is not None and a_parse.tokens:
        first = a_parse.tokens[0]
        if first.upos == "PROPN" or first.xpos in ("NNP", "NNPS"):
            return answer
    else:
        alpha = re.sub(r"[^A-Za-z]", "", answer.split()[0])
        if alpha == "I" or (len(alpha) > 1 and any(c.isupper() for c in alpha[1:])):
            return answer
    for i, ch in enumerate(answer):
        if ch.isalpha():
            return answer[:i] + ch.lower() + answer[i + 1 :]
        if ch.isdigit():
            break
    return answer


def normalize_answer(
    answer: str, mid_sentence: bool, a_parse: Optional[SentenceParse] = None
) -> str:
    """Answer text as inserted by the rules: trailing sentence punctuation
    stripped, first letter lowercased for mid-sentence positions unless the
    first token is a proper noun."""
    a = _strip_trailing_punct(normalize_ws(answer))
    if mid_sentence:
        a = _lower_first_unless_proper(a, a_parse)
    return a


def _detokenize(parts: list[str]) -> str:
    out = ""
    for p in parts:
        if not p:
            continue
        if not out:
            out = p
        elif p in _CLOSING_PUNCT or _CLITIC.match(p):
            out += p
        else:
            out += " " + p
    return out


# --- individual rules --------------------------------------------------------


def rule_which_true(question: str, answer: str) -> str:
    """Answer plus " is TRUE." / " is NOT true."; question material is dropped."""
    negated = classify_question(question) is QuestionKind.WHICH_OF_FOLLOWING_NEGATED
    a = _strip_trailing_punct(normalize_ws(answer))
    return finalize(f"{a} is NOT true." if negated else f"{a} is TRUE.")


def _apply_cloze(
    question: str, answer: str, a_parse: Optional[SentenceParse]
) -> tuple[str, list[str]]:
    notes: list[str] = []
    q = normalize_ws(question)
    m = _BLANK.search(q)
    if m is None:
        return finalize(f"{q} {answer}"), ["no blank found"]
    if len(_BLANK.findall(q)) > 1:
        notes.append("multiple-blanks: only the first replaced")
    before, after = q[: m.start()], q[m.end() :]
    a = normalize_ws(answer)
    if after.strip():
        a = _strip_trailing_punct(a)
    if re.search(r"[0-9A-Za-z]", before):
        a = _lower_first_unless_proper(a, a_parse)
    return finalize(f"{before} {a} {after}"), notes


def rule_cloze(question: str, answer: str, a_parse: Optional[SentenceParse] = None) -> str:
    """Replace the first blank run with the answer."""
    hypothesis, _ = _apply_cloze(question, answer, a_parse)
    return hypothesis


def _excision_span(parse: SentenceParse, index: int) -> Span:
    """Subtree span of the WH target, cut at clause-machinery relations."""
    members = {index}
    stack = [index]
    while stack:
        head = stack.pop()
        for child in parse.children(head):
            if child.deprel in _EXCISION_CUT or child.index in members:
                continue
            members.add(child.index)
            stack.append(child.index)
    lo, hi = min(members), max(members)
    return Span(lo=lo, hi=hi, contiguous=(hi - lo + 1 == len(members)))


def _first_child(parse: SentenceParse, index: int, deprels: frozenset[str] | set[str]):
    kids = parse.children(index, set(deprels))
    return kids[0] if kids else None


def _insert_before_trailing_punct(parse: SentenceParse, seq: list[int]) -> int:
    k = len(seq)
    while k > 0 and parse.token(seq[k - 1]).upos == "PUNCT":
        k -= 1
    return k


def rule_wh(
    q_parse: SentenceParse, answer: str, a_parse: Optional[SentenceParse] = None
) -> Optional[ConversionResult]:
    """Parse-driven WH rewriting; None when no interrogative token is found."""
    wh_index = find_wh(q_parse)
    if wh_index is None:
        return None
    trace: list[str] = []
    wh = q_parse.token(wh_index)

    if wh.deprel in ("det", "amod") and wh.head != 0:
        target = q_parse.token(wh.head)
    else:
        target = wh
    span = _excision_span(q_parse, target.index)
    if not span.contiguous:
        trace.append("non-projective wh phrase: excised minimal covering range")

    wh_form = wh.form.lower()
    is_subject = wh.deprel in _SUBJ_DEPRELS or target.deprel in _SUBJ_DEPRELS
    is_why = wh_form == "why"
    is_adjunct = wh_form in _ADJUNCT_WH and not is_subject

    root = q_parse.root_token
    cop = _first_child(q_parse, root.index, {"cop"})
    auxes = q_parse.children(root.index, {"aux", "aux:pass"})
    subj = next(
        (
            t
            for t in q_parse.children(root.index, set(_SUBJ_DEPRELS))
            if not (span.lo <= t.index <= span.hi)
        ),
        None,
    )

    in_span = lambda i: span.lo <= i <= span.hi
    seq = [t.index for t in q_parse.tokens if not in_span(t.index)]
    forms: dict[int, str] = {}
    reinflected: Optional[int] = None

    if not is_subject:
        if subj is None:
            trace.append("no subject found: inversion left untouched")
        else:
            subj_span = subtree_span(q_parse, subj.index)
            verbals = list(auxes) + ([cop] if cop is not None else [])
            fronted = sorted(
                (t for t in verbals if t.index < subj_span.lo and not in_span(t.index)),
                key=lambda t: t.index,
            )
            for t in fronted:
                if t.deprel.startswith("aux") and t.form.lower() in _DO_FORMS:
                    seq.remove(t.index)
                    head_tok = q_parse.token(t.head)
                    lemma = head_tok.lemma if head_tok.lemma not in ("", "_") else head_tok.form.lower()
                    forms[head_tok.index] = inflect(lemma, _DO_FORMS[t.form.lower()])
                    reinflected = head_tok.index
                    trace.append(
                        f"do-support undone: {t.form}+{head_tok.form} -> {forms[head_tok.index]}"
                    )
                elif subj_span.hi in seq:
                    seq.remove(t.index)
                    seq.insert(seq.index(subj_span.hi) + 1, t.index)
                    trace.append(f"fronted {t.form!r} moved after the subject")

    answer_at = None
    if is_subject:
        answer_at = next((i for i, x in enumerate(seq) if x > span.hi), len(seq))
        trace.append("subject wh: answer at the excised span position")
    elif is_why or is_adjunct:
        answer_at = _insert_before_trailing_punct(q_parse, seq)
        trace.append("adjunct wh: answer at clause end")
    else:
        anchor = None
        if cop is not None and cop.index in seq:
            anchor = cop.index
        elif reinflected is not None and reinflected in seq:
            anchor = reinflected
        elif root.index in seq:
            anchor = root.index
        if anchor is not None:
            answer_at = seq.index(anchor) + 1
            trace.append("object/attribute wh: answer after the predicate")
        else:
            answer_at = _insert_before_trailing_punct(q_parse, seq)
            trace.append("object wh without predicate anchor: answer at clause end")

    norm = normalize_answer(answer, mid_sentence=(answer_at > 0 or is_why), a_parse=a_parse)

    if is_why:
        statement_end = _insert_before_trailing_punct(q_parse, seq)
        parts = [forms.get(i, q_parse.token(i).form) for i in seq[:statement_end]]
        text = f"{_detokenize(parts)} because {norm}"
        trace.append("why: joined question statement and answer with 'because'")
    else:
        parts = [forms.get(i, q_parse.token(i).form) for i in seq]
        parts.insert(answer_at, norm)
        text = _detokenize(parts)
    return ConversionResult(hypothesis=finalize(text), rule_id="wh", trace=tuple(trace))


def _fallback(question: str, answer: str, reason: str) -> ConversionResult:
    hypothesis = finalize(f"{question} {answer}")
    return ConversionResult(
        hypothesis=hypothesis,
        rule_id="fallback",
        trace=(f"low-confidence: fallback declarativization ({reason})",),
    )


def convert(
    question: str,
    answer: str,
    q_parse: Optional[SentenceParse] = None,
    a_parse: Optional[SentenceParse] = None,
) -> ConversionResult:
    """Convert one (question, answer) pair; total, never raises."""
    q = normalize_ws(question)
    a = normalize_ws(answer)
    kind = classify_question(q)

    if kind is QuestionKind.CLOZE:
        hypothesis, notes = _apply_cloze(q, a, a_parse)
        return ConversionResult(hypothesis, "cloze", tuple(notes))
    if kind in (QuestionKind.WHICH_OF_FOLLOWING, QuestionKind.WHICH_OF_FOLLOWING_NEGATED):
        notes = []
        if kind is QuestionKind.WHICH_OF_FOLLOWING_NEGATED:
            notes.append("negated which-of-the-following")
        return ConversionResult(rule_which_true(q, a), "which_true", tuple(notes))
    if kind in (QuestionKind.WH, QuestionKind.WHY):
        if q_parse is not None:
            result = rule_wh(q_parse, a, a_parse)
            if result is not None:
                return result
            return _fallback(q, a, "no interrogative token in the parse")
        return _fallback(q, a, "no parse available")
    return _fallback(q, a, "no matching rule")


def convert_example(
    example: RCExample, parses: Optional[ParseBundle] = None
) -> tuple[list[NLIExample], list[QAExample]]:
    """All four options of one example, in both dataset forms."""
    q_parse = parses.question_parse(example.example_id) if parses else None
    nli: list[NLIExample] = []
    qa: list[QAExample] = []
    for k, option in enumerate(example.options):
        a_parse = parses.option_parse(example.example_id, k) if parses else None
        result = convert(example.question, option, q_parse=q_parse, a_parse=a_parse)
        label = LABELS[0] if k == example.gold_index else LABELS[1]
        nli.append(
            NLIExample(
                example_id=example.example_id,
                option_index=k,
                premise=example.passage,
                hypothesis=result.hypothesis,
                label=label,
                rule_id=result.rule_id,
                trace=result.trace,
            )
        )
        qa.append(
            QAExample(
                example_id=example.example_id,
                option_index=k,
                premise=example.passage,
                qa_text=f"{example.question} {option}",
                label=label,
            )
        )
    return nli, qa
