"""Built-in deterministic parser backend.

A closed-class lexicon plus suffix heuristics guess POS tags, and a small
set of attachment rules builds the tree: determiners, adjectives and
prepositions attach to the next nominal, nominals and everything else
attach to the main predicate.  The output is crude but always a valid
single-root tree, which is what the pipeline's file contract requires;
use the spacy backend when parse quality matters.
"""

from __future__ import annotations

import re

TOKEN = re.compile(r"n't|'(?:s|re|ll|ve|d|m)|\w+|[^\w\s]", re.IGNORECASE)

DETS = {
    "the", "a", "an", "this", "that", "these", "those",
    "my", "your", "his", "her", "its", "our", "their",
    "some", "any", "no", "every", "each", "all",
}
AUX_FORMS = {
    "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "have", "has", "had",
    "will", "would", "can", "could", "shall", "should", "may", "might", "must",
    "'s", "'re", "'m", "'ve", "'d", "'ll",
}
PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they",
    "me", "him", "us", "them", "himself", "herself", "itself",
    "someone", "anyone", "everyone", "nothing", "something",
}
ADPOSITIONS = {
    "in", "on", "at", "by", "for", "with", "from", "to", "of", "about",
    "near", "over", "under", "after", "before", "between", "through",
    "into", "during", "against", "without", "around",
}
CONJUNCTIONS = {"and", "or", "but"}
COMMON_VERBS = {
    "go", "went", "gone", "make", "made", "take", "took", "get", "got",
    "say", "said", "see", "saw", "know", "knew", "think", "thought",
    "come", "came", "want", "like", "love", "need", "find", "found",
    "give", "gave", "tell", "told", "write", "wrote", "read", "eat", "ate",
    "run", "ran", "live", "work", "play", "stay", "stop", "start",
    "end", "feel", "felt", "keep", "kept", "let", "put", "mean", "call",
    "travel", "spend", "spent", "buy", "bought", "win", "won", "study",
    "learn", "teach", "taught", "grow", "grew", "become", "became",
}
WH_TAGS = {
    "who": ("PRON", "WP"),
    "whom": ("PRON", "WP"),
    "whose": ("PRON", "WP$"),
    "what": ("PRON", "WP"),
    "which": ("DET", "WDT"),
    "when": ("ADV", "WRB"),
    "where": ("ADV", "WRB"),
    "why": ("ADV", "WRB"),
    "how": ("ADV", "WRB"),
}


def tokenize(text: str) -> list[str]:
    text = re.sub(r"(\w)(n't)\b", r"\1 \2", text, flags=re.IGNORECASE)
    return TOKEN.findall(text)


def _guess_pos(token: str, position: int) -> tuple[str, str, str]:
    """(upos, xpos, feats) for one token."""
    lower = token.lower()
    if lower in WH_TAGS:
        upos, xpos = WH_TAGS[lower]
        return upos, xpos, "PronType=Int"
    if not re.search(r"\w", token):
        return "PUNCT", ".", "_"
    if lower == "n't" or lower == "not":
        return "PART", "RB", "_"
    if lower in AUX_FORMS:
        return "AUX", "VBZ" if lower in ("is", "'s", "does", "has") else "VBD" if lower in ("was", "were", "did", "had", "'d") else "VBP", "_"
    if lower in DETS:
        return "DET", "DT", "_"
    if lower in PRONOUNS:
        return "PRON", "PRP", "_"
    if lower in ADPOSITIONS:
        return "ADP", "IN", "_"
    if lower in CONJUNCTIONS:
        return "CCONJ", "CC", "_"
    if re.fullmatch(r"\d[\d.,]*", token):
        return "NUM", "CD", "_"
    if lower in COMMON_VERBS:
        return "VERB", "VBD" if lower.endswith("ed") else "VB", "_"
    if lower.endswith("ly"):
        return "ADV", "RB", "_"
    if lower.endswith("ing"):
        return "VERB", "VBG", "_"
    if lower.endswith("ed"):
        return "VERB", "VBD", "_"
    if position > 0 and token[:1].isupper():
        return "PROPN", "NNP", "_"
    if lower.endswith("s") and len(lower) > 3:
        return "NOUN", "NNS", "_"
    return "NOUN", "NN", "_"


def _next_nominal(tags: list[str], start: int) -> int | None:
    for j in range(start, len(tags)):
        if tags[j] in ("NOUN", "PROPN", "PRON", "NUM"):
            return j
    return None


def parse(text: str) -> list[tuple]:
    """Parse one sentence into CoNLL-U rows (id, form, lemma, upos, xpos,
    feats, head, deprel, deps, misc).  Always a valid single-root tree."""
    forms = tokenize(text)
    if not forms:
        raise ValueError("no tokens")
    n = len(forms)
    tagged = [_guess_pos(form, i) for i, form in enumerate(forms)]
    upos = [t[0] for t in tagged]

    root = None
    for i in range(n):
        if upos[i] == "VERB":
            root = i
            break
    if root is None:
        for i in range(n):
            if upos[i] == "AUX":
                root = i
                break
    if root is None:
        nominal = _next_nominal(upos, 0)
        root = nominal if nominal is not None else 0

    heads = [0] * n
    deprels = ["dep"] * n
    subject_found = False
    for i in range(n):
        if i == root:
            heads[i] = 0
            deprels[i] = "root"
            continue
        pos = upos[i]
        if pos == "PUNCT":
            heads[i], deprels[i] = root + 1, "punct"
        elif pos == "DET":
            nominal = _next_nominal(upos, i + 1)
            if nominal is not None and nominal != i:
                heads[i], deprels[i] = nominal + 1, "det"
            else:
                heads[i], deprels[i] = root + 1, "det"
        elif pos == "ADJ" or (pos == "VERB" and tagged[i][1] == "VBG" and _next_nominal(upos, i + 1) == i + 1):
            nominal = _next_nominal(upos, i + 1)
            heads[i], deprels[i] = (nominal + 1, "amod") if nominal is not None else (root + 1, "amod")
        elif pos == "ADP":
            nominal = _next_nominal(upos, i + 1)
            if nominal is not None:
                heads[i], deprels[i] = nominal + 1, "case"
            else:
                heads[i], deprels[i] = root + 1, "case"
        elif pos in ("NOUN", "PROPN", "PRON", "NUM"):
            if not subject_found and i < root:
                heads[i], deprels[i] = root + 1, "nsubj"
                subject_found = True
            elif i < root:
                heads[i], deprels[i] = root + 1, "nmod"
            else:
                prev_is_case = i > 0 and upos[i - 1] == "ADP"
                heads[i], deprels[i] = root + 1, "obl" if prev_is_case else "obj"
        elif pos == "AUX":
            heads[i], deprels[i] = root + 1, "cop" if upos[root] != "VERB" and i != root else "aux"
        elif pos in ("ADV",):
            heads[i], deprels[i] = root + 1, "advmod"
        elif pos == "PART":
            heads[i], deprels[i] = root + 1, "advmod"
        elif pos == "CCONJ":
            heads[i], deprels[i] = root + 1, "cc"
        else:
            heads[i], deprels[i] = root + 1, "dep"

    rows = []
    for i, form in enumerate(forms):
        pos, xpos, feats = tagged[i]
        lemma = form.lower()
        rows.append((i + 1, form, lemma, pos, xpos, feats, heads[i], deprels[i], "_", "_"))
    return rows
