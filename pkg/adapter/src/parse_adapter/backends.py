"""Parser backends.

"spacy" is the off-the-shelf path and needs a locally installed model
(Universal Dependencies labels, PTB xpos tags); "heuristic" is the
built-in deterministic fallback with no dependencies.  Both produce
CoNLL-U rows: (id, form, lemma, upos, xpos, feats, head, deprel, deps, misc).
"""

from __future__ import annotations

from . import heuristic

DEFAULT_SPACY_MODEL = "en_core_web_sm"


class BackendUnavailable(Exception):
    """The requested backend (or its model) is not installed."""


class HeuristicBackend:
    name = "heuristic"

    def parse(self, text: str) -> list[tuple]:
        return heuristic.parse(text)


class SpacyBackend:
    name = "spacy"

    def __init__(self, model: str = DEFAULT_SPACY_MODEL):
        try:
            import spacy
        except ImportError as e:
            raise BackendUnavailable(
                "spacy is not installed; install it with 'pip install spacy' and "
                f"download a model with 'python -m spacy download {model}', "
                "or run with --backend heuristic"
            ) from e
        try:
            self._nlp = spacy.load(model)
        except OSError as e:
            raise BackendUnavailable(
                f"spacy model {model!r} is not available locally; download it with "
                f"'python -m spacy download {model}', or run with --backend heuristic"
            ) from e

    def parse(self, text: str) -> list[tuple]:
        doc = self._nlp(text)
        tokens = [t for t in doc if not t.is_space]
        if not tokens:
            raise ValueError("no tokens")
        index = {t.i: k + 1 for k, t in enumerate(tokens)}
        # spacy may split the request into several sentences; keep a single
        # root and chain the extra sentence roots under it as parataxis.
        first_root = None
        rows = []
        for k, t in enumerate(tokens):
            if t.head is t:  # sentence root
                if first_root is None:
                    first_root = k + 1
                    head, deprel = 0, "root"
                else:
                    head, deprel = first_root, "parataxis"
            else:
                head, deprel = index[t.head.i], t.dep_.lower()
            feats = str(t.morph) if str(t.morph) else "_"
            rows.append(
                (k + 1, t.text, t.lemma_ or t.text.lower(), t.pos_, t.tag_ or "_", feats, head, deprel, "_", "_")
            )
        return rows


def make_backend(name: str, model: str = DEFAULT_SPACY_MODEL):
    if name == "heuristic":
        return HeuristicBackend()
    if name == "spacy":
        return SpacyBackend(model)
    raise ValueError(f"unknown backend {name!r}")
