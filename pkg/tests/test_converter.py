import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rc2nli.converter import (
    QuestionKind,
    classify_question,
    convert,
    convert_example,
    finalize,
    normalize_answer,
    rule_cloze,
    rule_wh,
    rule_which_true,
)
from rc2nli.corpus import RCExample
from rc2nli.inflect import inflect
from rc2nli.parsetree import ParseBundle


@pytest.fixture(scope="module")
def parses(fixtures_dir):
    return ParseBundle.from_file(fixtures_dir / "conversion_parses.conllu")


# --- classification -------------------------------------------------------


@pytest.mark.parametrize(
    "question,kind",
    [
        ("Which of the following is TRUE about the report findings?", QuestionKind.WHICH_OF_FOLLOWING),
        ("Which of the following statements is NOT true?", QuestionKind.WHICH_OF_FOLLOWING_NEGATED),
        ("Which of the following were true in 1900?", QuestionKind.WHICH_OF_FOLLOWING),
        ("The sky is _.", QuestionKind.CLOZE),
        ("What is _?", QuestionKind.CLOZE),
        ("Why did he leave?", QuestionKind.WHY),
        ("Who wrote the book?", QuestionKind.WH),
        ("Which of the following is wrong?", QuestionKind.WH),
        ("Do you like tea?", QuestionKind.OTHER),
        ("Tom wrote a book.", QuestionKind.OTHER),
    ],
)
def test_classify_question(question, kind):
    assert classify_question(question) is kind


def test_classification_total():
    for q in ("", "?", "___", "what", "WHICH OF THE FOLLOWING IS TRUE?"):
        assert isinstance(classify_question(q), QuestionKind)


# --- rule_which_true ------------------------------------------------------


def test_which_true_gold_byte_exact():
    got = rule_which_true(
        "Which of the following is TRUE about the report findings?",
        "The reading scores among older children have improved.",
    )
    assert got == "The reading scores among older children have improved is TRUE."


def test_which_true_negated():
    got = rule_which_true("Which of the following is NOT true?", "Fish can fly")
    assert got == "Fish can fly is NOT true."


def test_which_true_strips_answer_punctuation():
    got = rule_which_true("Which of the following is true?", "Snow is cold!")
    assert got == "Snow is cold is TRUE."


# --- rule_cloze -----------------------------------------------------------


def test_cloze_simple():
    assert rule_cloze("The sky is _.", "blue") == "The sky is blue."


def test_cloze_sentence_initial_keeps_case():
    assert rule_cloze("_ is the capital.", "Paris") == "Paris is the capital."


def test_cloze_multi_underscore_run():
    assert rule_cloze("He said ___ and left.", "goodbye") == "He said goodbye and left."


def test_cloze_two_blanks_replaces_first_only():
    result = convert("_ and _ are colors.", "red")
    assert result.hypothesis == "Red and _ are colors."
    assert any("multiple-blanks" in note for note in result.trace)


def test_cloze_final_blank_keeps_answer_punct():
    assert rule_cloze("He said _", "hello.") == "He said hello."
    assert rule_cloze("He said _", "hello") == "He said hello."


def test_cloze_strips_answer_punct_mid_sentence():
    assert rule_cloze("The _ is big.", "dog.") == "The dog is big."


# --- rule_wh --------------------------------------------------------------


def test_wh_subject(parses):
    got = rule_wh(parses.get("q_who/q"), "Tom")
    assert got.hypothesis == "Tom wrote the book."


def test_wh_adjunct_with_do_support(parses):
    got = rule_wh(parses.get("q_war/q"), "In 1945")
    assert got.hypothesis == "The war ended in 1945."


def test_wh_copular_attribute(parses):
    got = rule_wh(parses.get("q_title/q"), "Blame! Blame! Blame!")
    expected = "The best title of the passage's " + normalize_answer(
        "Blame! Blame! Blame!", mid_sentence=True
    ) + "."
    assert got.hypothesis == expected
    assert got.hypothesis.startswith("The best title of the passage's blame")


def test_wh_object_after_main_verb(parses):
    # Awkward but rule-faithful: the answer clause lands in object position.
    got = rule_wh(
        parses.get("q_exp/q"),
        "He realized that slowing down his life speed could bring him more content.",
    )
    assert got.hypothesis == (
        "The experiment had he realized that slowing down his life speed "
        "could bring him more content on Alexander."
    )


def test_wh_object_proper_noun_answer_keeps_case(parses):
    got = rule_wh(parses.get("q_call/q"), "Tom", parses.get("q_call/o0"))
    assert got.hypothesis == "Mary called Tom."


def test_wh_why_joins_with_because(parses):
    got = rule_wh(parses.get("q_why/q"), "He was tired")
    assert got.hypothesis == "He left because he was tired."


def test_wh_fronted_modal_moved(parses):
    got = rule_wh(parses.get("q_modal/q"), "A mystery")
    assert got.hypothesis == "The title will be a mystery."


def test_wh_subject_determiner(parses):
    got = rule_wh(parses.get("q_subjdet/q"), "The cat")
    assert got.hypothesis == "The cat ate the fish."


def test_do_support_oracle(parses, fixtures_dir):
    rows = (fixtures_dir / "do_support_oracle.tsv").read_text().strip().split("\n")
    assert len(rows) == 25
    for row in rows:
        sid, question, answer, expected = row.split("\t")
        q_parse = parses.get(f"{sid}/q")
        assert q_parse is not None, sid
        result = convert(question, answer, q_parse=q_parse)
        assert result.rule_id == "wh", (sid, result.rule_id, result.trace)
        assert result.hypothesis == expected, (sid, result.hypothesis)


# --- inflect ----------------------------------------------------------------


@pytest.mark.parametrize(
    "lemma,target,expected",
    [
        ("end", "past", "ended"),
        ("live", "past", "lived"),
        ("study", "past", "studied"),
        ("play", "past", "played"),
        ("go", "past", "went"),
        ("write", "past", "wrote"),
        ("stop", "past", "stopped"),
        ("mean", "third_singular", "means"),
        ("watch", "third_singular", "watches"),
        ("pass", "third_singular", "passes"),
        ("fix", "third_singular", "fixes"),
        ("study", "third_singular", "studies"),
        ("go", "third_singular", "goes"),
        ("have", "third_singular", "has"),
        ("buzz", "third_singular", "buzzes"),
        ("wash", "third_singular", "washes"),
        ("end", "base", "end"),
        ("go", "base", "go"),
    ],
)
def test_inflect(lemma, target, expected):
    assert inflect(lemma, target) == expected


def test_inflect_never_fails_on_unknown():
    assert inflect("zorble", "past") == "zorbled"
    assert inflect("zorb", "past") == "zorbed"
    assert inflect("zorb", "third_singular") == "zorbs"


# --- finalize ---------------------------------------------------------------


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("the war ended in 1945 ?", "The war ended in 1945."),
        ("The war ended in 1945.", "The war ended in 1945."),
        ("", ""),
        ("hello   world", "Hello world."),
        ("done !", "Done!"),
        ("he said \"stop.\"", "He said \"stop.\""),
        ("trailing comma ,", "Trailing comma."),
    ],
)
def test_finalize(raw, expected):
    assert finalize(raw) == expected


def test_finalize_idempotent_on_fixtures():
    samples = [
        "the war ended in 1945 ?",
        "The sky is blue.",
        "a ? b",
        "word .",
        "  spaced   out  ",
        "it 's here",
    ]
    for s in samples:
        once = finalize(s)
        assert finalize(once) == once, s


@given(st.text(max_size=80))
@settings(max_examples=300, deadline=None)
def test_finalize_idempotent_property(s):
    once = finalize(s)
    assert finalize(once) == once


@given(st.text(min_size=1, max_size=80))
@settings(max_examples=300, deadline=None)
def test_finalize_well_formed_property(s):
    out = finalize(s)
    assert "?" not in out
    if out:
        assert out.endswith(".") or out.endswith("!") or out.endswith('."')


# --- convert dispatch and convert_example ----------------------------------


def test_convert_gold_fixture_rows(parses, fixtures_dir):
    rows = (fixtures_dir / "gold_conversions.tsv").read_text().rstrip("\n").split("\n")
    assert len(rows) == 6
    for row in rows:
        parts = row.split("\t")
        question, answer, expected = parts[:3]
        parse_id = parts[3] if len(parts) > 3 else ""
        q_parse = parses.get(f"{parse_id}/q") if parse_id else None
        result = convert(question, answer, q_parse=q_parse)
        assert result.hypothesis == expected, (question, result.hypothesis)


def test_convert_fallback_without_parse():
    result = convert("What influenced the outcome the most overall?", "The weather")
    assert result.rule_id == "fallback"
    assert any("low-confidence" in note for note in result.trace)
    assert "?" not in result.hypothesis
    assert result.hypothesis.endswith(".")


def test_convert_other_kind_uses_fallback():
    result = convert("Do you like tea?", "Yes")
    assert result.rule_id == "fallback"
    assert result.hypothesis == "Do you like tea Yes."


def test_convert_deterministic(parses):
    a = convert("Who wrote the book?", "Tom", q_parse=parses.get("q_who/q"))
    b = convert("Who wrote the book?", "Tom", q_parse=parses.get("q_who/q"))
    assert a == b


def _example():
    return RCExample(
        example_id="high2.txt#0",
        passage="Tom spent three winters writing the book.",
        question="Who wrote the book?",
        options=("Tom", "Mary", "The mayor", "A teacher"),
        gold_index=0,
        split="dev",
    )


def test_convert_example_labels(parses, fixtures_dir):
    bundle = ParseBundle.from_parses([])
    nli, qa = convert_example(_example(), bundle)
    assert len(nli) == 4 and len(qa) == 4
    assert [r.label for r in nli].count("entailment") == 1
    assert nli[0].label == "entailment"
    assert all(r.label == "not_entailment" for r in nli[1:])
    assert [r.label for r in qa] == [r.label for r in nli]
    assert all(r.premise == _example().passage for r in nli + qa)


def test_convert_example_qa_text_order():
    nli, qa = convert_example(_example(), ParseBundle.from_parses([]))
    for k, r in enumerate(qa):
        assert r.qa_text == f"Who wrote the book? {_example().options[k]}"
        assert r.option_index == k


def test_convert_example_gold_index_one():
    ex = RCExample(
        example_id="x#0",
        passage="p text",
        question="Who wrote the book?",
        options=("a", "b", "c", "d"),
        gold_index=1,
        split="train",
    )
    nli, _ = convert_example(ex, ParseBundle.from_parses([]))
    assert nli[1].label == "entailment"


def test_answer_token_preservation_on_rule_paths(parses):
    cases = [
        ("The sky is _.", "bright blue", None),
        ("Which of the following is TRUE?", "Snow melts in spring.", None),
        ("Who wrote the book?", "Tom", parses.get("q_who/q")),
        ("When did the war end?", "In 1945", parses.get("q_war/q")),
    ]
    for question, answer, q_parse in cases:
        result = convert(question, answer, q_parse=q_parse)
        assert result.rule_id in ("cloze", "which_true", "wh")
        norm = normalize_answer(answer, mid_sentence=True)
        hyp_tokens = set(re.findall(r"[a-z0-9]+", result.hypothesis.lower()))
        for token in re.findall(r"[a-z0-9]+", norm.lower()):
            assert token in hyp_tokens, (question, token)


def test_answer_quotes_preserved_verbatim():
    got = rule_cloze("The sign said _.", '"keep out"')
    assert '"keep out"' in got
    curly = convert("Which of the following is true?", "“Stay” was the word.")
    assert "“Stay”" in curly.hypothesis
