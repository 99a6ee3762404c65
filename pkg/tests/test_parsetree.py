import pytest

from rc2nli.parsetree import (
    ConlluFormatError,
    ConlluStructureError,
    ParseBundle,
    emit_conllu,
    find_wh,
    parse_conllu,
    parse_conllu_file,
    subtree_span,
)


@pytest.fixture(scope="module")
def trees(fixtures_dir):
    parses = parse_conllu_file(fixtures_dir / "trees.conllu")
    return {p.sentence_id: p for p in parses}


def test_parse_basic_sentence(trees):
    s1 = trees["s1"]
    assert len(s1.tokens) == 3
    root = s1.root_token
    assert root.index == 2 and root.form == "wrote"
    assert [t.deprel for t in s1.tokens] == ["nsubj", "root", "obj"]
    assert s1.tokens[0].feats == {}
    assert s1.tokens[1].feats == {"Tense": "Past"}


def test_parse_empty_document():
    assert parse_conllu("") == []
    assert parse_conllu("\n\n") == []


def test_mwt_and_empty_nodes_skipped(trees):
    s6 = trees["s6"]
    assert [t.form for t in s6.tokens] == ["He", "has", "n't", "left", "."]
    assert [t.index for t in s6.tokens] == [1, 2, 3, 4, 5]


def test_wrong_column_count_reports_line():
    doc = "# sent_id = x\n1\tTom\tTom\tPROPN\tNNP\t_\t2\tnsubj\t_\n"
    with pytest.raises(ConlluFormatError) as exc:
        parse_conllu(doc)
    assert "line 2" in str(exc.value)


def test_self_head_rejected():
    doc = (
        "# sent_id = bad\n"
        "1\ta\ta\tX\t_\t_\t1\tdep\t_\t_\n"
        "2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(ConlluStructureError) as exc:
        parse_conllu(doc)
    assert "bad" in str(exc.value)


def test_cycle_rejected():
    doc = (
        "# sent_id = cyc\n"
        "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
        "3\tc\tc\tX\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(ConlluStructureError):
        parse_conllu(doc)


def test_zero_and_multiple_roots_rejected():
    no_root = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
    with pytest.raises(ConlluStructureError):
        parse_conllu(no_root)
    two_roots = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n"
    with pytest.raises(ConlluStructureError):
        parse_conllu(two_roots)


def test_noncontiguous_ids_rejected():
    doc = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n3\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
    with pytest.raises(ConlluStructureError):
        parse_conllu(doc)


def test_head_out_of_range_rejected():
    doc = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t9\tdep\t_\t_\n"
    with pytest.raises(ConlluStructureError):
        parse_conllu(doc)


def test_root_deprel_required():
    doc = "1\ta\ta\tX\t_\t_\t0\tdep\t_\t_\n"
    with pytest.raises(ConlluStructureError):
        parse_conllu(doc)


def test_find_wh_cases(trees):
    assert find_wh(trees["s2"]) == 1
    assert find_wh(trees["s3"]) is None
    assert find_wh(trees["s4"]) == 1


def test_find_wh_feats_priority(trees):
    # "which" with PronType=Rel must not count as interrogative.
    assert find_wh(trees["s7"]) is None


def test_subtree_span_root_covers_sentence(trees):
    for parse in trees.values():
        span = subtree_span(parse, parse.root_token.index)
        assert (span.lo, span.hi) == (1, len(parse.tokens))


def test_subtree_span_cases(trees):
    span = subtree_span(trees["s4"], 1)
    assert (span.lo, span.hi) == (1, 4)
    assert span.contiguous
    leaf = subtree_span(trees["s1"], 1)
    assert (leaf.lo, leaf.hi) == (1, 1)


def test_subtree_span_non_projective(trees):
    span = subtree_span(trees["s5"], 2)
    assert (span.lo, span.hi) == (1, 7)
    assert not span.contiguous


def test_acyclicity_walk(trees):
    for parse in trees.values():
        n = len(parse.tokens)
        for tok in parse.tokens:
            steps, cur = 0, tok
            while cur.head != 0:
                cur = parse.token(cur.head)
                steps += 1
                assert steps <= n


def test_round_trip_all_fixtures(fixtures_dir):
    for name in ("trees.conllu", "conversion_parses.conllu"):
        parses = parse_conllu_file(fixtures_dir / name)
        assert parses, name
        again = parse_conllu(emit_conllu(parses))
        assert again == parses, name


def test_emit_is_deterministic(trees):
    parses = sorted(trees.values(), key=lambda p: p.sentence_id)
    assert emit_conllu(parses) == emit_conllu(parses)


def test_bundle_from_file(fixtures_dir):
    bundle = ParseBundle.from_file(fixtures_dir / "conversion_parses.conllu")
    assert bundle.get("q_who/q") is not None
    assert bundle.get("q_call/o0") is not None
    assert bundle.get("nope/q") is None


def test_bundle_rejects_duplicates(trees):
    p = trees["s1"]
    with pytest.raises(ValueError):
        ParseBundle.from_parses([p, p])


def test_bundle_rejects_bad_id_scheme(trees):
    with pytest.raises(ValueError):
        ParseBundle.from_parses([trees["s1"]])
