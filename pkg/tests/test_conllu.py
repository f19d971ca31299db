"""CoNLL-U parsing: comments, skipped node types, validation."""

import io

import pytest

from polmet.conllu import ConlluFormatError, parse_conllu, sentences_by_post

SIMPLE = """\
# post_id = post-1
# sent_id = post-1.s1
1\tDogs\tdog\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\tbark\tbark\tVERB\t_\t_\t0\troot\t_\t_

# sent_id = post-1.s2
1\tLoudly\tloudly\tADV\t_\t_\t0\troot\t_\t_

# post_id = post-2
# sent_id = post-2.s1
1\tHello\thello\tINTJ\t_\t_\t0\troot\t_\t_
"""


def test_parse_sentences_and_comments():
    sentences = parse_conllu(io.StringIO(SIMPLE))
    assert [len(s) for s in sentences] == [2, 1, 1]
    first = sentences[0]
    assert first.sent_id == "post-1.s1"
    assert first.post_id == "post-1"
    assert first.tokens[0].lemma == "dog"
    assert first.tokens[1].deprel == "root"
    assert first.tokens[1].head == 0


def test_post_id_carries_over_until_redeclared():
    sentences = parse_conllu(io.StringIO(SIMPLE))
    assert [s.post_id for s in sentences] == ["post-1", "post-1", "post-2"]
    grouped = sentences_by_post(sentences)
    assert sorted(grouped) == ["post-1", "post-2"]
    assert len(grouped["post-1"]) == 2


def test_multiword_ranges_and_empty_nodes_skipped():
    text = """\
1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_
2-3\tdon't\t_\t_\t_\t_\t_\t_\t_\t_
2\tdo\tdo\tAUX\t_\t_\t4\taux\t_\t_
3\tnot\tnot\tPART\t_\t_\t4\tadvmod\t_\t_
3.1\telided\telide\tVERB\t_\t_\t_\t_\t_\t_
4\tknow\tknow\tVERB\t_\t_\t0\troot\t_\t_
"""
    (sentence,) = parse_conllu(io.StringIO(text))
    assert [t.surface for t in sentence.tokens] == ["I", "do", "not", "know"]
    assert [t.index for t in sentence.tokens] == [1, 2, 3, 4]


def test_exactly_one_root_required():
    no_root = "1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n" \
              "2\tdog\tdog\tNOUN\t_\t_\t1\tnmod\t_\t_\n"
    with pytest.raises(ConlluFormatError, match="exactly one root"):
        parse_conllu(io.StringIO(no_root))
    two_roots = "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n" \
                "2\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n"
    with pytest.raises(ConlluFormatError, match="found 2"):
        parse_conllu(io.StringIO(two_roots))


def test_head_out_of_range():
    text = "1\tword\tword\tNOUN\t_\t_\t5\tnmod\t_\t_\n"
    with pytest.raises(ConlluFormatError, match="out of range"):
        parse_conllu(io.StringIO(text))


def test_column_count_and_sequence_checks():
    with pytest.raises(ConlluFormatError, match="line 1.*10"):
        parse_conllu(io.StringIO("1\tword\tword\n"))
    gap = "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n" \
          "3\tb\tb\tNOUN\t_\t_\t1\tnmod\t_\t_\n"
    with pytest.raises(ConlluFormatError, match="out of sequence"):
        parse_conllu(io.StringIO(gap))


def test_empty_input_and_trailing_sentence():
    assert parse_conllu(io.StringIO("")) == []
    # no trailing blank line: the final sentence still flushes
    text = "1\tend\tend\tNOUN\t_\t_\t0\troot\t_\t_"
    (sentence,) = parse_conllu(io.StringIO(text))
    assert sentence.tokens[0].lemma == "end"
