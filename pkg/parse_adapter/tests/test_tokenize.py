"""Tokenizer and sentence-splitter behavior."""

from parse_adapter.tokenize import split_sentences, tokenize


def test_basic_word_and_punct_split():
    assert tokenize("We must act now.") == ["We", "must", "act", "now", "."]


def test_clitics_split_penn_style():
    assert tokenize("it's") == ["it", "'s"]
    assert tokenize("don't") == ["do", "n't"]
    assert tokenize("can't") == ["ca", "n't"]
    assert tokenize("we'll win") == ["we", "'ll", "win"]
    assert tokenize("I've seen it") == ["I", "'ve", "seen", "it"]


def test_curly_apostrophe_clitic():
    assert tokenize("it’s time") == ["it", "’s", "time"]


def test_urls_mentions_hashtags_stay_whole():
    toks = tokenize("Read https://ex.am/p?q=1 via @sen_smith #jobs")
    assert "https://ex.am/p?q=1" in toks
    assert "@sen_smith" in toks
    assert "#jobs" in toks


def test_dotted_acronym_is_one_token():
    assert tokenize("the U.S. economy") == ["the", "U.S.", "economy"]


def test_numbers_and_hyphenated_words():
    assert tokenize("1,200 middle-class jobs") == \
        ["1,200", "middle-class", "jobs"]
    assert tokenize("a 3.5% raise") == ["a", "3.5%", "raise"]


def test_trailing_possessive_apostrophe_becomes_punct():
    assert tokenize("politicians' promises") == \
        ["politicians", "'", "promises"]


def test_sentence_split_on_terminals():
    sents = split_sentences("We did it. Thank you!")
    assert [s[0] for s in sents] == ["We", "Thank"]
    assert sents[0][-1] == "." and sents[1][-1] == "!"


def test_terminal_runs_absorbed_into_one_sentence():
    sents = split_sentences("Really?! Yes.")
    assert len(sents) == 2
    assert sents[0] == ["Really", "?", "!"]


def test_ellipsis_does_not_terminate():
    assert len(split_sentences("Wait... there is more.")) == 1


def test_line_breaks_split_sentences():
    sents = split_sentences("First point\nSecond point")
    assert len(sents) == 2


def test_empty_and_nonalphabetic_yield_no_sentences():
    assert split_sentences("") == []
    assert split_sentences("   \n ") == []
    assert split_sentences("!!! 123 ???") == []
