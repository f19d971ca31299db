"""Tagger, lemmatizer, and dependency-rule behavior.

The expected parses for the worked example sentences were derived by
hand against UD v2 conventions before the rules were written; the tests
freeze that analysis.
"""

import pytest

from parse_adapter.rules import (adj_lemma, noun_lemma, parse_sentence,
                                 parse_text, verb_lemma)


def one_sentence(text):
    sentences = parse_text(text)
    assert len(sentences) == 1
    return sentences[0]


def by_surface(tokens, surface):
    matches = [t for t in tokens if t.surface == surface]
    assert len(matches) == 1, f"{surface!r} not unique in sentence"
    return matches[0]


# ---------------------------------------------------------------------------
# Lemmatization


@pytest.mark.parametrize("form,base", [
    ("stifling", "stifle"), ("stifled", "stifle"), ("stifles", "stifle"),
    ("improved", "improve"), ("improving", "improve"),
    ("scares", "scare"), ("creates", "create"), ("created", "create"),
    ("voting", "vote"), ("hoping", "hope"), ("running", "run"),
    ("planned", "plan"), ("stopped", "stop"), ("telling", "tell"),
    ("tried", "try"), ("tries", "try"), ("watches", "watch"),
    ("goes", "go"), ("said", "say"), ("broke", "break"),
    ("needs", "need"), ("need", "need"), ("was", "be"), ("did", "do"),
])
def test_verb_lemmas(form, base):
    assert verb_lemma(form) == base


@pytest.mark.parametrize("form,base", [
    ("jobs", "job"), ("priorities", "priority"), ("taxes", "tax"),
    ("classes", "class"), ("heroes", "hero"), ("houses", "house"),
    ("policies", "policy"), ("news", "news"), ("congress", "congress"),
    ("people", "people"), ("children", "child"), ("economy", "economy"),
    ("middle-class", "middle-class"), ("us", "us"),
])
def test_noun_lemmas(form, base):
    assert noun_lemma(form) == base


@pytest.mark.parametrize("form,base", [
    ("better", "good"), ("best", "good"), ("worse", "bad"),
    ("stronger", "strong"), ("bigger", "big"), ("larger", "large"),
    ("local", "local"), ("blind", "blind"),
])
def test_adjective_lemmas(form, base):
    assert adj_lemma(form) == base


# ---------------------------------------------------------------------------
# Tagging in context


def test_verb_lexeme_in_nominal_slot_is_noun():
    tokens = one_sentence("The fight continues.")
    assert by_surface(tokens, "fight").upos == "NOUN"
    tokens = one_sentence("We fight for jobs.")
    assert by_surface(tokens, "fight").upos == "VERB"


def test_infinitival_to_vs_preposition():
    tokens = one_sentence("We went to the store to vote.")
    tos = [t for t in tokens if t.surface == "to"]
    assert [t.upos for t in tos] == ["ADP", "PART"]
    assert by_surface(tokens, "vote").upos == "VERB"


def test_have_is_main_verb_without_following_verb():
    tokens = one_sentence("We have a plan.")
    assert by_surface(tokens, "have").upos == "VERB"
    plan = by_surface(tokens, "plan")
    assert plan.deprel == "obj"
    tokens = one_sentence("We have been working.")
    assert by_surface(tokens, "have").upos == "AUX"


def test_participle_before_noun_is_attributive_adjective():
    tokens = one_sentence("Stifling regulations hurt the economy.")
    stifling = by_surface(tokens, "Stifling")
    assert stifling.upos == "ADJ"
    assert stifling.lemma == "stifle"
    assert stifling.deprel == "amod"
    assert tokens[stifling.head - 1].surface == "regulations"


def test_unknown_capitalized_word_mid_sentence_is_propn():
    tokens = one_sentence("We stand with Zorblatt today.")
    assert by_surface(tokens, "Zorblatt").upos == "PROPN"


def test_contraction_stem_recovers_auxiliary():
    tokens = one_sentence("We can't quit.")
    ca = by_surface(tokens, "ca")
    assert ca.upos == "AUX" and ca.lemma == "can"
    nt = by_surface(tokens, "n't")
    assert nt.upos == "PART" and nt.lemma == "not"


# ---------------------------------------------------------------------------
# Dependency structure: worked examples


def heads_and_rels(tokens):
    return [(t.surface, t.upos, t.head, t.deprel) for t in tokens]


def test_parse_improve_sentence():
    tokens = one_sentence(
        "My top priority is to improve the local economy and create jobs.")
    assert heads_and_rels(tokens) == [
        ("My", "DET", 3, "det"),
        ("top", "ADJ", 3, "amod"),
        ("priority", "NOUN", 6, "nsubj"),
        ("is", "AUX", 6, "aux"),
        ("to", "PART", 6, "mark"),
        ("improve", "VERB", 0, "root"),
        ("the", "DET", 9, "det"),
        ("local", "ADJ", 9, "amod"),
        ("economy", "NOUN", 6, "obj"),
        ("and", "CCONJ", 11, "cc"),
        ("create", "VERB", 6, "conj"),
        ("jobs", "NOUN", 11, "obj"),
        (".", "PUNCT", 6, "punct"),
    ]


def test_parse_stifle_sentence():
    tokens = one_sentence("we need to stop stifling our own economy")
    assert heads_and_rels(tokens) == [
        ("we", "PRON", 2, "nsubj"),
        ("need", "VERB", 0, "root"),
        ("to", "PART", 4, "mark"),
        ("stop", "VERB", 2, "xcomp"),
        ("stifling", "VERB", 4, "xcomp"),
        ("our", "DET", 8, "det"),
        ("own", "ADJ", 8, "amod"),
        ("economy", "NOUN", 5, "obj"),
    ]
    assert by_surface(tokens, "stifling").lemma == "stifle"


def test_parse_jumpstart_sentence():
    tokens = one_sentence("it's time to jumpstart the economy and put it "
                          "to work for the middle-class")
    economy = by_surface(tokens, "economy")
    assert economy.deprel == "obj"
    assert tokens[economy.head - 1].surface == "jumpstart"
    # "for the middle-class" is an oblique, never a direct object
    mc = by_surface(tokens, "middle-class")
    assert mc.deprel == "obl"
    assert by_surface(tokens, "put").deprel == "conj"


def test_copular_predicate_adjective():
    tokens = one_sentence("The rhetoric is blind.")
    blind = by_surface(tokens, "blind")
    assert blind.upos == "ADJ" and blind.head == 0
    rhetoric = by_surface(tokens, "rhetoric")
    assert rhetoric.deprel == "nsubj" and tokens[rhetoric.head - 1] is blind
    assert by_surface(tokens, "is").deprel == "cop"


def test_passive_subject_marked_nsubj_pass():
    tokens = one_sentence("The economy has been stifled by bad policies.")
    economy = by_surface(tokens, "economy")
    assert economy.deprel == "nsubj:pass"
    assert tokens[economy.head - 1].lemma == "stifle"
    assert by_surface(tokens, "policies").deprel == "obl"


def test_prepositional_object_is_oblique_not_obj():
    tokens = one_sentence("He works for the economy.")
    economy = by_surface(tokens, "economy")
    assert economy.deprel == "obl"
    assert tokens[economy.head - 1].lemma == "work"


def test_noun_compound_run_attaches_to_last():
    tokens = one_sentence("We oppose the tax plan.")
    tax = by_surface(tokens, "tax")
    assert tax.deprel == "compound"
    assert tokens[tax.head - 1].surface == "plan"
    assert by_surface(tokens, "plan").deprel == "obj"


def test_genitive_possessor():
    tokens = one_sentence("Obama's plan failed.")
    obama = by_surface(tokens, "Obama")
    assert obama.deprel == "nmod:poss"
    assert tokens[obama.head - 1].surface == "plan"
    assert by_surface(tokens, "'s").deprel == "case"


def test_coordinated_objects():
    tokens = one_sentence("We must protect jobs and wages.")
    jobs = by_surface(tokens, "jobs")
    wages = by_surface(tokens, "wages")
    assert jobs.deprel == "obj"
    assert wages.deprel == "conj"
    assert tokens[wages.head - 1] is jobs


# ---------------------------------------------------------------------------
# Tree invariants on varied input


TEXTS = [
    "My top priority is to improve the local economy and create jobs.",
    "it's time to jumpstart the economy and put it to work",
    "we need to stop stifling our own economy",
    "Vote! Join us today at https://ex.am #forward @sen_smith",
    "The U.S. economy grew 3.5% in 2015... and wages rose too.",
    "Why? Because washington is broken.",
    "No more broken promises for the middle-class families of Ohio",
    "RT this if you agree: healthcare is a right, not a privilege!!!",
    "1,200 new jobs. One community. Zero excuses.",
    "they said it could not be done - we proved them wrong",
]


@pytest.mark.parametrize("text", TEXTS)
def test_every_sentence_is_a_single_rooted_tree(text):
    for tokens in parse_text(text):
        n = len(tokens)
        roots = [t for t in tokens if t.head == 0]
        assert len(roots) == 1
        for t in tokens:
            assert 0 <= t.head <= n
            assert t.head != t.index


def test_parse_sentence_accepts_pretokenized_input():
    tokens = parse_sentence(["We", "must", "act"])
    assert [t.upos for t in tokens] == ["PRON", "AUX", "VERB"]
    assert tokens[2].head == 0
