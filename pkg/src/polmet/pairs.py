"""Candidate pair extraction from dependency parses.

Three constructions are harvested: verb-subject, verb-object, and
adjective-noun. The governor lemma comes first in every pair because the
classifier gates the noun by the governor. Dependents are restricted to
NOUN/PROPN; pronoun arguments carry no usable embedding signal and are
dropped unless explicitly enabled.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from polmet.conllu import ParsedSentence

# Legacy relation labels normalized to UD v2 names before matching.
DEPREL_ALIASES = {
    "dobj": "obj",
    "nsubjpass": "nsubj:pass",
}

SUBJECT_RELATIONS = {"nsubj", "nsubj:pass"}
OBJECT_RELATIONS = {"obj"}
NOUN_TAGS = {"NOUN", "PROPN"}

PAIR_COLUMNS = ("post_id", "sent_id", "construction", "governor", "noun",
                "governor_index", "noun_index", "copular")


@dataclass(frozen=True)
class CandidatePair:
    governor: str
    noun: str
    construction: str       # verb-subj | verb-obj | adj-noun
    governor_index: int
    noun_index: int
    post_id: str = ""
    sent_id: str = ""
    copular: bool = False   # adj-noun pair built from a copular predicate


def _normalize_deprel(deprel: str) -> str:
    return DEPREL_ALIASES.get(deprel, deprel)


def extract_pairs(sentence: ParsedSentence,
                  include_pronouns: bool = False) -> list[CandidatePair]:
    """Emit candidate (governor, noun) pairs for one sentence.

    verb-subj: nsubj/nsubj:pass dependents of a VERB head.
    verb-obj:  obj dependents of a VERB head (dobj normalized to obj).
    adj-noun:  amod adjectives paired with their noun head, plus copular
               predicate adjectives paired with their nsubj noun.

    Duplicates within a sentence are removed by (indices, construction).
    """
    tokens = sentence.tokens
    by_index = {t.index: t for t in tokens}
    dep_tags = set(NOUN_TAGS) | ({"PRON"} if include_pronouns else set())

    pairs: list[CandidatePair] = []
    seen: set[tuple[int, int, str]] = set()

    def emit(governor, noun, construction, copular=False):
        key = (governor.index, noun.index, construction)
        if key in seen:
            return
        seen.add(key)
        pairs.append(CandidatePair(
            governor=governor.lemma, noun=noun.lemma,
            construction=construction,
            governor_index=governor.index, noun_index=noun.index,
            post_id=sentence.post_id, sent_id=sentence.sent_id,
            copular=copular))

    for tok in tokens:
        head = by_index.get(tok.head)
        rel = _normalize_deprel(tok.deprel)
        if head is None:
            continue
        if rel in SUBJECT_RELATIONS and head.upos == "VERB" \
                and tok.upos in dep_tags:
            emit(head, tok, "verb-subj")
        elif rel in OBJECT_RELATIONS and head.upos == "VERB" \
                and tok.upos in dep_tags:
            emit(head, tok, "verb-obj")
        elif rel == "amod" and tok.upos == "ADJ" and head.upos in NOUN_TAGS:
            emit(tok, head, "adj-noun")

    # Copular predicate adjectives: ADJ head with a cop child pairs with
    # its nsubj noun child ("hope is blind" -> (blind, hope)).
    for tok in tokens:
        if tok.upos != "ADJ":
            continue
        children = [t for t in tokens if t.head == tok.index]
        if not any(_normalize_deprel(c.deprel) == "cop" for c in children):
            continue
        for child in children:
            if _normalize_deprel(child.deprel) in SUBJECT_RELATIONS \
                    and child.upos in dep_tags:
                emit(tok, child, "adj-noun", copular=True)

    return pairs


def extract_corpus_pairs(sentences: list[ParsedSentence],
                         include_pronouns: bool = False
                         ) -> list[CandidatePair]:
    """Extraction over many sentences; ordering follows the input order."""
    out: list[CandidatePair] = []
    for sentence in sentences:
        out.extend(extract_pairs(sentence, include_pronouns))
    return out


def write_pairs_tsv(path: str | Path, pairs: list[CandidatePair]) -> None:
    """Audit output: one tab-separated record per candidate pair."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(PAIR_COLUMNS)
        for p in pairs:
            writer.writerow([p.post_id, p.sent_id, p.construction,
                             p.governor, p.noun, p.governor_index,
                             p.noun_index, int(p.copular)])
