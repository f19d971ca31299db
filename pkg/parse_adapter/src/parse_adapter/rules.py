"""Deterministic rule-based tagger, lemmatizer, and dependency parser.

The grammar targets the shape of short political posts: a main verb with
subject/object nominals, adjectival modifiers, prepositional phrases,
infinitive chains ("need to stop stifling ..."), coordination, and
copular predicates ("the rhetoric is blind"). Attachment decisions are
local scans over part-of-speech zones, so the output is a valid
single-root tree for any input, and identical input always yields
identical output. Relation names follow UD v2 (obj, not dobj).

The design favors precision of the relations the downstream pair
extractor consumes (nsubj/obj/amod/cop): a nominal is attached as obj
only when nothing but noun-phrase material separates it from a verb to
its left, and prepositional objects are routed to obl/nmod so they can
never surface as direct objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from parse_adapter.lexicon import (ADJECTIVES, ADPOSITIONS, ADVERBS,
                                   AUX_LEMMAS, AUXILIARIES,
                                   CLITIC_AUX_LEMMAS, CONTRACTION_STEMS,
                                   COORDINATORS, DETERMINERS,
                                   IRREGULAR_ADJECTIVES, IRREGULAR_NOUNS,
                                   IRREGULAR_VERBS, MODAL_ONLY,
                                   NOUN_NO_STRIP, PRONOUNS, SUBORDINATORS,
                                   VERB_BASES)
from parse_adapter.tokenize import split_sentences


@dataclass
class Token:
    """One parsed token; head is 1-based, 0 marks the sentence root."""
    index: int
    surface: str
    lemma: str
    upos: str
    head: int = 0
    deprel: str = "dep"


_URL_RE = re.compile(r"^(?:https?://|www\.)")
_ACRONYM_RE = re.compile(r"^(?:[A-Za-z]\.){2,}$")
_NUM_RE = re.compile(r"^\d+(?:[.,]\d+)*%?$")
_PUNCT_CHARS = set(".,!?;:()[]{}\"'“”‘’…—–-/\\")

_NOMINAL = frozenset({"NOUN", "PROPN"})
_NP_ZONE = frozenset({"DET", "ADJ", "NUM", "ADV"})
_CLAUSE_BOUNDARY = frozenset({"CCONJ", "SCONJ", "PUNCT"})
_ADJ_SUFFIXES = ("ful", "ous", "ish", "able", "ible", "ive", "less")


# ---------------------------------------------------------------------------
# Lemmatization


def _undouble(stem: str) -> str:
    """planning -> plan; doubled l/s/f/z are real (tell, miss, stuff)."""
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] not in "lsfz":
        return stem[:-1]
    return stem


def _restore_e(stem: str) -> str:
    """Heuristic e-restoration for stems of unknown verbs (stifl -> stifle)."""
    if stem.endswith(("v", "u", "c")):
        return stem + "e"
    if len(stem) >= 2 and stem[-1] in "lr" and stem[-2] not in "aeiou":
        return stem + "e"
    return stem


def _unknown_stem(stem: str) -> str:
    und = _undouble(stem)
    return und if und != stem else _restore_e(stem)


_ES_STRIP = ("ches", "shes", "xes", "zes", "oes", "sses")


def verb_lemma(word: str) -> str:
    """Map an inflected verb form to its base.

    Irregular forms come from a table; regular inflections are stripped
    and the candidate stems validated against the verb lexicon before
    any orthographic heuristic is trusted.
    """
    w = word.lower()
    if w in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[w]
    if w in AUX_LEMMAS:
        return AUX_LEMMAS[w]
    if w in VERB_BASES:
        return w
    if w.endswith("ing") and len(w) > 4:
        stem = w[:-3]
        for cand in (stem, stem + "e", _undouble(stem)):
            if cand in VERB_BASES:
                return cand
        return _unknown_stem(stem)
    if w.endswith("ied") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("ed") and len(w) > 3:
        for cand in (w[:-1], w[:-2], _undouble(w[:-2])):
            if cand in VERB_BASES:
                return cand
        return _unknown_stem(w[:-2])
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("s") and len(w) > 2 and not w.endswith("ss"):
        strips = [w[:-1]]
        if w.endswith("es"):
            strips.insert(0, w[:-2])
        for cand in strips:
            if cand in VERB_BASES:
                return cand
        return w[:-2] if w.endswith(_ES_STRIP) else w[:-1]
    return w


def noun_lemma(word: str) -> str:
    """Singularize a noun form (jobs -> job, priorities -> priority)."""
    w = word.lower()
    if w in IRREGULAR_NOUNS:
        return IRREGULAR_NOUNS[w]
    if (w in NOUN_NO_STRIP or len(w) <= 2 or not w.endswith("s")
            or w.endswith("ss")):
        return w
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith(_ES_STRIP):
        return w[:-2]
    return w[:-1]


def adj_lemma(word: str) -> str:
    """Reduce comparative/superlative forms validated by the lexicon."""
    w = word.lower()
    if w in IRREGULAR_ADJECTIVES:
        return IRREGULAR_ADJECTIVES[w]
    if w in ADJECTIVES:
        return w
    for suffix in ("est", "er"):
        if w.endswith(suffix) and len(w) > len(suffix) + 2:
            stem = w[:-len(suffix)]
            for cand in (stem, stem + "e", _undouble(stem)):
                if cand in ADJECTIVES:
                    return cand
    return w


def is_verb_form(word: str) -> bool:
    w = word.lower()
    return w in IRREGULAR_VERBS or verb_lemma(w) in VERB_BASES


def is_adjective_form(word: str) -> bool:
    w = word.lower()
    return w in IRREGULAR_ADJECTIVES or adj_lemma(w) in ADJECTIVES


# ---------------------------------------------------------------------------
# Part-of-speech tagging


def _initial_tag(surface: str, lower: str, prev: str | None) -> str | None:
    """Context-free tag, or None for open-class words resolved later.

    "to" gets the placeholder tag TO; it is resolved to PART (infinitive
    marker) or ADP once its right context is known.
    """
    if _URL_RE.match(surface) or surface[:1] in "@#":
        return "SYM"
    if _NUM_RE.match(surface):
        return "NUM"
    if _ACRONYM_RE.match(surface):
        return "PROPN"
    if not any(c.isalpha() for c in surface):
        return "PUNCT" if set(surface) <= _PUNCT_CHARS else "SYM"
    if lower == "n't":
        return "PART"
    if lower == "'s":
        return "AUX" if prev == "PRON" else "PART"
    if lower in CLITIC_AUX_LEMMAS:
        return "AUX"
    if lower == "not":
        return "PART"
    if lower == "to":
        return "TO"
    if lower in DETERMINERS:
        return "DET"
    if lower in PRONOUNS:
        return "PRON"
    if lower in AUXILIARIES:
        return "AUX"
    if lower == "like" and prev == "PRON":
        return "VERB"
    if lower in ADPOSITIONS:
        return "ADP"
    if lower in COORDINATORS:
        return "CCONJ"
    if lower in SUBORDINATORS:
        return "SCONJ"
    if lower in ADVERBS:
        return "ADV"
    if is_verb_form(lower):
        return "VERB"
    if is_adjective_form(lower):
        return "ADJ"
    if lower.endswith("ly") and len(lower) > 3:
        return "ADV"
    if lower.endswith(_ADJ_SUFFIXES) and len(lower) > 4:
        return "ADJ"
    if lower.endswith(("ing", "ed")) and len(lower) > 4:
        return "VERB"
    return None


def _next_skipping(upos: list[str], i: int, skip: frozenset[str]) -> int | None:
    for j in range(i + 1, len(upos)):
        if upos[j] not in skip:
            return j
    return None


def _fix_tags(lowers: list[str], upos: list[str]) -> None:
    n = len(upos)

    # Infinitive "to" vs preposition "to": PART when a verb follows.
    for i in range(n):
        if upos[i] != "TO":
            continue
        j = _next_skipping(upos, i, frozenset({"ADV", "PART"}))
        if j is not None and (upos[j] in ("VERB", "AUX", "TO")
                              or is_verb_form(lowers[j])):
            upos[i] = "PART"
        else:
            upos[i] = "ADP"

    # Verb lexemes in nominal positions: "the vote", "the fight";
    # participles directly before a noun become attributive adjectives
    # ("the broken system", "Stifling regulations hurt ...").
    for i in range(n):
        if upos[i] != "VERB":
            continue
        inflected = lowers[i].endswith(("ing", "ed")) \
            or lowers[i] in IRREGULAR_VERBS
        next_nominal = i + 1 < n and upos[i + 1] in _NOMINAL
        in_np_slot = i > 0 and (
            upos[i - 1] in ("DET", "ADJ", "NUM", "ADP")
            or (upos[i - 1] == "PART" and lowers[i - 1] == "'s"))
        after_break = i == 0 or upos[i - 1] in ("CCONJ", "SCONJ", "PUNCT")
        if in_np_slot:
            upos[i] = "ADJ" if (inflected and next_nominal) else "NOUN"
        elif inflected and next_nominal and after_break:
            upos[i] = "ADJ"
        elif lowers[i] in VERB_BASES and i > 0 and upos[i - 1] in _NOMINAL:
            # "the tax plan": a bare verb lexeme closing a determined,
            # all-singular nominal run is a compound noun; after a plural
            # run ("the politicians stifle ...") it is the clause verb.
            j = i - 1
            singular = True
            while j >= 0 and upos[j] in _NOMINAL:
                if lowers[j] in IRREGULAR_NOUNS \
                        or noun_lemma(lowers[j]) != lowers[j]:
                    singular = False
                j -= 1
            if singular and j >= 0 and (
                    upos[j] in ("DET", "ADJ", "NUM", "ADP")
                    or (upos[j] == "PART" and lowers[j] == "'s")):
                upos[i] = "NOUN"

    # have/do auxiliaries with no verb before the next clause boundary
    # are the clause's main verb ("we have a plan"); runs after the
    # nominal-slot pass so "a plan" no longer looks like a verb.
    for i in range(n):
        if upos[i] != "AUX" or lowers[i] in MODAL_ONLY \
                or AUX_LEMMAS.get(lowers[i]) == "be":
            continue
        has_verb = False
        for j in range(i + 1, n):
            if upos[j] in _CLAUSE_BOUNDARY:
                break
            if upos[j] == "VERB":
                has_verb = True
                break
        if not has_verb:
            upos[i] = "VERB"

    # "that" is a determiner only before nominal material.
    for i in range(n):
        if lowers[i] != "that" or upos[i] != "DET":
            continue
        j = _next_skipping(upos, i, frozenset({"ADV"}))
        if j is None or upos[j] not in ("NOUN", "PROPN", "ADJ", "NUM"):
            upos[i] = "SCONJ"


def _lemma_for(lower: str, upos: str) -> str:
    if upos == "VERB":
        return verb_lemma(lower)
    if upos == "AUX":
        if lower in CLITIC_AUX_LEMMAS:
            return CLITIC_AUX_LEMMAS[lower]
        return AUX_LEMMAS.get(lower, lower)
    if upos == "NOUN":
        return noun_lemma(lower)
    if upos == "ADJ":
        lemma = adj_lemma(lower)
        if lemma == lower and lower not in ADJECTIVES and is_verb_form(lower):
            return verb_lemma(lower)   # participial adjective: stifling
        return lemma
    if upos == "PART":
        return "not" if lower == "n't" else lower
    return lower


def tag_sentence(surfaces: list[str]) -> list[Token]:
    """Tag and lemmatize one tokenized sentence."""
    lowers = [s.lower().replace("’", "'") for s in surfaces]
    # Contraction stems recover their full form ("ca" + "n't" -> can).
    for i in range(len(lowers) - 1):
        if lowers[i + 1] == "n't" and lowers[i] in CONTRACTION_STEMS:
            lowers[i] = CONTRACTION_STEMS[lowers[i]]

    upos: list[str] = []
    for i, surface in enumerate(surfaces):
        prev = upos[i - 1] if i else None
        tag = _initial_tag(surface, lowers[i], prev)
        if tag is None:
            tag = "PROPN" if i > 0 and surface[0].isupper() else "NOUN"
        upos.append(tag)
    _fix_tags(lowers, upos)

    return [Token(index=i + 1, surface=surfaces[i],
                  lemma=_lemma_for(lowers[i], upos[i]), upos=upos[i])
            for i in range(len(surfaces))]


# ---------------------------------------------------------------------------
# Dependency attachment


def _run_end(upos: list[str], j: int) -> int:
    while j + 1 < len(upos) and upos[j + 1] in _NOMINAL:
        j += 1
    return j


def _first_right(upos, i, targets, skip):
    for j in range(i + 1, len(upos)):
        if upos[j] in targets:
            return j
        if upos[j] not in skip:
            return None
    return None


def _nearest_left(upos, i, targets):
    for j in range(i - 1, -1, -1):
        if upos[j] in targets:
            return j
    return None


def _anywhere_right(upos, i, targets, stop=frozenset()):
    for j in range(i + 1, len(upos)):
        if upos[j] in targets:
            return j
        if upos[j] in stop:
            return None
    return None


def _select_root(upos: list[str]) -> tuple[int, bool]:
    root = next((i for i, u in enumerate(upos) if u == "VERB"), None)
    if root is not None:
        return root, False
    aux = next((i for i, u in enumerate(upos) if u == "AUX"), None)
    if aux is not None:
        pred = next((j for j in range(aux + 1, len(upos))
                     if upos[j] in ("ADJ", "NOUN", "PROPN", "PRON", "NUM")),
                    None)
        if pred is not None:
            return pred, True
    for want in (_NOMINAL, ("ADJ",), ("PRON",)):
        cand = next((i for i, u in enumerate(upos) if u in want), None)
        if cand is not None:
            return cand, False
    cand = next((i for i, u in enumerate(upos) if u != "PUNCT"), 0)
    return cand, False


def _attach_verb(tokens, upos, i, root):
    v = _nearest_left(upos, i, ("VERB",))
    if v is None:
        return root, "dep"
    # Adjacent verb chains (skipping to/aux/adverbs) are open-clause
    # complements: "need to stop stifling" -> stifling -> stop -> need.
    j = i - 1
    while j >= 0 and upos[j] in ("PART", "AUX", "ADV"):
        j -= 1
    if j >= 0 and upos[j] == "VERB":
        return j, "xcomp"
    between = upos[v + 1:i]
    if "CCONJ" in between:
        return v, "conj"
    lows = [tokens[k].lemma for k in range(v + 1, i)]
    if "to" in lows:
        return v, "xcomp"
    if "SCONJ" in between:
        return v, "advcl"
    if "PUNCT" in between:
        return v, "conj"
    return v, "xcomp"


def _attach_nominal(tokens, upos, i, root, copular):
    n = len(upos)
    lemma_next = tokens[i + 1].lemma if i + 1 < n else ""

    # Genitive: possessor attaches to the possessed nominal.
    if i + 1 < n and upos[i + 1] == "PART" and lemma_next == "'s":
        j = _first_right(upos, i + 1, _NOMINAL, _NP_ZONE)
        if j is not None:
            return _run_end(upos, j), "nmod:poss"
        return root, "dep"

    # Compound runs: every nominal but the last modifies the last.
    if upos[i] in _NOMINAL and i + 1 < n and upos[i + 1] in _NOMINAL:
        return _run_end(upos, i + 1), "compound"

    # Prepositional object: nmod of the nominal the phrase modifies
    # ("families of Ohio"), else obl of the governing verb. Compound
    # members between the preposition and its object are transparent.
    k = i - 1
    while k >= 0 and (upos[k] in _NP_ZONE or upos[k] in _NOMINAL):
        k -= 1
    if k >= 0 and upos[k] == "ADP":
        j = k - 1
        while j >= 0 and upos[j] in _NP_ZONE:
            j -= 1
        if j >= 0 and upos[j] in _NOMINAL:
            return j, "nmod"
        v = _nearest_left(upos, k, ("VERB",))
        if v is not None:
            return v, "obl"
        return root, "nmod" if upos[root] in _NOMINAL else "obl"

    # Subject: only auxiliaries, particles, and adverbs may intervene.
    j = i + 1
    while j < n and upos[j] in ("AUX", "PART", "ADV"):
        j += 1
    if j < n and upos[j] == "VERB":
        passive = any(
            upos[k] == "AUX" and tokens[k].lemma == "be"
            for k in range(i + 1, j)) and (
            tokens[j].surface.lower().endswith(("ed", "en"))
            or tokens[j].surface.lower() in IRREGULAR_VERBS)
        return j, "nsubj:pass" if passive else "nsubj"

    # Object of the nearest verb left, looking through noun-phrase
    # material; a coordinator instead yields nominal coordination.
    k = i - 1
    while k >= 0 and (upos[k] in _NP_ZONE or upos[k] in _NOMINAL
                      or upos[k] == "PRON"):
        k -= 1
    if k >= 0 and upos[k] == "VERB":
        return k, "obj"
    if k >= 0 and upos[k] == "CCONJ":
        m = _nearest_left(upos, k, _NOMINAL | {"PRON"})
        if m is not None:
            return m, "conj"

    if copular and i < root:
        return root, "nsubj"
    return root, "dep"


def attach(tokens: list[Token]) -> None:
    """Assign head/deprel to every token, guaranteeing a single root."""
    n = len(tokens)
    upos = [t.upos for t in tokens]
    root, copular = _select_root(upos)

    for i, tok in enumerate(tokens):
        if i == root:
            head, rel = -1, "root"
        elif upos[i] == "PUNCT":
            head, rel = root, "punct"
        elif upos[i] == "SYM" or upos[i] == "X":
            head, rel = root, "dep"
        elif upos[i] == "DET":
            j = _first_right(upos, i, _NOMINAL, _NP_ZONE)
            head, rel = (j, "det") if j is not None else (root, "dep")
        elif upos[i] == "NUM":
            j = _first_right(upos, i, _NOMINAL, _NP_ZONE)
            head, rel = (j, "nummod") if j is not None else (root, "dep")
        elif upos[i] == "ADJ":
            j = _first_right(upos, i, _NOMINAL,
                             frozenset({"ADJ", "ADV", "NUM"}))
            head, rel = (j, "amod") if j is not None else (root, "dep")
        elif upos[i] == "ADV":
            j = _anywhere_right(upos, i, ("VERB", "ADJ"))
            if j is None:
                j = _nearest_left(upos, i, ("VERB", "ADJ"))
            head, rel = (j, "advmod") if j is not None else (root, "dep")
        elif upos[i] == "AUX":
            j = _anywhere_right(upos, i, ("VERB",), _CLAUSE_BOUNDARY)
            if j is not None:
                head, rel = j, "aux"
            else:
                head, rel = root, "cop"
        elif upos[i] == "PART":
            if tokens[i].lemma == "to":
                j = _anywhere_right(upos, i, ("VERB",))
                head, rel = (j, "mark") if j is not None else (root, "dep")
            elif tokens[i].lemma == "not":
                j = _anywhere_right(upos, i, ("VERB", "ADJ"))
                if j is None:
                    j = _nearest_left(upos, i, ("VERB", "ADJ"))
                head, rel = (j, "advmod") if j is not None else (root, "dep")
            else:   # genitive 's
                head, rel = ((i - 1, "case") if i > 0 else (root, "dep"))
        elif upos[i] == "ADP":
            j = _first_right(upos, i, _NOMINAL | {"PRON"}, _NP_ZONE)
            if j is not None:
                head, rel = j, "case"
            else:
                v = _nearest_left(upos, i, ("VERB",))
                head, rel = (v, "compound:prt") if v is not None \
                    else (root, "dep")
        elif upos[i] == "SCONJ":
            j = _anywhere_right(upos, i, ("VERB",))
            head, rel = (j, "mark") if j is not None else (root, "dep")
        elif upos[i] == "CCONJ":
            j = _anywhere_right(upos, i,
                                _NOMINAL | {"VERB", "ADJ", "PRON"})
            head, rel = (j, "cc") if j is not None else (root, "dep")
        elif upos[i] == "VERB":
            head, rel = _attach_verb(tokens, upos, i, root)
        elif upos[i] in _NOMINAL or upos[i] == "PRON":
            head, rel = _attach_nominal(tokens, upos, i, root, copular)
        else:
            head, rel = root, "dep"

        if head == i and i != root:   # safety: never self-attach
            head, rel = root, "dep"
        tok.head = 0 if i == root else head + 1
        tok.deprel = rel


def parse_sentence(surfaces: list[str]) -> list[Token]:
    tokens = tag_sentence(surfaces)
    attach(tokens)
    return tokens


def parse_text(text: str) -> list[list[Token]]:
    """Segment, tag, and parse raw post text into token lists."""
    return [parse_sentence(s) for s in split_sentences(text)]


class RuleParser:
    """The built-in parser backend; identity is recorded in manifests."""

    identifier = "rulebook-en"
    version = "1.0.0"
    implementation = "parse_adapter.rules.RuleParser"

    def parse(self, text: str) -> list[list[Token]]:
        return parse_text(text)
