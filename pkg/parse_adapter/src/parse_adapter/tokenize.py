"""Tokenizer and sentence splitter for short social-media posts.

Splitting is whitespace- and punctuation-driven: URLs, @-mentions,
#-hashtags, numbers, and dotted acronyms survive as single tokens;
clitics ("it's", "don't", "we'll") are split Penn-style into host plus
clitic so the tagger can treat the clitic as an auxiliary or particle.
Sentences end at runs of . ! ? and at line breaks; ellipses do not
terminate a sentence.
"""

from __future__ import annotations

import re

TOKEN_RE = re.compile(r"""
      https?://\S+ | www\.\S+           # URLs
    | [@\#][A-Za-z0-9_]+                # mentions and hashtags
    | (?:[A-Za-z]\.){2,}                # dotted acronyms (U.S.)
    | \d+(?:[.,]\d+)*%?                 # numbers, 1,200 or 3.5 or 45%
    | [A-Za-z]+(?:[-'’][A-Za-z]+)*      # words, incl. hyphens/apostrophes
    | \.\.\.                            # ASCII ellipsis
    | [.,!?;:()\[\]"“”‘’…—–-]           # punctuation, one char at a time
    | \S                                # anything else, one char
""", re.VERBOSE)

# Clitic suffixes split off their host word, longest first.
_CLITICS = ("n't", "n’t", "'re", "’re", "'ve", "’ve", "'ll", "’ll",
            "'s", "’s", "'d", "’d", "'m", "’m")

_TERMINALS = frozenset(".!?")


def _split_clitics(token: str) -> list[str]:
    lower = token.lower()
    for clitic in _CLITICS:
        if lower.endswith(clitic) and len(token) > len(clitic):
            host = token[:-len(clitic)]
            if host and host[-1].isalpha():
                return _split_clitics(host) + [token[-len(clitic):]]
    return [token]


def tokenize(text: str) -> list[str]:
    """Split one line of text into surface tokens."""
    out: list[str] = []
    for match in TOKEN_RE.findall(text):
        if match[:1].isalpha() and ("'" in match or "’" in match):
            out.extend(_split_clitics(match))
        else:
            out.append(match)
    return out


def _is_terminal(token: str) -> bool:
    return token != "..." and all(c in _TERMINALS for c in token)


def split_sentences(text: str) -> list[list[str]]:
    """Tokenize text into sentences (lists of surface tokens).

    A sentence break occurs after a run of terminal punctuation tokens
    and at every line break. Token runs with no alphabetic content
    (bare punctuation or emoji fragments) are not sentences and are
    dropped.
    """
    sentences: list[list[str]] = []
    for line in re.split(r"[\r\n]+", text):
        tokens = tokenize(line)
        current: list[str] = []
        i = 0
        while i < len(tokens):
            current.append(tokens[i])
            if _is_terminal(tokens[i]):
                while i + 1 < len(tokens) and _is_terminal(tokens[i + 1]):
                    i += 1
                    current.append(tokens[i])
                sentences.append(current)
                current = []
            i += 1
        if current:
            sentences.append(current)
    return [s for s in sentences
            if any(any(c.isalpha() for c in tok) for tok in s)]
