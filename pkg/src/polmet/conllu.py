"""CoNLL-U reader for dependency-parsed post text.

Only the columns the pair extractor needs are kept: surface form, lemma,
universal POS, head index, and dependency relation. Multiword-token ranges
(ids like "3-4") and empty nodes (ids like "3.1") are skipped; basic tokens
are preserved as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable


class ConlluFormatError(ValueError):
    """Malformed CoNLL-U input; the message names the offending line."""


@dataclass(frozen=True)
class Token:
    index: int      # 1-based position within the sentence
    surface: str
    lemma: str
    upos: str
    head: int       # 0 = root
    deprel: str


@dataclass
class ParsedSentence:
    tokens: list[Token]
    sent_id: str = ""
    post_id: str = ""
    comments: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)


def _validate(sentence: ParsedSentence, start_line: int) -> None:
    n = len(sentence.tokens)
    roots = 0
    for tok in sentence.tokens:
        if tok.head < 0 or tok.head > n:
            raise ConlluFormatError(
                f"sentence starting at line {start_line}: head {tok.head} of "
                f"token {tok.index} out of range")
        if tok.head == 0:
            roots += 1
    if n and roots != 1:
        raise ConlluFormatError(
            f"sentence starting at line {start_line}: expected exactly one "
            f"root, found {roots}")


def parse_conllu(source: str | Path | IO[str] | Iterable[str]
                 ) -> list[ParsedSentence]:
    """Parse a CoNLL-U stream into sentences.

    Sentence ids are taken from "# sent_id = ..." comments and post ids from
    "# post_id = ..." comments; the post id also carries over from the most
    recent comment when a sentence has none of its own.
    """
    close = isinstance(source, (str, Path))
    stream = open(source, "r", encoding="utf-8") if close else source

    sentences: list[ParsedSentence] = []
    tokens: list[Token] = []
    comments: list[str] = []
    sent_id = ""
    post_id = ""
    current_post = ""
    start_line = 1
    expected_index = 1

    def flush(line_no: int) -> None:
        nonlocal tokens, comments, sent_id, expected_index
        if not tokens and not comments:
            return
        if tokens:
            sentence = ParsedSentence(tokens=tokens, sent_id=sent_id,
                                      post_id=current_post, comments=comments)
            _validate(sentence, start_line)
            sentences.append(sentence)
        tokens = []
        comments = []
        sent_id = ""
        expected_index = 1

    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                flush(lineno)
                start_line = lineno + 1
                continue
            if line.startswith("#"):
                comments.append(line)
                body = line[1:].strip()
                if body.startswith("sent_id"):
                    sent_id = body.split("=", 1)[1].strip() if "=" in body else ""
                elif body.startswith("post_id"):
                    post_id = body.split("=", 1)[1].strip() if "=" in body else ""
                    current_post = post_id
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ConlluFormatError(
                    f"line {lineno}: expected 10 tab-separated columns, "
                    f"got {len(cols)}")
            token_id = cols[0]
            if "-" in token_id or "." in token_id:
                continue  # multiword range / empty node
            try:
                index = int(token_id)
                head = int(cols[6]) if cols[6] != "_" else 0
            except ValueError:
                raise ConlluFormatError(
                    f"line {lineno}: non-integer id or head "
                    f"({token_id!r}, {cols[6]!r})")
            if index != expected_index:
                raise ConlluFormatError(
                    f"line {lineno}: token id {index} out of sequence "
                    f"(expected {expected_index})")
            expected_index += 1
            tokens.append(Token(index=index, surface=cols[1], lemma=cols[2],
                                upos=cols[3], head=head, deprel=cols[7]))
        flush(-1)
    finally:
        if close:
            stream.close()
    return sentences


def sentences_by_post(sentences: list[ParsedSentence]
                      ) -> dict[str, list[ParsedSentence]]:
    """Group sentences by their post_id comment, preserving order."""
    grouped: dict[str, list[ParsedSentence]] = {}
    for s in sentences:
        grouped.setdefault(s.post_id, []).append(s)
    return grouped
