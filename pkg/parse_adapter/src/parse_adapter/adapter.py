"""Corpus-to-CoNLL-U conversion with warning log and run manifest.

The adapter reads a post corpus (CSV or JSONL with at least post_id and
text fields), parses every post with the selected parser backend, and
writes one CoNLL-U document per post, ordered by post_id. A post whose
text yields no parseable sentence is never dropped: it appears as a
zero-sentence document (a comment-only block carrying its post_id) and
is recorded in a JSON warning log next to the output. A manifest names
the parser backend and version so a run can be reproduced exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from parse_adapter.rules import RuleParser, Token

TOOL_NAME = "polmet-parse-adapter"

# Legacy relation labels normalized to UD v2 before anything is written,
# so the primary extractor only ever sees one scheme.
LEGACY_DEPREL_MAP = {
    "dobj": "obj",
    "nsubjpass": "nsubj:pass",
    "auxpass": "aux:pass",
    "poss": "nmod:poss",
}


class AdapterError(ValueError):
    """Unusable configuration or corpus; the message says which."""


@dataclass(frozen=True)
class AdapterConfig:
    """One conversion run.

    corpus:       input corpus path (CSV or JSONL)
    output:       output CoNLL-U path; the warning log and manifest are
                  written next to it as <stem>.warnings.json and
                  <stem>.manifest.json
    parser_model: parser backend identifier (see available_parsers())
    batch_size:   posts handed to the parser per batch; output does not
                  depend on it
    """
    corpus: Path
    output: Path
    parser_model: str = RuleParser.identifier
    batch_size: int = 64


def available_parsers() -> dict[str, type]:
    """Parser backends by identifier; rulebook-en is the built-in."""
    return {RuleParser.identifier: RuleParser}


# ---------------------------------------------------------------------------
# Corpus input


def _read_csv(path: Path) -> list[tuple[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for required in ("post_id", "text"):
            if required not in fields:
                raise AdapterError(
                    f"{path}: corpus is missing the {required!r} column")
        return [(row["post_id"] or "", row["text"] or "") for row in reader]


def _read_jsonl(path: Path) -> list[tuple[str, str]]:
    posts = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise AdapterError(
                    f"{path}: line {lineno}: invalid JSON ({exc})") from exc
            if "post_id" not in record or "text" not in record:
                raise AdapterError(
                    f"{path}: line {lineno}: record needs post_id and text")
            posts.append((str(record["post_id"]), str(record["text"] or "")))
    return posts


def read_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Load (post_id, text) pairs; duplicates and blank ids are errors."""
    path = Path(path)
    if not path.exists():
        raise AdapterError(f"missing input: {path}")
    posts = _read_jsonl(path) if path.suffix == ".jsonl" else _read_csv(path)
    seen: set[str] = set()
    for post_id, _ in posts:
        if not post_id:
            raise AdapterError(f"{path}: a record has an empty post_id")
        if post_id in seen:
            raise AdapterError(f"{path}: duplicate post_id {post_id!r}")
        seen.add(post_id)
    return posts


# ---------------------------------------------------------------------------
# CoNLL-U output


def _conllu_block(tokens: list[Token], sent_id: str, post_id: str) -> str:
    lines = [f"# sent_id = {sent_id}", f"# post_id = {post_id}"]
    for tok in tokens:
        deprel = LEGACY_DEPREL_MAP.get(tok.deprel, tok.deprel)
        lines.append("\t".join([
            str(tok.index), tok.surface, tok.lemma, tok.upos, "_", "_",
            str(tok.head), deprel, "_", "_"]))
    return "\n".join(lines) + "\n\n"


def _zero_sentence_block(post_id: str) -> str:
    return f"# post_id = {post_id}\n# sentences = 0\n\n"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def text_to_conllu(config: AdapterConfig) -> dict:
    """Convert the corpus to CoNLL-U; returns the run summary.

    Writes three files: the CoNLL-U parses, the JSON warning log (always
    written, possibly with an empty warning list), and the manifest
    recording parser identity and input/output checksums.
    """
    parsers = available_parsers()
    if config.parser_model not in parsers:
        known = ", ".join(sorted(parsers))
        raise AdapterError(
            f"unknown parser model {config.parser_model!r} "
            f"(available: {known})")
    if config.batch_size < 1:
        raise AdapterError("batch_size must be at least 1")
    parser = parsers[config.parser_model]()

    posts = sorted(read_corpus(config.corpus))
    output = Path(config.output)
    output.parent.mkdir(parents=True, exist_ok=True)

    blocks: list[str] = []
    warnings: list[dict] = []
    n_sentences = 0
    n_tokens = 0
    for start in range(0, len(posts), config.batch_size):
        for post_id, text in posts[start:start + config.batch_size]:
            if not text.strip():
                warnings.append({"post_id": post_id, "reason": "empty text"})
                blocks.append(_zero_sentence_block(post_id))
                continue
            try:
                sentences = parser.parse(text)
            except Exception as exc:   # never drop a post
                warnings.append({"post_id": post_id,
                                 "reason": f"parser error: {exc}"})
                blocks.append(_zero_sentence_block(post_id))
                continue
            if not sentences:
                warnings.append({"post_id": post_id,
                                 "reason": "no parseable sentences"})
                blocks.append(_zero_sentence_block(post_id))
                continue
            for k, tokens in enumerate(sentences, start=1):
                blocks.append(
                    _conllu_block(tokens, f"{post_id}.s{k}", post_id))
                n_sentences += 1
                n_tokens += len(tokens)

    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write("".join(blocks))

    warnings_path = output.parent / (output.stem + ".warnings.json")
    _write_json(warnings_path, {
        "format": "parse-adapter-warnings", "version": 1,
        "warnings": warnings})

    manifest_path = output.parent / (output.stem + ".manifest.json")
    summary = {
        "posts": len(posts),
        "sentences": n_sentences,
        "tokens": n_tokens,
        "warnings": len(warnings),
    }
    _write_json(manifest_path, {
        "tool": {"name": TOOL_NAME, "version": _package_version()},
        "parser": {
            "identifier": parser.identifier,
            "version": parser.version,
            "implementation": parser.implementation,
        },
        "config": {
            "corpus": str(config.corpus),
            "output": str(config.output),
            "batch_size": config.batch_size,
        },
        "inputs": {"corpus": {"path": str(config.corpus),
                              "sha256": _sha256(Path(config.corpus))}},
        "outputs": {
            "conllu": {"path": str(output), "sha256": _sha256(output)},
            "warnings": {"path": str(warnings_path),
                         "sha256": _sha256(warnings_path)},
        },
        "counts": summary,
    })

    return dict(summary, output=str(output), warnings_log=str(warnings_path),
                manifest=str(manifest_path))


def _package_version() -> str:
    from parse_adapter import __version__
    return __version__
