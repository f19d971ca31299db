"""Datasets: labeled metaphor pairs and the post corpus.

Pair files are tab-separated (left, right, construction, label). The post
corpus is two files, posts plus politicians, in CSV or JSON-lines with the
column names documented in the README. Loaders are strict: malformed rows,
orphan posts, and duplicate ids raise instead of being dropped silently.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable

import numpy as np

CONSTRUCTIONS = ("adj-noun", "verb-subj", "verb-obj")
VERB_CONSTRUCTIONS = ("verb-subj", "verb-obj")

POST_COLUMNS = ("post_id", "politician_id", "timestamp", "comments", "shares",
                "likes", "love", "haha", "wow", "angry", "sad", "text")
REACTION_COLUMNS = ("comments", "shares", "likes", "love", "haha", "wow",
                    "angry", "sad")
POLITICIAN_COLUMNS = ("politician_id", "gender", "party")


class DatasetFormatError(ValueError):
    """Raised for malformed dataset rows; the message carries line numbers."""


@dataclass(frozen=True)
class LabeledPair:
    """One training/evaluation example: (governor lemma, noun lemma)."""

    left: str
    right: str
    construction: str
    label: int

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass
class Post:
    post_id: str
    politician_id: str
    text: str
    timestamp: datetime
    comments: int | None
    shares: int | None
    likes: int | None
    love: int | None
    haha: int | None
    wow: int | None
    angry: int | None
    sad: int | None


@dataclass
class Politician:
    politician_id: str
    gender: str
    party: str
    effective_party: str


def load_pair_dataset(source: str | Path | IO[str],
                      construction_filter: str | None = None
                      ) -> list[LabeledPair]:
    """Read a tab-separated pair file.

    Rows have four fields: left lemma, right lemma, construction tag,
    binary label. Bad rows are collected and reported together with their
    line numbers.
    """
    if construction_filter is not None and construction_filter not in CONSTRUCTIONS:
        # "verb" selects both verb constructions, matching the two-model setup
        if construction_filter != "verb":
            raise ValueError(f"unknown construction filter {construction_filter!r}")

    close = isinstance(source, (str, Path))
    stream = open(source, "r", encoding="utf-8") if close else source
    pairs: list[LabeledPair] = []
    bad: list[str] = []
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                bad.append(f"line {lineno}: expected 4 fields, got {len(fields)}")
                continue
            left, right, construction, label_s = (f.strip() for f in fields)
            if construction not in CONSTRUCTIONS:
                bad.append(f"line {lineno}: unknown construction {construction!r}")
                continue
            if label_s not in ("0", "1"):
                bad.append(f"line {lineno}: non-binary label {label_s!r}")
                continue
            if not left or not right:
                bad.append(f"line {lineno}: empty lemma")
                continue
            pairs.append(LabeledPair(left, right, construction, int(label_s)))
    finally:
        if close:
            stream.close()
    if bad:
        raise DatasetFormatError("rejected rows: " + "; ".join(bad))
    if construction_filter == "verb":
        pairs = [p for p in pairs if p.construction in VERB_CONSTRUCTIONS]
    elif construction_filter is not None:
        pairs = [p for p in pairs if p.construction == construction_filter]
    return pairs


def construction_counts(pairs: Iterable[LabeledPair]) -> dict[str, int]:
    counts = {c: 0 for c in CONSTRUCTIONS}
    for p in pairs:
        counts[p.construction] += 1
    return counts


def split_dataset(pairs: list[LabeledPair],
                  counts: tuple[int, int, int],
                  seed: int) -> tuple[list[LabeledPair], list[LabeledPair],
                                      list[LabeledPair]]:
    """Seeded shuffle followed by contiguous train/dev/test slices."""
    n_train, n_dev, n_test = counts
    if min(counts) < 0:
        raise ValueError("split counts must be non-negative")
    if n_train + n_dev + n_test > len(pairs):
        raise ValueError(
            f"split counts {counts} exceed dataset size {len(pairs)}")
    order = np.random.default_rng(seed).permutation(len(pairs))
    shuffled = [pairs[i] for i in order]
    return (shuffled[:n_train],
            shuffled[n_train:n_train + n_dev],
            shuffled[n_train + n_dev:n_train + n_dev + n_test])


def split_manifest(splits: dict[str, list[LabeledPair]], seed: int) -> dict:
    """Seed plus a content hash per split, for reproducibility records."""
    out = {"seed": seed, "splits": {}}
    for name, pairs in splits.items():
        digest = hashlib.sha256()
        for p in pairs:
            digest.update(f"{p.left}\t{p.right}\t{p.construction}\t{p.label}\n"
                          .encode("utf-8"))
        out["splits"][name] = {"size": len(pairs),
                               "sha256": digest.hexdigest()}
    return out


def _parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.strip())
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def _parse_count(value, column: str, where: str) -> int | None:
    """Missing counts become None, an explicit marker distinct from zero."""
    if value is None or str(value).strip() == "":
        return None
    try:
        count = int(value)
    except (TypeError, ValueError):
        raise DatasetFormatError(f"{where}: non-integer {column}={value!r}")
    if count < 0:
        raise DatasetFormatError(f"{where}: negative {column}={count}")
    return count


def _iter_records(source: str | Path | IO[str], columns: tuple[str, ...]):
    """Yield (where, dict) records from a CSV (with header) or JSON-lines file."""
    close = isinstance(source, (str, Path))
    if close:
        is_jsonl = str(source).endswith((".jsonl", ".ndjson"))
        stream = open(source, "r", encoding="utf-8", newline="")
    else:
        stream = source
        head = stream.read(1)
        is_jsonl = head == "{"
        stream = io.StringIO(head + stream.read())
    try:
        if is_jsonl:
            for lineno, raw in enumerate(stream, start=1):
                if not raw.strip():
                    continue
                yield f"line {lineno}", json.loads(raw)
        else:
            reader = csv.DictReader(stream)
            if reader.fieldnames is None:
                return
            missing = [c for c in columns if c not in reader.fieldnames]
            if missing:
                raise DatasetFormatError(f"missing columns: {missing}")
            for lineno, row in enumerate(reader, start=2):
                yield f"line {lineno}", row
    finally:
        if close:
            stream.close()


def load_politicians(source: str | Path | IO[str],
                     independent_party: str = "Democrat",
                     independent_overrides: dict[str, str] | None = None
                     ) -> dict[str, Politician]:
    """Load the politician table and resolve effective parties.

    Independents map to ``independent_party`` by default (the corpus's one
    Independent caucuses with the Democrats); ``independent_overrides`` maps
    specific politician_ids to a different effective party.
    """
    overrides = independent_overrides or {}
    politicians: dict[str, Politician] = {}
    for where, row in _iter_records(source, POLITICIAN_COLUMNS):
        pid = str(row["politician_id"]).strip()
        gender = str(row["gender"]).strip().lower()
        party = str(row["party"]).strip()
        if not pid:
            raise DatasetFormatError(f"{where}: empty politician_id")
        if pid in politicians:
            raise DatasetFormatError(f"{where}: duplicate politician_id {pid!r}")
        if gender not in ("male", "female"):
            raise DatasetFormatError(f"{where}: unknown gender {gender!r}")
        if party not in ("Democrat", "Republican", "Independent"):
            raise DatasetFormatError(f"{where}: unknown party {party!r}")
        if party == "Independent":
            effective = overrides.get(pid, independent_party)
        else:
            effective = party
        if effective not in ("Democrat", "Republican"):
            raise DatasetFormatError(
                f"{where}: effective party {effective!r} must be "
                "Democrat or Republican")
        politicians[pid] = Politician(pid, gender, party, effective)
    if not politicians:
        raise DatasetFormatError("no politicians loaded")
    return politicians


def load_posts(source: str | Path | IO[str],
               politicians: dict[str, Politician] | None = None) -> list[Post]:
    """Load posts; with a politician table given, enforce referential
    integrity (pass None to skip the orphan check, e.g. when scoring)."""
    posts: list[Post] = []
    seen: set[str] = set()
    orphans: list[str] = []
    for where, row in _iter_records(source, POST_COLUMNS):
        pid = str(row["post_id"]).strip()
        author = str(row["politician_id"]).strip()
        if pid in seen:
            raise DatasetFormatError(f"{where}: duplicate post_id {pid!r}")
        seen.add(pid)
        if politicians is not None and author not in politicians:
            orphans.append(pid)
            continue
        try:
            ts = _parse_timestamp(str(row["timestamp"]))
        except ValueError as exc:
            raise DatasetFormatError(f"{where}: bad timestamp ({exc})")
        counts = {c: _parse_count(row.get(c), c, where) for c in REACTION_COLUMNS}
        posts.append(Post(post_id=pid, politician_id=author,
                          text=str(row.get("text") or ""), timestamp=ts,
                          **counts))
    if orphans:
        raise DatasetFormatError(
            f"posts referencing unknown politicians: {orphans}")
    return posts


def load_post_corpus(posts_source, politicians_source,
                     independent_party: str = "Democrat",
                     independent_overrides: dict[str, str] | None = None
                     ) -> tuple[list[Post], dict[str, Politician]]:
    politicians = load_politicians(politicians_source, independent_party,
                                   independent_overrides)
    posts = load_posts(posts_source, politicians)
    return posts, politicians


def politician_tallies(politicians: dict[str, Politician]) -> dict:
    """Gender and party counts, for checking against expected totals."""
    tallies = {"total": len(politicians), "gender": {}, "party": {},
               "effective_party": {}}
    for p in politicians.values():
        tallies["gender"][p.gender] = tallies["gender"].get(p.gender, 0) + 1
        tallies["party"][p.party] = tallies["party"].get(p.party, 0) + 1
        tallies["effective_party"][p.effective_party] = \
            tallies["effective_party"].get(p.effective_party, 0) + 1
    return tallies


def write_posts_csv(path: str | Path, posts: list[Post]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(POST_COLUMNS)
        for p in posts:
            writer.writerow([
                p.post_id, p.politician_id, p.timestamp.isoformat(),
                *("" if getattr(p, c) is None else getattr(p, c)
                  for c in REACTION_COLUMNS),
                p.text,
            ])


def write_politicians_csv(path: str | Path,
                          politicians: dict[str, Politician]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(POLITICIAN_COLUMNS)
        for pid in sorted(politicians):
            p = politicians[pid]
            writer.writerow([p.politician_id, p.gender, p.party])
