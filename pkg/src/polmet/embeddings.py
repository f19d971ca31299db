"""Fixed pre-trained word embeddings: loading, lookup, caching.

The classifier consumes embeddings as frozen inputs; nothing in this module
is trainable. Tokens are lowercased both when the store is built and at
lookup time so that lemma matching is deterministic.
"""

from __future__ import annotations

import io
import json
from pathlib import Path
from typing import IO, Iterable

import numpy as np

CACHE_MAGIC = "polmet-embedding-cache"
CACHE_VERSION = 1


class EmbeddingFormatError(ValueError):
    """Raised when an embedding file violates the expected layout."""


class EmbeddingStore:
    """Immutable token -> vector table.

    Attributes:
        vocab: lowercase token -> row index.
        matrix: (V, E) float64 array; row i is the vector of the token
            with index i.
        dim: embedding dimension E.
        duplicate_count: number of duplicate tokens dropped at load time
            (first occurrence wins).
    """

    def __init__(self, vocab: dict[str, int], matrix: np.ndarray,
                 duplicate_count: int = 0):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValueError("embedding matrix must be 2-d")
        if len(vocab) != matrix.shape[0]:
            raise ValueError(
                f"vocabulary size {len(vocab)} does not match "
                f"matrix rows {matrix.shape[0]}")
        if not np.isfinite(matrix).all():
            raise ValueError("embedding matrix contains non-finite entries")
        self.vocab = dict(vocab)
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self.dim = matrix.shape[1]
        self.duplicate_count = duplicate_count

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self.vocab

    @property
    def fixed_param_count(self) -> int:
        """Number of frozen parameters, V * E."""
        return self.matrix.shape[0] * self.matrix.shape[1]

    def lookup(self, lemma: str) -> np.ndarray | None:
        """Return the stored row for ``lemma`` or None when out of vocabulary.

        None is the explicit OOV marker; callers must never substitute a
        zero vector silently.
        """
        if not lemma:
            raise ValueError("lookup requires a non-empty lemma")
        idx = self.vocab.get(lemma.lower())
        if idx is None:
            return None
        return self.matrix[idx]

    def save_text(self, path: str | Path) -> None:
        """Write the store in the plain-text input format.

        Values are written with repr precision, so a reload is
        bit-identical.
        """
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{len(self.vocab)} {self.dim}\n")
            inverse = sorted(self.vocab.items(), key=lambda kv: kv[1])
            for token, idx in inverse:
                row = " ".join(repr(float(v)) for v in self.matrix[idx])
                fh.write(f"{token} {row}\n")

    def save_cache(self, path: str | Path) -> None:
        """Write a binary cache: one JSON header line, then raw float64 rows."""
        header = {
            "magic": CACHE_MAGIC,
            "version": CACHE_VERSION,
            "vocab_size": len(self.vocab),
            "dim": self.dim,
            "duplicate_count": self.duplicate_count,
            "tokens": [t for t, _ in sorted(self.vocab.items(),
                                            key=lambda kv: kv[1])],
        }
        with open(path, "wb") as fh:
            fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
            fh.write(b"\n")
            fh.write(np.ascontiguousarray(self.matrix).tobytes())


def load_cache(path: str | Path) -> EmbeddingStore:
    """Reload a binary cache written by :meth:`EmbeddingStore.save_cache`."""
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise EmbeddingFormatError(f"unreadable cache header: {exc}")
        if header.get("magic") != CACHE_MAGIC:
            raise EmbeddingFormatError("not an embedding cache file")
        if header.get("version") != CACHE_VERSION:
            raise EmbeddingFormatError(
                f"unsupported cache version {header.get('version')}")
        v, e = header["vocab_size"], header["dim"]
        blob = fh.read()
    matrix = np.frombuffer(blob, dtype=np.float64, count=v * e).reshape(v, e)
    vocab = {tok: i for i, tok in enumerate(header["tokens"])}
    return EmbeddingStore(vocab, matrix.copy(),
                          duplicate_count=header.get("duplicate_count", 0))


def _open_source(source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8"), True
    return source, False


def load_embeddings(source: str | Path | IO[str] | Iterable[str],
                    expected_dim: int | None = None) -> EmbeddingStore:
    """Read plain-text embeddings: one token per line followed by E decimals.

    An optional first header line of two integers ("V E") is accepted and
    validated against the body. Duplicate tokens keep the first occurrence
    and are tallied in ``duplicate_count``.

    Raises:
        EmbeddingFormatError: on inconsistent dimensions (names the line),
            a header that disagrees with the body, or an empty stream.
    """
    if expected_dim is not None and expected_dim <= 0:
        raise ValueError("expected_dim must be positive")

    stream: Iterable[str]
    close = False
    if isinstance(source, (str, Path)):
        stream, close = _open_source(source)
    elif isinstance(source, io.TextIOBase):
        stream = source
    else:
        stream = iter(source)

    vocab: dict[str, int] = {}
    rows: list[np.ndarray] = []
    duplicates = 0
    dim = expected_dim
    header: tuple[int, int] | None = None
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split()
            if lineno == 1 and len(parts) == 2:
                try:
                    header = (int(parts[0]), int(parts[1]))
                    continue
                except ValueError:
                    pass  # not a header; parse as a data line
            token = parts[0].lower()
            try:
                values = np.array([float(v) for v in parts[1:]],
                                  dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(
                    f"line {lineno}: non-numeric value ({exc})")
            if values.size == 0:
                raise EmbeddingFormatError(f"line {lineno}: token without values")
            if dim is None:
                dim = values.size
            elif values.size != dim:
                raise EmbeddingFormatError(
                    f"line {lineno}: expected {dim} values, got {values.size}")
            if token in vocab:
                duplicates += 1
                continue
            vocab[token] = len(rows)
            rows.append(values)
    finally:
        if close:
            stream.close()

    if not rows:
        raise EmbeddingFormatError("empty embedding stream")
    if header is not None:
        if header[1] != dim:
            raise EmbeddingFormatError(
                f"header dimension {header[1]} does not match body ({dim})")
        if header[0] != len(rows) + duplicates:
            raise EmbeddingFormatError(
                f"header vocabulary size {header[0]} does not match "
                f"body ({len(rows) + duplicates} tokens read)")
    return EmbeddingStore(vocab, np.vstack(rows), duplicate_count=duplicates)
