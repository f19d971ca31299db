"""Apply the two trained classifiers to a parsed corpus.

Adjective-noun pairs go to the adjective model; verb-subject and
verb-object pairs go to the verb model. A pair whose governor or noun is
out of vocabulary is skipped and tallied, never scored. The metaphoricity
of a post is the count of pairs at or above the score threshold.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from polmet.conllu import ParsedSentence
from polmet.data import Post, VERB_CONSTRUCTIONS
from polmet.embeddings import EmbeddingStore
from polmet.net import ModelParams, batch_scores
from polmet.pairs import CandidatePair, extract_pairs

SCORED_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScoredPair:
    pair: CandidatePair
    score: float
    is_metaphor: bool


@dataclass
class ScoredPost:
    post_id: str
    pairs: list[ScoredPair] = field(default_factory=list)
    metaphoricity: int = 0
    word_count: int = 0
    metaphoricity_norm: float = 0.0
    oov_skipped: int = 0
    parse_failed: bool = False


def word_count(text: str) -> int:
    """Whitespace-delimited token count of the trimmed raw text."""
    return len(text.split())


def _model_for(construction: str, adj_model: ModelParams,
               verb_model: ModelParams) -> ModelParams:
    return verb_model if construction in VERB_CONSTRUCTIONS else adj_model


def score_post(post: Post, sentences: list[ParsedSentence],
               adj_model: ModelParams, verb_model: ModelParams,
               store: EmbeddingStore, threshold: float = 0.7,
               include_pronouns: bool = False) -> ScoredPost:
    """Score every candidate pair of one post and count metaphors."""
    for model in (adj_model, verb_model):
        if model.gate_w.shape[1] != store.dim:
            raise ValueError(
                f"model dimension {model.gate_w.shape[1]} does not match "
                f"embedding store dimension {store.dim}")

    candidates: list[CandidatePair] = []
    for sentence in sentences:
        candidates.extend(extract_pairs(sentence, include_pronouns))

    scored: list[ScoredPair] = []
    oov = 0
    # Batch the lookups per model so big posts stay cheap.
    by_model: dict[int, list[tuple[CandidatePair, np.ndarray, np.ndarray]]] = {0: [], 1: []}
    for cand in candidates:
        v1 = store.lookup(cand.governor)
        v2 = store.lookup(cand.noun)
        if v1 is None or v2 is None:
            oov += 1
            continue
        which = 1 if cand.construction in VERB_CONSTRUCTIONS else 0
        by_model[which].append((cand, v1, v2))

    for which, items in by_model.items():
        if not items:
            continue
        model = verb_model if which else adj_model
        x1 = np.vstack([v1 for _, v1, _ in items])
        x2 = np.vstack([v2 for _, _, v2 in items])
        scores = batch_scores(model, x1, x2)
        for (cand, _, _), s in zip(items, scores):
            scored.append(ScoredPair(pair=cand, score=float(s),
                                     is_metaphor=bool(s >= threshold)))

    scored.sort(key=lambda sp: (sp.pair.sent_id, sp.pair.governor_index,
                                sp.pair.noun_index, sp.pair.construction))
    n_words = word_count(post.text)
    metaphoricity = sum(1 for sp in scored if sp.is_metaphor)
    return ScoredPost(
        post_id=post.post_id,
        pairs=scored,
        metaphoricity=metaphoricity,
        word_count=n_words,
        metaphoricity_norm=metaphoricity / n_words if n_words else 0.0,
        oov_skipped=oov,
        parse_failed=not sentences,
    )


def score_corpus(posts: list[Post],
                 sentences_by_post: dict[str, list[ParsedSentence]],
                 adj_model: ModelParams, verb_model: ModelParams,
                 store: EmbeddingStore, threshold: float = 0.7,
                 jobs: int = 1) -> list[ScoredPost]:
    """Score every post; posts with no parsed sentences are kept and flagged.

    Output is ordered by post_id so parallel runs merge deterministically.
    """
    ordered = sorted(posts, key=lambda p: p.post_id)

    def one(post: Post) -> ScoredPost:
        return score_post(post, sentences_by_post.get(post.post_id, []),
                          adj_model, verb_model, store, threshold)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, ordered))
    return [one(p) for p in ordered]


def corpus_summary(scored: list[ScoredPost]) -> dict:
    """Distribution report over per-post metaphoricity.

    Includes the share of posts with non-zero metaphoricity and, among
    those, the share with a value in [1, 3].
    """
    if not scored:
        raise ValueError("empty scored corpus")
    values = [sp.metaphoricity for sp in scored]
    nonzero = [v for v in values if v > 0]
    histogram: dict[int, int] = {}
    for v in values:
        histogram[v] = histogram.get(v, 0) + 1
    return {
        "n_posts": len(values),
        "nonzero_share": len(nonzero) / len(values),
        "histogram": {str(k): histogram[k] for k in sorted(histogram)},
        "share_1_to_3_among_nonzero":
            (sum(1 for v in nonzero if 1 <= v <= 3) / len(nonzero)
             if nonzero else 0.0),
        "total_metaphorical_pairs": int(sum(values)),
        "oov_skipped": int(sum(sp.oov_skipped for sp in scored)),
        "parse_failures": int(sum(sp.parse_failed for sp in scored)),
    }


def _pair_record(sp: ScoredPair) -> dict:
    return {
        "governor": sp.pair.governor,
        "noun": sp.pair.noun,
        "construction": sp.pair.construction,
        "governor_index": sp.pair.governor_index,
        "noun_index": sp.pair.noun_index,
        "sent_id": sp.pair.sent_id,
        "copular": sp.pair.copular,
        "score": sp.score,
        "is_metaphor": sp.is_metaphor,
    }


def write_scored_corpus(path: str | Path, scored: list[ScoredPost]) -> None:
    """JSON-lines output, one record per post, ordered by post_id."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"schema": "polmet-scored",
                             "version": SCORED_SCHEMA_VERSION},
                            sort_keys=True) + "\n")
        for sp in sorted(scored, key=lambda s: s.post_id):
            record = {
                "post_id": sp.post_id,
                "metaphoricity": sp.metaphoricity,
                "word_count": sp.word_count,
                "metaphoricity_norm": sp.metaphoricity_norm,
                "oov_skipped": sp.oov_skipped,
                "parse_failed": sp.parse_failed,
                "pairs": [_pair_record(p) for p in sp.pairs],
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_scored_corpus(path: str | Path) -> list[ScoredPost]:
    scored: list[ScoredPost] = []
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("schema") != "polmet-scored":
            raise ValueError(f"{path}: not a scored-corpus file")
        if header.get("version") != SCORED_SCHEMA_VERSION:
            raise ValueError(f"{path}: unsupported version {header.get('version')}")
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            pairs = [ScoredPair(
                pair=CandidatePair(
                    governor=p["governor"], noun=p["noun"],
                    construction=p["construction"],
                    governor_index=p["governor_index"],
                    noun_index=p["noun_index"],
                    post_id=rec["post_id"], sent_id=p.get("sent_id", ""),
                    copular=p.get("copular", False)),
                score=p["score"], is_metaphor=p["is_metaphor"])
                for p in rec["pairs"]]
            scored.append(ScoredPost(
                post_id=rec["post_id"], pairs=pairs,
                metaphoricity=rec["metaphoricity"],
                word_count=rec["word_count"],
                metaphoricity_norm=rec["metaphoricity_norm"],
                oov_skipped=rec.get("oov_skipped", 0),
                parse_failed=rec.get("parse_failed", False)))
    return scored
