"""Synthetic data generators for validation and calibration runs.

Three generators cover the pipeline's moving parts:

* linearly separable word-pair data, for checking that classifier
  training actually learns (a nearest-centroid rule gives an
  independent accuracy target);
* an engagement sample with a known metaphoricity effect, for checking
  mixed-model coefficient recovery;
* a full study corpus with one planted party-by-quarter usage shift and
  one planted word-level engagement effect, for end-to-end study runs.

Counts are generated as ``max(round(exp(latent) - 1), 0)`` so that the
log-transformed engagement metric reproduces the latent value up to
integer quantization.
"""

from __future__ import annotations

from datetime import date, datetime, time, timedelta, timezone

import numpy as np

from polmet.data import LabeledPair, Politician, Post
from polmet.embeddings import EmbeddingStore
from polmet.engagement import METRIC_NAMES
from polmet.pairs import CandidatePair
from polmet.scoring import ScoredPair, ScoredPost


def make_separable_pair_data(n_train: int = 400, n_dev: int = 100,
                             dim: int = 10, construction: str = "verb-obj",
                             noise: float = 0.1, seed: int = 0
                             ) -> tuple[EmbeddingStore, list[LabeledPair],
                                        list[LabeledPair]]:
    """Two-cluster word-pair data that a linear rule separates.

    Metaphorical pairs sit near (+u, +v) in the two embedding slots and
    literal pairs near (-u, -v), with isotropic noise. Every pair uses
    fresh tokens, so memorizing the vocabulary cannot help.
    """
    if n_train < 4 or n_dev < 2:
        raise ValueError("need at least 4 training and 2 dev pairs")
    rng = np.random.default_rng(seed)
    u = rng.normal(size=dim)
    u /= np.linalg.norm(u)
    v = rng.normal(size=dim)
    v /= np.linalg.norm(v)

    total = n_train + n_dev
    labels = np.zeros(total, dtype=int)
    labels[::2] = 1  # alternating, so both splits stay balanced
    signs = np.where(labels == 1, 1.0, -1.0)[:, None]
    left_vecs = signs * u + noise * rng.normal(size=(total, dim))
    right_vecs = signs * v + noise * rng.normal(size=(total, dim))

    vocab: dict[str, int] = {}
    matrix_rows = []
    pairs = []
    for i in range(total):
        left_tok, right_tok = f"gov{i:05d}", f"noun{i:05d}"
        vocab[left_tok] = len(matrix_rows)
        matrix_rows.append(left_vecs[i])
        vocab[right_tok] = len(matrix_rows)
        matrix_rows.append(right_vecs[i])
        pairs.append(LabeledPair(left=left_tok, right=right_tok,
                                 construction=construction,
                                 label=int(labels[i])))

    store = EmbeddingStore(vocab, np.array(matrix_rows))
    return store, pairs[:n_train], pairs[n_train:]


def nearest_centroid_accuracy(train_pairs: list[LabeledPair],
                              eval_pairs: list[LabeledPair],
                              store: EmbeddingStore) -> float:
    """Accuracy of a nearest-centroid rule in concatenated pair space.

    This is an independent baseline for the trained classifier: on
    separable data the network should at least match it.
    """
    def concat(pair):
        left, right = store.lookup(pair.left), store.lookup(pair.right)
        if left is None or right is None:
            raise ValueError(f"pair ({pair.left!r}, {pair.right!r}) "
                             "has out-of-vocabulary tokens")
        return np.concatenate([left, right])

    train = np.array([concat(p) for p in train_pairs])
    labels = np.array([p.label for p in train_pairs])
    if not (labels == 1).any() or not (labels == 0).any():
        raise ValueError("training pairs must include both classes")
    centroid1 = train[labels == 1].mean(axis=0)
    centroid0 = train[labels == 0].mean(axis=0)

    correct = 0
    for pair in eval_pairs:
        vec = concat(pair)
        pred = 1 if (np.linalg.norm(vec - centroid1)
                     <= np.linalg.norm(vec - centroid0)) else 0
        correct += int(pred == pair.label)
    return correct / len(eval_pairs)


def _counts_from_latent(latent: float) -> int:
    return max(int(round(np.expm1(latent))), 0)


def _split3(total: int) -> tuple[int, int, int]:
    third = total // 3
    return total - 2 * third, third, third


def _split2(total: int) -> tuple[int, int]:
    half = total // 2
    return total - half, half


def simulate_engagement_sample(n_politicians: int = 20, posts_per: int = 100,
                               metaphoricity_coef: float = 0.19,
                               base: float = 4.5, length_coef: float = 0.0,
                               politician_sd: float = 0.3,
                               resid_sd: float = 0.5, seed: int = 0
                               ) -> tuple[list[ScoredPost], list[Post],
                                          dict[str, Politician], dict]:
    """Balanced engagement sample with a known metaphoricity effect.

    Every metric shares the same data-generating coefficient but has its
    own politician intercepts and noise. All posts fall after the
    reaction-breakdown date, so every metric is eligible everywhere.
    """
    if n_politicians < 2:
        raise ValueError("need at least two politicians")
    rng = np.random.default_rng(seed)
    politicians = {}
    for i in range(n_politicians):
        pid = f"pol{i:03d}"
        party = "Democrat" if i < n_politicians // 2 else "Republican"
        politicians[pid] = Politician(
            politician_id=pid, gender="female" if i % 2 else "male",
            party=party, effective_party=party)

    pol_effects = {(pid, metric): rng.normal(0.0, politician_sd)
                   for pid in sorted(politicians)
                   for metric in METRIC_NAMES}

    start = datetime(2016, 6, 1, 12, 0, tzinfo=timezone.utc)
    scored, posts = [], []
    counter = 0
    for pid in sorted(politicians):
        for _ in range(posts_per):
            post_id = f"p{counter:05d}"
            counter += 1
            met = int(rng.integers(0, 4))
            length = int(rng.integers(5, 41))
            latents = {
                metric: (base + pol_effects[(pid, metric)]
                         + metaphoricity_coef * met
                         + length_coef * length
                         + rng.normal(0.0, resid_sd))
                for metric in METRIC_NAMES}
            love, haha, wow = _split3(
                _counts_from_latent(latents["pos_provocation"]))
            angry, sad = _split2(
                _counts_from_latent(latents["neg_provocation"]))
            posts.append(Post(
                post_id=post_id, politician_id=pid,
                text=" ".join(["w"] * length),
                timestamp=start + timedelta(
                    days=int(rng.integers(0, 120))),
                comments=_counts_from_latent(latents["participation"]),
                shares=_counts_from_latent(latents["propagation"]),
                likes=_counts_from_latent(latents["acceptance"]),
                love=love, haha=haha, wow=wow, angry=angry, sad=sad))
            scored.append(ScoredPost(
                post_id=post_id, pairs=[], metaphoricity=met,
                word_count=length, metaphoricity_norm=met / length))

    truth = {"base": base, "metaphoricity_coef": metaphoricity_coef,
             "length_coef": length_coef, "politician_sd": politician_sd,
             "resid_sd": resid_sd}
    return scored, posts, politicians, truth


STUDY_QUARTER_STARTS = (date(2016, 2, 7), date(2016, 5, 7),
                        date(2016, 8, 7), date(2016, 11, 7))
STUDY_BASE_VERBS = tuple(f"verb{i}" for i in range(8))
STUDY_PLANTED_VERBS = tuple(f"nov{i}" for i in range(4))


def make_study_corpus(seed: int = 0, posts_per_cell: int = 250,
                      participation_coef: float = 0.2,
                      politician_sd: float = 0.3, lemma_sd: float = 0.15,
                      resid_sd: float = 0.5
                      ) -> tuple[list[ScoredPost], list[Post],
                                 dict[str, Politician], dict]:
    """Full synthetic study corpus with two planted effects.

    Twenty politicians (ten per party, half female) each post evenly
    across the four study quarters. Every post carries one verb-object
    pair whose verb comes from an eight-lemma inventory and whose noun is
    unique to the post; the pair is metaphorical with probability one
    half. Democrat posts in the post-election quarter additionally carry
    a second, always-metaphorical pair with a verb outside the inventory,
    shifting that cell's mean metaphoricity up by one.

    Engagement latents add ``participation_coef`` to the participation
    metric when the inventory pair is metaphorical; the planted extra
    pair never moves engagement, so word-level truth stays clean. The
    first quarter starts before the reaction breakdown exists, so some
    posts are ineligible for the provocation metrics by construction.
    """
    rng = np.random.default_rng(seed)
    politicians = {}
    for i in range(20):
        pid = f"pol{i:03d}"
        party = "Democrat" if i < 10 else "Republican"
        politicians[pid] = Politician(
            politician_id=pid, gender="female" if i % 2 else "male",
            party=party, effective_party=party)
    party_members = {
        "Democrat": [p for p in sorted(politicians) if p < "pol010"],
        "Republican": [p for p in sorted(politicians) if p >= "pol010"],
    }

    pol_effects = {(pid, metric): rng.normal(0.0, politician_sd)
                   for pid in sorted(politicians)
                   for metric in METRIC_NAMES}
    lemma_effects = {(verb, metric): rng.normal(0.0, lemma_sd)
                     for verb in STUDY_BASE_VERBS
                     for metric in METRIC_NAMES}

    scored, posts = [], []
    counter = 0
    noun_counter = 0
    for q_index, q_start in enumerate(STUDY_QUARTER_STARTS):
        for party in ("Democrat", "Republican"):
            planted_cell = party == "Democrat" and q_index == 3
            for j in range(posts_per_cell):
                pid = party_members[party][j % 10]
                post_id = f"p{counter:05d}"
                counter += 1
                verb = STUDY_BASE_VERBS[int(rng.integers(0, 8))]
                base_met = bool(rng.integers(0, 2))
                length = int(rng.integers(8, 41))

                noun = f"obj{noun_counter:05d}"
                noun_counter += 1
                pairs = [ScoredPair(
                    pair=CandidatePair(governor=verb, noun=noun,
                                       construction="verb-obj",
                                       governor_index=2, noun_index=3,
                                       post_id=post_id, sent_id=f"{post_id}-s1"),
                    score=0.9 if base_met else 0.1,
                    is_metaphor=base_met)]
                if planted_cell:
                    extra_noun = f"obj{noun_counter:05d}"
                    noun_counter += 1
                    pairs.append(ScoredPair(
                        pair=CandidatePair(
                            governor=STUDY_PLANTED_VERBS[j % 4],
                            noun=extra_noun, construction="verb-obj",
                            governor_index=5, noun_index=6,
                            post_id=post_id, sent_id=f"{post_id}-s1"),
                        score=0.95, is_metaphor=True))
                met = sum(1 for sp in pairs if sp.is_metaphor)

                latents = {}
                for metric in METRIC_NAMES:
                    latent = (4.5 + pol_effects[(pid, metric)]
                              + lemma_effects[(verb, metric)]
                              + rng.normal(0.0, resid_sd))
                    if metric == "participation" and base_met:
                        latent += participation_coef
                    latents[metric] = latent
                love, haha, wow = _split3(
                    _counts_from_latent(latents["pos_provocation"]))
                angry, sad = _split2(
                    _counts_from_latent(latents["neg_provocation"]))

                when = datetime.combine(
                    q_start + timedelta(days=int(rng.integers(0, 88))),
                    time(12, 0), tzinfo=timezone.utc)
                posts.append(Post(
                    post_id=post_id, politician_id=pid,
                    text=" ".join(["w"] * length), timestamp=when,
                    comments=_counts_from_latent(latents["participation"]),
                    shares=_counts_from_latent(latents["propagation"]),
                    likes=_counts_from_latent(latents["acceptance"]),
                    love=love, haha=haha, wow=wow, angry=angry, sad=sad))
                scored.append(ScoredPost(
                    post_id=post_id, pairs=pairs, metaphoricity=met,
                    word_count=length, metaphoricity_norm=met / length))

    truth = {
        "participation_coef": participation_coef,
        "planted_party": "Democrat",
        "planted_quarter": "Q+1",
        "base_verbs": list(STUDY_BASE_VERBS),
        "planted_verbs": list(STUDY_PLANTED_VERBS),
        "politician_sd": politician_sd,
        "lemma_sd": lemma_sd,
        "resid_sd": resid_sd,
    }
    return scored, posts, politicians, truth
