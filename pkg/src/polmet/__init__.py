"""polmet: metaphor detection and engagement analytics for political posts.

A numpy/scipy pipeline with three layers:

* a gated word-pair classifier over fixed pre-trained embeddings
  (:mod:`polmet.net`, :mod:`polmet.embeddings`),
* corpus machinery that extracts candidate word pairs from dependency
  parses and scores per-post metaphoricity and engagement
  (:mod:`polmet.conllu`, :mod:`polmet.pairs`, :mod:`polmet.scoring`,
  :mod:`polmet.engagement`),
* a statistics engine and study runners that reproduce the usage,
  post-level engagement, and word-level engagement analyses
  (:mod:`polmet.stats`, :mod:`polmet.studies`).
"""

__version__ = "0.1.0"

from polmet.embeddings import EmbeddingStore, load_embeddings
from polmet.net import (
    ModelParams,
    SavedModel,
    TrainConfig,
    init_params,
    forward,
    batch_loss_and_grads,
    train,
    evaluate,
    classify,
    save_model,
    load_model,
)
from polmet.scoring import ScoredPost, score_post, score_corpus, corpus_summary
from polmet.studies import (
    StudyConfig,
    EngagementOptions,
    assign_quarter,
    balanced_sample,
    run_usage_study,
    run_post_engagement_study,
    select_lemmas,
    run_word_level_study,
    emit_report,
)

__all__ = [
    "EmbeddingStore",
    "load_embeddings",
    "ModelParams",
    "SavedModel",
    "TrainConfig",
    "init_params",
    "forward",
    "batch_loss_and_grads",
    "train",
    "evaluate",
    "classify",
    "save_model",
    "load_model",
    "ScoredPost",
    "score_post",
    "score_corpus",
    "corpus_summary",
    "StudyConfig",
    "EngagementOptions",
    "assign_quarter",
    "balanced_sample",
    "run_usage_study",
    "run_post_engagement_study",
    "select_lemmas",
    "run_word_level_study",
    "emit_report",
    "__version__",
]
