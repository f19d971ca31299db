"""Gated word-pair metaphor classifier.

The network reads two fixed word embeddings (governor first, noun second),
gates the second by a sigmoid function of the first, maps both through tanh
layers, combines them multiplicatively, and emits a metaphoricity score in
(0, 1). Training minimizes a margin hinge on the score with AdaDelta;
embeddings are never updated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import expit

from polmet.data import LabeledPair
from polmet.embeddings import EmbeddingStore

MODEL_FORMAT = "polmet-model"
MODEL_VERSION = 1

PARAM_FIELDS = (
    "gate_w", "gate_b",
    "left_w", "left_b",
    "right_w", "right_b",
    "hidden_w", "hidden_b",
    "out_w", "out_b",
)


@dataclass
class ModelParams:
    """All trainable weights. Shapes, for dims (E, Z, D):

    gate_w (E, E), gate_b (E,): sigmoid gate computed from the first word.
    left_w (Z, E), left_b (Z,): tanh map of the first word.
    right_w (Z, E), right_b (Z,): tanh map of the gated second word.
    hidden_w (D, Z), hidden_b (D,): tanh layer over the elementwise product.
    out_w (D,), out_b (1,): logistic output.
    """

    gate_w: np.ndarray
    gate_b: np.ndarray
    left_w: np.ndarray
    left_b: np.ndarray
    right_w: np.ndarray
    right_b: np.ndarray
    hidden_w: np.ndarray
    hidden_b: np.ndarray
    out_w: np.ndarray
    out_b: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.gate_w.shape[0], self.left_w.shape[0],
                self.hidden_w.shape[0])

    @property
    def trainable_count(self) -> int:
        return sum(getattr(self, name).size for name in PARAM_FIELDS)

    def items(self):
        for name in PARAM_FIELDS:
            yield name, getattr(self, name)

    def copy(self) -> "ModelParams":
        return ModelParams(**{n: a.copy() for n, a in self.items()})

    def is_finite(self) -> bool:
        return all(np.isfinite(a).all() for _, a in self.items())


def trainable_param_count(dims: tuple[int, int, int]) -> int:
    """Closed-form trainable parameter count for dims (E, Z, D)."""
    e, z, d = dims
    return e * e + e + 2 * (z * e + z) + d * z + d + d + 1


def init_params(dims: tuple[int, int, int] = (100, 300, 50),
                seed: int = 0,
                init_scale: float = 0.1) -> ModelParams:
    """Seeded initialization: weights uniform in [-init_scale, init_scale],
    biases zero."""
    e, z, d = dims
    if e <= 0 or z <= 0 or d <= 0:
        raise ValueError(f"dims must be positive, got {dims}")
    rng = np.random.default_rng(seed)

    def w(*shape):
        return rng.uniform(-init_scale, init_scale, size=shape)

    return ModelParams(
        gate_w=w(e, e), gate_b=np.zeros(e),
        left_w=w(z, e), left_b=np.zeros(z),
        right_w=w(z, e), right_b=np.zeros(z),
        hidden_w=w(d, z), hidden_b=np.zeros(d),
        out_w=w(d), out_b=np.zeros(1),
    )


@dataclass
class ForwardTrace:
    """Intermediate activations of one forward pass."""

    x1: np.ndarray
    x2: np.ndarray
    gate: np.ndarray          # sigmoid gate, entries in (0, 1)
    gated_x2: np.ndarray      # gate * x2
    left_hidden: np.ndarray   # tanh map of x1, entries in (-1, 1)
    right_hidden: np.ndarray  # tanh map of gated x2
    hidden: np.ndarray        # tanh layer over the product
    score: float              # output in (0, 1)


def _check_dims(params: ModelParams, x1: np.ndarray, x2: np.ndarray) -> None:
    e = params.gate_w.shape[1]
    if x1.shape[-1] != e or x2.shape[-1] != e:
        raise ValueError(
            f"input dimension mismatch: model expects {e}, "
            f"got {x1.shape[-1]} and {x2.shape[-1]}")


def _batch_forward(params: ModelParams, x1: np.ndarray, x2: np.ndarray):
    """Vectorized forward pass over a batch. Returns all activations."""
    gate = expit(x1 @ params.gate_w.T + params.gate_b)
    gated = gate * x2
    z1 = np.tanh(x1 @ params.left_w.T + params.left_b)
    z2 = np.tanh(gated @ params.right_w.T + params.right_b)
    mix = z1 * z2
    hidden = np.tanh(mix @ params.hidden_w.T + params.hidden_b)
    score = expit(hidden @ params.out_w + params.out_b[0])
    return gate, gated, z1, z2, mix, hidden, score


def forward(params: ModelParams, x1: np.ndarray, x2: np.ndarray) -> ForwardTrace:
    """Run one pair through the network and keep every activation."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    _check_dims(params, x1, x2)
    gate, gated, z1, z2, _, hidden, score = _batch_forward(
        params, x1[None, :], x2[None, :])
    return ForwardTrace(x1=x1, x2=x2, gate=gate[0], gated_x2=gated[0],
                        left_hidden=z1[0], right_hidden=z2[0],
                        hidden=hidden[0], score=float(score[0]))


def batch_scores(params: ModelParams, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Scores for a (B, E) batch of pairs."""
    _check_dims(params, x1, x2)
    return _batch_forward(params, x1, x2)[-1]


def hinge_losses(scores: np.ndarray, labels: np.ndarray,
                 margin: float) -> np.ndarray:
    """Per-example hinge loss max(0, margin - (2y - 1)(score - 0.5)).

    Examples at exactly zero loss sit outside the margin band and are
    inactive: they contribute no gradient.
    """
    signs = 2.0 * labels - 1.0
    return np.maximum(0.0, margin - signs * (scores - 0.5))


def batch_loss_and_grads(params: ModelParams,
                         batch: list[tuple[np.ndarray, np.ndarray, int]],
                         margin: float = 0.4):
    """Summed hinge loss and exact analytic gradients for one mini-batch.

    Args:
        batch: list of (x1, x2, label) with binary labels.

    Returns:
        (loss, grads, active_count) where grads is a ModelParams holding
        d(loss)/d(parameter) and active_count is the number of examples
        inside the margin band. Embedding inputs are constants.
    """
    if not batch:
        raise ValueError("empty batch")
    x1 = np.asarray([b[0] for b in batch], dtype=np.float64)
    x2 = np.asarray([b[1] for b in batch], dtype=np.float64)
    labels = np.asarray([b[2] for b in batch], dtype=np.float64)
    _check_dims(params, x1, x2)

    gate, gated, z1, z2, mix, hidden, score = _batch_forward(params, x1, x2)
    losses = hinge_losses(score, labels, margin)
    active = losses > 0.0
    loss = float(losses.sum())

    signs = 2.0 * labels - 1.0
    d_score = np.where(active, -signs, 0.0)

    # Backprop through the logistic output.
    d_logit = d_score * score * (1.0 - score)
    g_out_w = hidden.T @ d_logit
    g_out_b = np.array([d_logit.sum()])

    d_hidden = np.outer(d_logit, params.out_w)
    d_pre_h = d_hidden * (1.0 - hidden ** 2)
    g_hidden_w = d_pre_h.T @ mix
    g_hidden_b = d_pre_h.sum(axis=0)

    d_mix = d_pre_h @ params.hidden_w
    d_pre_z1 = d_mix * z2 * (1.0 - z1 ** 2)
    g_left_w = d_pre_z1.T @ x1
    g_left_b = d_pre_z1.sum(axis=0)

    d_pre_z2 = d_mix * z1 * (1.0 - z2 ** 2)
    g_right_w = d_pre_z2.T @ gated
    g_right_b = d_pre_z2.sum(axis=0)

    d_gated = d_pre_z2 @ params.right_w
    d_pre_gate = d_gated * x2 * gate * (1.0 - gate)
    g_gate_w = d_pre_gate.T @ x1
    g_gate_b = d_pre_gate.sum(axis=0)

    grads = ModelParams(
        gate_w=g_gate_w, gate_b=g_gate_b,
        left_w=g_left_w, left_b=g_left_b,
        right_w=g_right_w, right_b=g_right_b,
        hidden_w=g_hidden_w, hidden_b=g_hidden_b,
        out_w=g_out_w, out_b=g_out_b,
    )
    return loss, grads, int(active.sum())


class AdadeltaState:
    """Per-parameter running averages E[g^2] and E[dx^2], both zero at start."""

    def __init__(self, sq_grad: dict[str, np.ndarray],
                 sq_step: dict[str, np.ndarray]):
        self.sq_grad = sq_grad
        self.sq_step = sq_step

    @classmethod
    def zeros(cls, params: ModelParams) -> "AdadeltaState":
        return cls({n: np.zeros_like(a) for n, a in params.items()},
                   {n: np.zeros_like(a) for n, a in params.items()})


def adadelta_step(params: ModelParams, grads: ModelParams,
                  state: AdadeltaState, rho: float = 0.95,
                  eps: float = 1e-6) -> tuple[ModelParams, AdadeltaState]:
    """One AdaDelta update (Zeiler's rule) applied to every parameter group.

    E[g^2] <- rho E[g^2] + (1-rho) g^2
    dx     = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
    E[dx^2] <- rho E[dx^2] + (1-rho) dx^2
    """
    new_params, new_sq_grad, new_sq_step = {}, {}, {}
    for name, value in params.items():
        g = getattr(grads, name)
        if g.shape != state.sq_grad[name].shape:
            raise ValueError(f"gradient/state shape mismatch for {name}")
        sq_g = rho * state.sq_grad[name] + (1.0 - rho) * g * g
        step = -np.sqrt(state.sq_step[name] + eps) / np.sqrt(sq_g + eps) * g
        sq_s = rho * state.sq_step[name] + (1.0 - rho) * step * step
        new_params[name] = value + step
        new_sq_grad[name] = sq_g
        new_sq_step[name] = sq_s
    return ModelParams(**new_params), AdadeltaState(new_sq_grad, new_sq_step)


@dataclass
class TrainConfig:
    margin: float = 0.4
    max_epochs: int = 300
    patience: int = 7
    batch_size: int = 32
    adadelta_rho: float = 0.95
    adadelta_eps: float = 1e-6
    init_scale: float = 0.1
    seed: int = 0
    dims: tuple[int, int, int] | None = None  # default: (E from store, 300, 50)
    dev_metric: str = "accuracy"              # "accuracy" or "f1"

    def __post_init__(self):
        if not 0.0 < self.margin <= 0.5:
            raise ValueError("margin must be in (0, 0.5]")
        if self.max_epochs <= 0 or self.batch_size <= 0:
            raise ValueError("max_epochs and batch_size must be positive")
        if self.patience < 0:
            raise ValueError("patience must be >= 0")
        if self.dev_metric not in ("accuracy", "f1"):
            raise ValueError("dev_metric must be 'accuracy' or 'f1'")


@dataclass
class Metrics:
    """Binary classification metrics for the metaphor class."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0


@dataclass
class TrainedModel:
    params: ModelParams
    log: list[dict] = field(default_factory=list)
    best_epoch: int = 0
    best_dev_metric: float = 0.0
    dev_metric_name: str = "accuracy"


def pairs_to_arrays(pairs: list[LabeledPair], store: EmbeddingStore):
    """Resolve labeled pairs to embedding rows. OOV words are an error here;
    training data must be fully in vocabulary."""
    oov = sorted({w for p in pairs for w in (p.left, p.right)
                  if store.lookup(w) is None})
    if oov:
        raise ValueError(f"out-of-vocabulary words in dataset: {oov[:10]}"
                         + (" ..." if len(oov) > 10 else ""))
    x1 = np.vstack([store.lookup(p.left) for p in pairs])
    x2 = np.vstack([store.lookup(p.right) for p in pairs])
    labels = np.array([p.label for p in pairs], dtype=np.float64)
    return x1, x2, labels


def _metrics_from_predictions(pred: np.ndarray, labels: np.ndarray) -> Metrics:
    pred = pred.astype(bool)
    truth = labels.astype(bool)
    tp = int(np.sum(pred & truth))
    fp = int(np.sum(pred & ~truth))
    fn = int(np.sum(~pred & truth))
    tn = int(np.sum(~pred & ~truth))
    n = tp + fp + fn + tn
    accuracy = (tp + tn) / n
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return Metrics(accuracy, precision, recall, f1, tp, fp, fn, tn)


def evaluate(params: ModelParams, test_set: list[LabeledPair],
             store: EmbeddingStore, threshold: float = 0.5) -> Metrics:
    """Accuracy/precision/recall/F1 at the benchmark decision threshold 0.5."""
    if not test_set:
        raise ValueError("empty evaluation set")
    x1, x2, labels = pairs_to_arrays(test_set, store)
    scores = batch_scores(params, x1, x2)
    return _metrics_from_predictions(scores >= threshold, labels)


def train(train_set: list[LabeledPair], dev_set: list[LabeledPair],
          store: EmbeddingStore, config: TrainConfig) -> TrainedModel:
    """Mini-batch AdaDelta training with best-dev early stopping.

    After every epoch the dev metric is evaluated and the best-scoring
    parameter snapshot is kept; training stops once `patience` epochs pass
    without improvement (patience 0 therefore runs exactly one epoch) or at
    max_epochs. Returns the best snapshot, never the last one.
    """
    if not train_set or not dev_set:
        raise ValueError("train and dev sets must be non-empty")
    x1, x2, labels = pairs_to_arrays(train_set, store)
    dims = config.dims or (store.dim, 300, 50)
    if dims[0] != store.dim:
        raise ValueError(f"model E={dims[0]} does not match store dim {store.dim}")

    seed_init, seed_shuffle = np.random.SeedSequence(config.seed).spawn(2)
    params = init_params(dims, seed_init, config.init_scale)
    state = AdadeltaState.zeros(params)
    shuffle_rng = np.random.default_rng(seed_shuffle)

    n = len(train_set)
    best_params = params.copy()
    best_metric = -np.inf
    best_epoch = 0
    stale = 0
    log: list[dict] = []

    for epoch in range(1, config.max_epochs + 1):
        order = shuffle_rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch = [(x1[i], x2[i], labels[i]) for i in idx]
            loss, grads, _ = batch_loss_and_grads(params, batch, config.margin)
            epoch_loss += loss
            params, state = adadelta_step(params, grads, state,
                                          config.adadelta_rho,
                                          config.adadelta_eps)

        dev = evaluate(params, dev_set, store)
        metric = dev.accuracy if config.dev_metric == "accuracy" else dev.f1
        log.append({"epoch": epoch, "train_loss": epoch_loss,
                    "dev_metric": metric})
        if metric > best_metric:
            best_metric = metric
            best_params = params.copy()
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
        if stale >= config.patience:
            break

    return TrainedModel(params=best_params, log=log, best_epoch=best_epoch,
                        best_dev_metric=float(best_metric),
                        dev_metric_name=config.dev_metric)


def classify(params: ModelParams, pair: tuple[str, str],
             store: EmbeddingStore,
             threshold: float = 0.7) -> tuple[float, bool] | None:
    """Score one (governor, noun) pair; the governor gates the noun.

    Returns (score, is_metaphor) with is_metaphor = score >= threshold,
    or None when either word is out of vocabulary. A boundary score equal
    to the threshold counts as metaphorical.
    """
    left, right = pair
    v1 = store.lookup(left)
    v2 = store.lookup(right)
    if v1 is None or v2 is None:
        return None
    score = float(forward(params, v1, v2).score)
    return score, score >= threshold


@dataclass
class SavedModel:
    """A model file's contents: weights plus scoring metadata."""

    params: ModelParams
    threshold_default: float = 0.7
    construction: str | None = None      # "adj" or "verb" model family
    embeddings_ref: dict | None = None   # path/dim/vocab_size/sha256


def save_model(path: str | Path, params: ModelParams,
               threshold_default: float = 0.7,
               construction: str | None = None,
               embeddings_ref: dict | None = None) -> None:
    """Write a versioned JSON model file (row-major decimal arrays).

    ``embeddings_ref`` records which fixed embedding table the model was
    trained against (path, dim, vocab_size, content hash) so later scoring
    runs can locate and validate it.
    """
    payload = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "dims": list(params.dims),
        "threshold_default": threshold_default,
        "construction": construction,
        "embeddings": embeddings_ref,
        "params": {name: arr.tolist() for name, arr in params.items()},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> SavedModel:
    """Read a model file written by save_model."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a model file")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(f"{path}: unsupported model version "
                         f"{payload.get('version')}")
    params = ModelParams(**{name: np.asarray(arr, dtype=np.float64)
                            for name, arr in payload["params"].items()})
    return SavedModel(params=params,
                      threshold_default=float(
                          payload.get("threshold_default", 0.7)),
                      construction=payload.get("construction"),
                      embeddings_ref=payload.get("embeddings"))


def write_training_log(path: str | Path, log: list[dict]) -> None:
    """Line-delimited training log: one JSON record per epoch."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in log:
            fh.write(json.dumps(record, sort_keys=True))
            fh.write("\n")
