"""Classifier unit tests: forward pass, gradients, optimizer, training."""

import json

import numpy as np
import numpy.testing as npt
import pytest

from polmet.data import LabeledPair
from polmet.embeddings import EmbeddingStore
from polmet.net import (AdadeltaState, ModelParams, TrainConfig, adadelta_step,
                        batch_loss_and_grads, batch_scores, classify,
                        evaluate, forward, hinge_losses, init_params,
                        load_model, save_model, train, trainable_param_count,
                        write_training_log)
from polmet.simulate import (make_separable_pair_data,
                             nearest_centroid_accuracy)


def unit_params():
    """Scalar network (E=Z=D=1) with all weights one and biases zero."""
    one = np.ones((1, 1))
    zero = np.zeros(1)
    return ModelParams(gate_w=one.copy(), gate_b=zero.copy(),
                       left_w=one.copy(), left_b=zero.copy(),
                       right_w=one.copy(), right_b=zero.copy(),
                       hidden_w=one.copy(), hidden_b=zero.copy(),
                       out_w=np.ones(1), out_b=zero.copy())


def test_forward_scalar_chain():
    """Hand-computed oracle for the full gated chain at unit weights.

    g = sigma(1); x2 gated to g; z1 = tanh(1); z2 = tanh(g);
    d = tanh(z1 z2); y = sigma(d).
    """
    trace = forward(unit_params(), np.array([1.0]), np.array([1.0]))
    npt.assert_allclose(trace.gate, [0.7310585786300049], rtol=0, atol=1e-12)
    npt.assert_allclose(trace.gated_x2, [0.7310585786300049], atol=1e-12)
    npt.assert_allclose(trace.left_hidden, [0.7615941559557649], atol=1e-12)
    npt.assert_allclose(trace.right_hidden, [0.6237125498258757], atol=1e-12)
    npt.assert_allclose(trace.hidden, [0.4422430924880208], atol=1e-12)
    assert trace.score == pytest.approx(0.6087933848008463, abs=1e-12)


def test_forward_zero_weights():
    params = init_params(dims=(3, 4, 2), seed=0)
    for name, arr in params.items():
        arr[...] = 0.0
    trace = forward(params, np.array([0.3, -1.0, 2.0]), np.array([1.0, 1.0, 1.0]))
    npt.assert_array_equal(trace.gate, 0.5 * np.ones(3))
    npt.assert_array_equal(trace.left_hidden, np.zeros(4))
    npt.assert_array_equal(trace.right_hidden, np.zeros(4))
    npt.assert_array_equal(trace.hidden, np.zeros(2))
    assert trace.score == 0.5


def test_forward_zero_x2_annihilates_gate():
    params = init_params(dims=(3, 4, 2), seed=1)
    trace = forward(params, np.array([0.5, 0.5, -0.5]), np.zeros(3))
    npt.assert_array_equal(trace.gated_x2, np.zeros(3))


def test_forward_score_strictly_inside_unit_interval():
    rng = np.random.default_rng(7)
    params = init_params(dims=(6, 5, 4), seed=3)
    for _ in range(25):
        trace = forward(params, rng.normal(size=6), rng.normal(size=6))
        assert 0.0 < trace.score < 1.0
        assert np.isfinite(trace.hidden).all()


def test_trainable_param_count_closed_form():
    assert trainable_param_count((100, 300, 50)) == 85801
    assert trainable_param_count((2, 2, 1)) == 23
    assert trainable_param_count((10, 12, 5)) == 10 * 10 + 10 \
        + 2 * (12 * 10 + 12) + 5 * 12 + 5 + 5 + 1
    params = init_params(dims=(100, 300, 50), seed=0)
    assert params.trainable_count == 85801


def test_init_params_deterministic():
    a = init_params(dims=(8, 6, 4), seed=42)
    b = init_params(dims=(8, 6, 4), seed=42)
    for (name_a, arr_a), (name_b, arr_b) in zip(a.items(), b.items()):
        assert name_a == name_b
        npt.assert_array_equal(arr_a, arr_b)


def test_hinge_loss_values_and_inactivity():
    scores = np.array([0.95, 0.5, 0.2])
    labels = np.array([1.0, 0.0, 1.0])
    losses = hinge_losses(scores, labels, margin=0.4)
    # label=1, score outside the margin band -> inactive
    assert losses[0] == 0.0
    # label=0 at the decision boundary -> full margin
    assert losses[1] == pytest.approx(0.4)
    assert losses[2] == pytest.approx(0.4 + 0.3)


def test_inactive_examples_contribute_zero_gradient():
    params = unit_params()
    params.out_b[...] = 5.0  # saturate the score well above 0.9
    batch = [(np.array([3.0]), np.array([3.0]), 1)]
    loss, grads, active = batch_loss_and_grads(params, batch, margin=0.4)
    assert loss == 0.0
    assert active == 0
    for name, arr in grads.items():
        npt.assert_array_equal(arr, np.zeros_like(arr))


def _random_active_example(rng, dims):
    """Params and inputs whose hinge loss is strictly positive."""
    params = init_params(dims=dims, seed=int(rng.integers(1 << 30)),
                         init_scale=0.3)
    while True:
        x1 = rng.normal(size=dims[0])
        x2 = rng.normal(size=dims[0])
        label = float(rng.integers(0, 2))
        score = forward(params, x1, x2).score
        if max(0.0, 0.4 - (2 * label - 1) * (score - 0.5)) > 1e-3:
            return params, x1, x2, label


def test_gradients_match_finite_differences():
    """Central finite differences vs analytic gradients, all groups."""
    rng = np.random.default_rng(11)
    dims = (10, 12, 5)
    step = 1e-5
    for _ in range(10):
        params, x1, x2, label = _random_active_example(rng, dims)
        batch = [(x1, x2, label)]
        _, grads, active = batch_loss_and_grads(params, batch, margin=0.4)
        assert active == 1
        for name, grad in grads.items():
            numeric = np.zeros_like(grad)
            flat_param = getattr(params, name)
            it = np.nditer(flat_param, flags=["multi_index"])
            for _v in it:
                idx = it.multi_index
                orig = flat_param[idx]
                flat_param[idx] = orig + step
                up, _, _ = batch_loss_and_grads(params, batch, 0.4)
                flat_param[idx] = orig - step
                dn, _, _ = batch_loss_and_grads(params, batch, 0.4)
                flat_param[idx] = orig
                numeric[idx] = (up - dn) / (2 * step)
            denom = np.maximum(np.abs(grad), np.abs(numeric))
            err = np.abs(grad - numeric) / np.where(denom > 1e-8, denom, 1.0)
            assert err.max() < 1e-4, f"group {name}: max rel err {err.max()}"


def test_adadelta_first_step_oracle():
    """First update with unit gradient: dx = -sqrt(eps)/sqrt(.05+eps)."""
    params = unit_params()
    grads = unit_params()  # every gradient component = 1
    state = AdadeltaState.zeros(params)
    new_params, new_state = adadelta_step(params, grads, state,
                                          rho=0.95, eps=1e-6)
    expected_dx = -0.004472091234310839
    npt.assert_allclose(new_params.gate_w, 1.0 + expected_dx, atol=1e-15)
    npt.assert_allclose(new_state.sq_grad["gate_w"], 0.05, atol=1e-15)
    npt.assert_allclose(new_state.sq_step["gate_w"],
                        0.05 * expected_dx ** 2, atol=1e-18)
    # zero gradient leaves parameters unchanged, accumulators decay
    zero_grads = unit_params()
    for name, arr in zero_grads.items():
        arr[...] = 0.0
    p2, s2 = adadelta_step(new_params, zero_grads, new_state,
                           rho=0.95, eps=1e-6)
    npt.assert_array_equal(p2.gate_w, new_params.gate_w)
    npt.assert_allclose(s2.sq_grad["gate_w"], 0.95 * 0.05, atol=1e-15)


def test_adadelta_identical_gradients_stay_identical():
    params = init_params(dims=(2, 2, 1), seed=0)
    params.left_w[...] = 0.25
    grads = init_params(dims=(2, 2, 1), seed=1)
    grads.left_w[...] = 0.8
    state = AdadeltaState.zeros(params)
    for _ in range(5):
        params, state = adadelta_step(params, grads, state, 0.95, 1e-6)
    assert np.unique(params.left_w).size == 1


@pytest.fixture(scope="module")
def separable():
    return make_separable_pair_data(n_train=400, n_dev=100, dim=10, seed=5)


def test_training_learns_separable_data(separable):
    store, train_pairs, dev_pairs = separable
    baseline = nearest_centroid_accuracy(train_pairs, dev_pairs, store)
    assert baseline >= 0.95  # the construction really is separable
    config = TrainConfig(max_epochs=100, patience=7, seed=3,
                         dims=(10, 12, 5))
    trained = train(train_pairs, dev_pairs, store, config)
    assert trained.best_dev_metric >= 0.95


def test_training_deterministic(separable):
    store, train_pairs, dev_pairs = separable
    config = TrainConfig(max_epochs=5, patience=7, seed=9, dims=(10, 8, 4))
    a = train(train_pairs, dev_pairs, store, config)
    b = train(train_pairs, dev_pairs, store, config)
    for (_, arr_a), (_, arr_b) in zip(a.params.items(), b.params.items()):
        npt.assert_array_equal(arr_a, arr_b)
    assert a.log == b.log


def test_patience_zero_runs_exactly_one_epoch(separable):
    store, train_pairs, dev_pairs = separable
    config = TrainConfig(max_epochs=50, patience=0, seed=1, dims=(10, 8, 4))
    trained = train(train_pairs, dev_pairs, store, config)
    assert len(trained.log) == 1
    assert trained.best_epoch == 1


def test_best_dev_snapshot_property(separable):
    store, train_pairs, dev_pairs = separable
    config = TrainConfig(max_epochs=12, patience=12, seed=2, dims=(10, 8, 4))
    trained = train(train_pairs, dev_pairs, store, config)
    per_epoch = [rec["dev_metric"] for rec in trained.log]
    assert trained.best_dev_metric == pytest.approx(max(per_epoch))


def test_evaluate_all_metaphor_on_balanced_set():
    """Degenerate always-positive model on a 50/50 set."""
    rng = np.random.default_rng(0)
    vocab, rows, pairs = {}, [], []
    for i in range(40):
        for tok in (f"a{i}", f"b{i}"):
            vocab[tok] = len(rows)
            rows.append(rng.normal(size=4))
        pairs.append(LabeledPair(f"a{i}", f"b{i}", "verb-obj", i % 2))
    store = EmbeddingStore(vocab, np.array(rows))
    params = init_params(dims=(4, 3, 2), seed=0)
    params.out_b[...] = 50.0  # saturate the output at ~1.0
    metrics = evaluate(params, pairs, store, threshold=0.5)
    assert metrics.accuracy == pytest.approx(0.5)
    assert metrics.recall == pytest.approx(1.0)
    assert metrics.precision == pytest.approx(0.5)
    assert metrics.f1 == pytest.approx(2 / 3)


def test_classify_threshold_boundary(separable):
    store, train_pairs, _ = separable
    params = init_params(dims=(10, 8, 4), seed=0)
    pair = (train_pairs[0].left, train_pairs[0].right)
    result = classify(params, pair, store, threshold=0.0)
    assert result is not None
    score, flag = result
    assert flag  # any score passes threshold 0
    # exact-threshold convention: score >= threshold -> metaphor
    score2, flag2 = classify(params, pair, store, threshold=score)
    assert score2 == score and flag2
    _, flag3 = classify(params, pair, store,
                        threshold=np.nextafter(score, 1.0))
    assert not flag3
    assert classify(params, ("missing", "words"), store) is None


def test_threshold_monotonicity(separable):
    store, train_pairs, _ = separable
    params = init_params(dims=(10, 8, 4), seed=4)
    x1, x2, _ = (np.vstack([store.lookup(p.left) for p in train_pairs[:50]]),
                 np.vstack([store.lookup(p.right) for p in train_pairs[:50]]),
                 None)
    scores = batch_scores(params, x1, x2)
    flagged = [set(np.flatnonzero(scores >= t)) for t in (0.5, 0.6, 0.7)]
    assert flagged[2] <= flagged[1] <= flagged[0]


def test_model_save_load_round_trip(tmp_path, separable):
    store, _, _ = separable
    params = init_params(dims=(10, 8, 4), seed=6)
    ref = {"path": "emb.txt", "dim": 10, "vocab_size": len(store),
           "sha256": "0" * 64}
    path = tmp_path / "model.json"
    save_model(path, params, threshold_default=0.6, construction="verb",
               embeddings_ref=ref)
    saved = load_model(path)
    for (_, arr_a), (_, arr_b) in zip(params.items(), saved.params.items()):
        npt.assert_array_equal(arr_a, arr_b)
    assert saved.threshold_default == 0.6
    assert saved.construction == "verb"
    assert saved.embeddings_ref == ref
    with pytest.raises(ValueError):
        (tmp_path / "bad.json").write_text('{"format": "other"}')
        load_model(tmp_path / "bad.json")


def test_training_log_jsonl_round_trip(tmp_path):
    log = [{"epoch": 1, "train_loss": 3.5, "dev_metric": 0.75},
           {"epoch": 2, "train_loss": 2.0, "dev_metric": 0.8}]
    path = tmp_path / "log.jsonl"
    write_training_log(path, log)
    lines = path.read_text().splitlines()
    assert [json.loads(line) for line in lines] == log
