import numpy as np
import pytest

from curvesketch.analysis.classify import (
    DegenerateLabels,
    ErrorReport,
    ExperimentConfig,
    balanced_split,
    evaluate_repeats,
    knn_classify,
    logreg_train,
    run_directional_experiment,
)


def test_knn_examples(rng):
    X = rng.normal(size=(10, 3))
    y = ["a"] * 5 + ["b"] * 5
    assert knn_classify(X, y, X[3:4], 1) == ["a"]
    far = np.vstack([rng.normal(size=(5, 2)), rng.normal(size=(5, 2)) + 100])
    assert knn_classify(far, y, far + 0.01, 3) == y
    # k = |train| with balanced labels: the smaller summed distance wins
    assert knn_classify([[0.0], [10.0]], ["b", "a"], [[1.0]], 2) == ["b"]
    assert knn_classify([[-1.0], [1.0]], ["b", "a"], [[0.0]], 2) == ["a"]
    with pytest.raises(ValueError):
        knn_classify(X, y, X, 11)


def test_logreg_examples():
    x = np.array([[-1.0], [-2.0], [1.0], [2.0]])
    m = logreg_train(x, ["neg", "neg", "pos", "pos"])
    assert m.weights[1] > 0
    assert m.predict(x) == ["neg", "neg", "pos", "pos"]
    with pytest.raises(DegenerateLabels):
        logreg_train(x, ["a"] * 4)


def test_logreg_loss_non_increasing_on_xor():
    x = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    m = logreg_train(x, [0, 0, 1, 1], lr=0.5, iters=200)
    assert np.all(np.diff(m.losses) <= 1e-15)


def test_balanced_split(rng):
    labels = ["a"] * 10 + ["b"] * 20
    tr, te = balanced_split(labels, 0.7, rng)
    assert len(tr) == 21 and len(te) == 9
    assert sorted(np.concatenate([tr, te]).tolist()) == list(range(30))
    assert sum(labels[i] == "a" for i in tr) == 7


def test_error_report_and_config():
    r = ErrorReport([0.0, 0.5, 1.0])
    assert (r.mean, r.median) == (0.5, 0.5) and r.variance == pytest.approx(1 / 6)
    with pytest.raises(ValueError):
        ErrorReport([1.5])
    for bad in ({"train_fraction": 1.0}, {"classifier": "svm"}, {"repeats": 0}):
        with pytest.raises(ValueError):
            ExperimentConfig(**bad)


def test_evaluate_repeats_is_deterministic(rng):
    X = rng.normal(size=(40, 3))
    y = ["a"] * 20 + ["b"] * 20
    cfg = ExperimentConfig(repeats=5, seed=4, classifier="knn")
    assert np.array_equal(evaluate_repeats(X, y, cfg).errors, evaluate_repeats(X, y, cfg).errors)


def test_signed_knn_separates_directions():
    cfg = ExperimentConfig(repeats=10, classifier="knn", n_per_class=40)
    assert run_directional_experiment(cfg, "signed").mean <= 0.02
