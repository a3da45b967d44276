"""Classifiers over feature vectors and the directional classification experiment."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..datasets import DirectionalSpec, gen_directional, grid_landmarks, normalize_to_unit
from ..features import LandmarkSet, SketchConfig, Variant, sketch_many


class DegenerateLabels(ValueError):
    """Training data holds a single class."""


def knn_classify(train_x, train_y, test_x, k: int) -> list:
    """Majority vote over the k nearest training rows (Euclidean).

    Ties go to the label with the smallest summed distance among the k
    neighbours, then to the lexicographically smallest label.
    """
    train_x = np.asarray(train_x, dtype=float)
    test_x = np.atleast_2d(np.asarray(test_x, dtype=float))
    train_y = list(train_y)
    if not 1 <= k <= len(train_y):
        raise ValueError(f"k must be in [1, {len(train_y)}], got {k}")
    out = []
    for x in test_x:
        d = np.sqrt(((train_x - x) ** 2).sum(axis=1))
        nn = np.argsort(d, kind="stable")[:k]
        votes: dict = {}
        for i in nn:
            count, total = votes.get(train_y[i], (0, 0.0))
            votes[train_y[i]] = (count + 1, total + d[i])
        out.append(min(votes, key=lambda lab: (-votes[lab][0], votes[lab][1], str(lab))))
    return out


@dataclass(frozen=True)
class LogisticModel:
    """Binary logistic regression; ``weights[0]`` is the bias."""

    weights: np.ndarray
    classes: tuple
    losses: np.ndarray

    def decision(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return self.weights[0] + x @ self.weights[1:]

    def predict(self, x) -> list:
        return [self.classes[int(z > 0)] for z in self.decision(x)]


def _log_loss(z, y):
    # mean of log(1 + exp(-s z)) with s = 2y - 1, computed stably
    return float(np.mean(np.logaddexp(0.0, -(2 * y - 1) * z)))


def logreg_train(train_x, train_y, lr: float = 0.5, iters: int = 500) -> LogisticModel:
    """Full-batch gradient descent from zero weights, bias included, no penalty.

    The lexicographically larger label is the positive class.
    """
    x = np.asarray(train_x, dtype=float)
    classes = tuple(sorted(set(train_y), key=str))
    if len(classes) < 2:
        raise DegenerateLabels("logistic regression needs two classes")
    if len(classes) > 2:
        raise ValueError("logistic regression here is binary")
    y = np.array([classes.index(lab) for lab in train_y], dtype=float)
    X = np.column_stack([np.ones(len(x)), x])
    w = np.zeros(X.shape[1])
    losses = np.empty(iters + 1)
    for it in range(iters):
        z = X @ w
        losses[it] = _log_loss(z, y)
        p = 0.5 * (1.0 + np.tanh(0.5 * z))
        w -= lr * (X.T @ (p - y)) / len(y)
    losses[iters] = _log_loss(X @ w, y)
    return LogisticModel(w, classes, losses)


def logreg_predict(model: LogisticModel, test_x) -> list:
    return model.predict(test_x)


@dataclass(frozen=True)
class ExperimentConfig:
    train_fraction: float = 0.7
    repeats: int = 100
    classifier: str = "logreg"
    k: int = 5
    lr: float = 0.5
    iters: int = 500
    seed: int = 0
    n_per_class: int = 100
    sigma: float = 0.3
    nx: int = 20
    ny: int = 20

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if self.classifier not in ("logreg", "knn"):
            raise ValueError(f"unknown classifier {self.classifier!r}")
        if self.k < 1 or self.iters < 1 or not self.lr > 0:
            raise ValueError("k, iters and lr must be positive")
        if not self.sigma > 0 or self.nx < 1 or self.ny < 1 or self.n_per_class < 2:
            raise ValueError("sigma, grid size and n_per_class must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ErrorReport:
    errors: np.ndarray
    mean: float = field(init=False)
    median: float = field(init=False)
    variance: float = field(init=False)

    def __post_init__(self):
        e = np.asarray(self.errors, dtype=float)
        if e.size == 0 or np.any((e < 0) | (e > 1)):
            raise ValueError("errors must be a non-empty list of values in [0, 1]")
        object.__setattr__(self, "errors", e)
        object.__setattr__(self, "mean", float(e.mean()))
        object.__setattr__(self, "median", float(np.median(e)))
        object.__setattr__(self, "variance", float(e.var()))

    def to_dict(self) -> dict:
        return {"mean": self.mean, "median": self.median, "variance": self.variance,
                "errors": [float(x) for x in self.errors]}


def balanced_split(labels, train_fraction: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Indices of a split with the same train fraction in every class."""
    labels = np.asarray(labels)
    train, test = [], []
    for lab in sorted(set(labels.tolist()), key=str):
        idx = np.flatnonzero(labels == lab)
        idx = idx[rng.permutation(len(idx))]
        n_train = int(round(train_fraction * len(idx)))
        train.append(idx[:n_train])
        test.append(idx[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def evaluate_repeats(x, labels, config: ExperimentConfig) -> ErrorReport:
    """Test error over ``config.repeats`` balanced splits.

    Repeat r draws its split from ``SeedSequence([seed, r])``.
    """
    x = np.asarray(x, dtype=float)
    labels = list(labels)
    lab_arr = np.asarray(labels)
    errors = np.empty(config.repeats)
    for r in range(config.repeats):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, r])))
        tr, te = balanced_split(lab_arr, config.train_fraction, rng)
        ytr = [labels[i] for i in tr]
        if config.classifier == "knn":
            pred = knn_classify(x[tr], ytr, x[te], config.k)
        else:
            pred = logreg_train(x[tr], ytr, config.lr, config.iters).predict(x[te])
        errors[r] = float(np.mean(np.asarray(pred) != lab_arr[te]))
    return ErrorReport(errors)


def directional_features(config: ExperimentConfig, variant, threads: int = 1):
    """Feature matrix and labels of the normalized directional dataset."""
    curves, labels = gen_directional(DirectionalSpec(n_per_class=config.n_per_class, seed=config.seed))
    curves, _ = normalize_to_unit(curves)
    landmarks: LandmarkSet = grid_landmarks((0.0, 0.0, 1.0, 1.0), config.nx, config.ny)
    sk = SketchConfig(config.sigma, Variant(variant), landmarks)
    vecs = sketch_many(curves, sk, threads=threads)
    return np.vstack([v.values for v in vecs]), labels


def run_directional_experiment(config: ExperimentConfig, variant, threads: int = 1) -> ErrorReport:
    """Generate, normalize, sketch and classify the directional dataset."""
    x, labels = directional_features(config, variant, threads)
    return evaluate_repeats(x, labels, config)


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
