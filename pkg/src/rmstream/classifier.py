"""Single-neuron sigmoid classifier over extracted refined motifs.

A linear layer into a sigmoid, trained with full-batch gradient descent on
the mean logistic loss.  Zero initialization and a fixed learning rate
keep runs reproducible; the objective is convex so nothing fancier is
needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DayPattern, InvalidInputError, RefinedMotif


@dataclass(frozen=True)
class ClassifierModel:
    """Weight vector + bias of the single neuron, plus inference options."""

    weights: tuple[float, ...]
    bias: float
    decision_threshold: float = 0.5
    scale_input: bool = False

    def __post_init__(self):
        if not (0.0 < self.decision_threshold < 1.0):
            raise InvalidInputError(
                f"decision_threshold must lie in (0, 1), got {self.decision_threshold}")


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def _features(model: ClassifierModel, pattern: Sequence[float]) -> np.ndarray:
    x = np.asarray(pattern, dtype=np.float64)
    if model.scale_input:
        peak = x.max()
        if peak > 0:
            x = x / peak
    return x


def predict(model: ClassifierModel, rm: RefinedMotif) -> tuple[float, bool]:
    """Probability and label for one refined motif.

    The label is positive when the probability reaches the decision
    threshold.
    """
    if len(model.weights) != rm.pattern.m:
        raise InvalidInputError(
            f"model expects {len(model.weights)} inputs, motif has {rm.pattern.m}")
    x = _features(model, rm.pattern.values)
    z = float(np.dot(model.weights, x) + model.bias)
    prob = float(_sigmoid(z))
    return prob, prob >= model.decision_threshold


def loss_and_gradient(weights, bias, x, y):
    """Mean logistic loss and its analytic gradient.

    x is (n, m), y in {0, 1}.  Exposed so the gradient can be checked
    against finite differences.
    """
    w = np.asarray(weights, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    z = x @ w + bias
    # log(1 + exp(z)) - y*z, computed stably
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    p = _sigmoid(z)
    grad_w = x.T @ (p - y) / len(y)
    grad_b = float(np.mean(p - y))
    return loss, grad_w, grad_b


def train(
    samples: Sequence[tuple[RefinedMotif, bool]],
    learning_rate: float = 0.5,
    epochs: int = 500,
    seed: int = 0,
    scale_input: bool = False,
    decision_threshold: float = 0.5,
) -> ClassifierModel:
    """Fit the neuron on (motif, label) pairs.

    Both classes must be present.  The seed is recorded for provenance;
    with zero initialization the fit is deterministic regardless.
    """
    del seed  # deterministic with zero init; kept for interface stability
    if not samples:
        raise InvalidInputError("no training samples")
    labels = {bool(label) for _, label in samples}
    if len(labels) < 2:
        raise InvalidInputError("training needs at least one sample per class")
    m = samples[0][0].pattern.m
    for rm, _ in samples:
        if rm.pattern.m != m:
            raise InvalidInputError("all training motifs must share one length")
    if epochs < 0:
        raise InvalidInputError(f"epochs must be >= 0, got {epochs}")

    probe = ClassifierModel(weights=(0.0,) * m, bias=0.0, scale_input=scale_input)
    x = np.stack([_features(probe, rm.pattern.values) for rm, _ in samples])
    y = np.array([1.0 if label else 0.0 for _, label in samples])

    w = np.zeros(m)
    b = 0.0
    for _ in range(epochs):
        _, grad_w, grad_b = loss_and_gradient(w, b, x, y)
        w = w - learning_rate * grad_w
        b = b - learning_rate * grad_b

    return ClassifierModel(
        weights=tuple(float(v) for v in w),
        bias=float(b),
        decision_threshold=decision_threshold,
        scale_input=scale_input,
    )
