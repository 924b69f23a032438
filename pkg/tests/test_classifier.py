import math

import numpy as np
import pytest

from rmstream import (
    ClassifierModel,
    DayPattern,
    InvalidInputError,
    RefinedMotif,
    predict,
    train,
)
from rmstream.classifier import loss_and_gradient


def motif(values, idx=0):
    pattern = DayPattern(day_index=idx, values=tuple(float(v) for v in values))
    return RefinedMotif(pattern=pattern, sp_value=0.0, source_index=idx)


def labeled(rows):
    return [(motif(values, i), label) for i, (values, label) in enumerate(rows)]


class TestPredict:
    def test_sigmoid_value(self):
        # w.x + b = -1  ->  sigmoid(-1) ~= 0.26894
        model = ClassifierModel(weights=(1.0, -1.0), bias=0.0)
        prob, label = predict(model, motif([1.0, 2.0]))
        assert prob == pytest.approx(1.0 / (1.0 + math.exp(1.0)), rel=1e-12)
        assert label is False

    def test_threshold_is_inclusive(self):
        model = ClassifierModel(weights=(0.0,) * 2, bias=0.0)
        prob, label = predict(model, motif([3.0, 4.0]))
        assert prob == 0.5
        assert label is True

    def test_scale_input(self):
        base = ClassifierModel(weights=(1.0, 1.0), bias=0.0)
        scaled = ClassifierModel(weights=(1.0, 1.0), bias=0.0, scale_input=True)
        p_raw, _ = predict(base, motif([2.0, 4.0]))
        p_scaled, _ = predict(scaled, motif([2.0, 4.0]))
        p_small, _ = predict(scaled, motif([0.5, 1.0]))
        assert p_scaled != p_raw
        assert p_scaled == pytest.approx(p_small, rel=1e-12)

    def test_length_mismatch(self):
        model = ClassifierModel(weights=(1.0, 2.0, 3.0), bias=0.0)
        with pytest.raises(InvalidInputError):
            predict(model, motif([1.0, 2.0]))

    def test_bad_threshold(self):
        with pytest.raises(InvalidInputError):
            ClassifierModel(weights=(1.0,), bias=0.0, decision_threshold=1.0)


class TestGradient:
    def test_matches_central_differences(self, rng):
        eps = 1e-6
        for _ in range(20):
            n, m = int(rng.integers(2, 8)), int(rng.integers(2, 6))
            x = rng.normal(size=(n, m))
            y = rng.integers(0, 2, size=n).astype(float)
            w = rng.normal(size=m)
            b = float(rng.normal())
            _, grad_w, grad_b = loss_and_gradient(w, b, x, y)
            for j in range(m):
                wp, wm = w.copy(), w.copy()
                wp[j] += eps
                wm[j] -= eps
                num = (loss_and_gradient(wp, b, x, y)[0]
                       - loss_and_gradient(wm, b, x, y)[0]) / (2 * eps)
                assert grad_w[j] == pytest.approx(num, rel=1e-5, abs=1e-8)
            num_b = (loss_and_gradient(w, b + eps, x, y)[0]
                     - loss_and_gradient(w, b - eps, x, y)[0]) / (2 * eps)
            assert grad_b == pytest.approx(num_b, rel=1e-5, abs=1e-8)

    def test_zero_at_perfect_fit_limit(self):
        # pushing the margin up drives both loss and gradient toward zero
        x = np.array([[1.0], [-1.0]])
        y = np.array([1.0, 0.0])
        loss, grad_w, grad_b = loss_and_gradient(np.array([50.0]), 0.0, x, y)
        assert loss < 1e-20
        assert abs(grad_w[0]) < 1e-20 and abs(grad_b) < 1e-20


class TestTrain:
    SAMPLES = labeled([
        ([0.1, 0.9], False),
        ([0.2, 0.8], False),
        ([0.9, 0.1], True),
        ([0.8, 0.2], True),
    ])

    def test_separable_reaches_full_accuracy(self):
        model = train(self.SAMPLES)
        for rm, label in self.SAMPLES:
            _, got = predict(model, rm)
            assert got == label

    def test_deterministic_across_seeds(self):
        a = train(self.SAMPLES, seed=0)
        b = train(self.SAMPLES, seed=123)
        assert a == b

    def test_flipped_labels_negate_model(self):
        flipped = [(rm, not label) for rm, label in self.SAMPLES]
        a = train(self.SAMPLES)
        b = train(flipped)
        # symmetric data + symmetric loss: the optimum just changes sign
        assert np.allclose(b.weights, tuple(-w for w in a.weights), rtol=1e-9)
        assert b.bias == pytest.approx(-a.bias, rel=1e-9, abs=1e-12)

    def test_zero_epochs_keeps_zero_init(self):
        model = train(self.SAMPLES, epochs=0)
        assert model.weights == (0.0, 0.0)
        assert model.bias == 0.0

    def test_loss_decreases_with_training(self):
        x = np.array([list(rm.pattern.values) for rm, _ in self.SAMPLES])
        y = np.array([1.0 if lab else 0.0 for _, lab in self.SAMPLES])
        losses = []
        for epochs in (0, 10, 100, 500):
            model = train(self.SAMPLES, epochs=epochs)
            losses.append(loss_and_gradient(
                np.array(model.weights), model.bias, x, y)[0])
        assert losses == sorted(losses, reverse=True)
        assert losses[-1] < losses[0]

    def test_single_class_rejected(self):
        with pytest.raises(InvalidInputError):
            train(labeled([([1.0, 2.0], True), ([3.0, 4.0], True)]))

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            train([])

    def test_mixed_lengths_rejected(self):
        samples = [(motif([1.0, 2.0]), True), (motif([1.0, 2.0, 3.0], 1), False)]
        with pytest.raises(InvalidInputError):
            train(samples)
