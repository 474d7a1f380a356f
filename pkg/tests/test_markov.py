import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_redaction import (
    MarkovModel,
    multi_step,
    sample_path,
    stationary_marginal,
)

from oracles import MODEL_GRID


def test_stationary_marginal_values():
    assert stationary_marginal(MarkovModel(2, 0.25, 0.5)) == (2 / 3, 1 / 3)
    assert stationary_marginal(MarkovModel(5, 0.5, 0.5)) == (0.5, 0.5)
    pi0, pi1 = stationary_marginal(MarkovModel(3, 0.01, 0.8))
    assert pi0 == pytest.approx(0.8 / 0.81, abs=1e-15)
    assert pi1 == pytest.approx(0.01 / 0.81, abs=1e-15)
    assert pi0 + pi1 == pytest.approx(1.0, abs=1e-15)


def test_model_validation():
    with pytest.raises(ValueError, match="alpha <= beta"):
        MarkovModel(3, 0.6, 0.5)
    with pytest.raises(ValueError, match="positive integer"):
        MarkovModel(0, 0.25, 0.5)
    with pytest.raises(ValueError, match="strictly inside"):
        MarkovModel(3, 0.0, 0.5)
    with pytest.raises(ValueError, match="strictly inside"):
        MarkovModel(3, 0.25, 1.0)
    # independent records are a legal corner
    MarkovModel(3, 0.3, 0.7)


def test_multi_step_single_step_returns_parameters():
    step = multi_step(MarkovModel(4, 0.25, 0.5), 1)
    assert (step.alpha_delta, step.beta_delta) == (0.25, 0.5)


def test_multi_step_two_steps_hand_squared():
    # squaring P = [[.75, .25], [.5, .5]] by hand gives alpha_2 = 0.3125, beta_2 = 0.625
    step = multi_step(MarkovModel(4, 0.25, 0.5), 2)
    assert step.alpha_delta == pytest.approx(0.3125, abs=1e-15)
    assert step.beta_delta == pytest.approx(0.625, abs=1e-15)
    by_hand = np.array([[0.6875, 0.3125], [0.625, 0.375]])
    assert np.allclose(step.matrix(), by_hand, atol=1e-15)


def test_multi_step_decay_identity():
    step = multi_step(MarkovModel(4, 0.01, 0.8), 3)
    assert 1.0 - step.alpha_delta - step.beta_delta == pytest.approx(0.19**3, abs=1e-12)


def test_multi_step_rejects_zero():
    with pytest.raises(ValueError, match="positive integer"):
        multi_step(MarkovModel(4, 0.25, 0.5), 0)


@pytest.mark.parametrize("alpha,beta", MODEL_GRID)
def test_multi_step_matches_matrix_power(alpha, beta):
    model = MarkovModel(2, alpha, beta)
    transition = model.transition_matrix()
    for delta in range(1, 21):
        explicit = np.linalg.matrix_power(transition, delta)
        step = multi_step(model, delta)
        assert np.abs(step.matrix() - explicit).max() < 1e-12


@pytest.mark.parametrize("alpha,beta", MODEL_GRID)
def test_multi_step_invariants(alpha, beta):
    model = MarkovModel(2, alpha, beta)
    pi0, pi1 = stationary_marginal(model)
    for delta in range(1, 21):
        step = multi_step(model, delta)
        assert step.alpha_delta / step.beta_delta == pytest.approx(alpha / beta, abs=1e-12)
        assert 1.0 - step.alpha_delta - step.beta_delta == pytest.approx(
            (1.0 - alpha - beta) ** delta, abs=1e-12
        )
        # detailed balance: forward and backward transitions agree under stationarity
        assert pi0 * step.alpha_delta == pytest.approx(pi1 * step.beta_delta, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    alpha=st.floats(0.01, 0.98),
    spread=st.floats(0.0, 0.98),
    delta=st.integers(1, 20),
)
def test_multi_step_matches_matrix_power_hypothesis(alpha, spread, delta):
    beta = min(0.99, alpha + spread * (0.99 - alpha))
    model = MarkovModel(1, alpha, beta)
    explicit = np.linalg.matrix_power(model.transition_matrix(), delta)
    assert np.abs(multi_step(model, delta).matrix() - explicit).max() < 1e-12


def test_sample_path_deterministic_and_valid():
    model = MarkovModel(200, 0.25, 0.5)
    first = sample_path(model, seed=7)
    second = sample_path(model, seed=7)
    assert np.array_equal(first.values, second.values)
    assert first.seed == 7
    assert len(first) == 200
    assert set(np.unique(first.values)) <= {0, 1}
    assert not np.array_equal(first.values, sample_path(model, seed=8).values)


def test_sample_path_matches_stationary_and_transitions():
    n = 100_000
    model = MarkovModel(n, 0.25, 0.5)
    values = sample_path(model, seed=123).values
    pi0, _ = stationary_marginal(model)

    # 4-sigma binomial bands, all narrower than the 0.01 coarse bound
    share0 = np.mean(values == 0)
    sigma = math.sqrt(pi0 * (1 - pi0) / n)
    assert abs(share0 - pi0) < max(4 * sigma, 1e-9)
    assert abs(share0 - 2 / 3) < 0.01

    from0 = values[1:][values[:-1] == 0]
    rate01 = np.mean(from0 == 1)
    sigma01 = math.sqrt(0.25 * 0.75 / from0.size)
    assert abs(rate01 - 0.25) < max(4 * sigma01, 1e-9)
    assert abs(rate01 - 0.25) < 0.01

    from1 = values[1:][values[:-1] == 1]
    rate10 = np.mean(from1 == 0)
    sigma10 = math.sqrt(0.5 * 0.5 / from1.size)
    assert abs(rate10 - 0.5) < max(4 * sigma10, 1e-9)
