"""Stationary two-state Markov chain: model, multi-step transitions, sampling.

Records are binary, X_t in {0, 1}.  The chain X_1 - X_2 - ... - X_n has a
stationary one-step transition matrix

    P = [[1 - alpha, alpha],
         [beta,      1 - beta]]

and is started in its stationary distribution, so every record has marginal
Pr[X_t = 0] = beta / (alpha + beta).  Under stationarity the backward
transition probabilities equal the forward ones, which the rest of the
package relies on when it walks the chain away from a conditioning record
in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MarkovModel",
    "MultiStepTransition",
    "Path",
    "stationary_marginal",
    "multi_step",
    "sample_path",
]


@dataclass(frozen=True)
class MarkovModel:
    """Chain length and transition parameters, with ``0 < alpha <= beta < 1``.

    Parameters
    ----------
    n : int
        Number of records, n >= 1.
    alpha : float
        Transition probability 0 -> 1.
    beta : float
        Transition probability 1 -> 0.

    ``alpha > beta`` is rejected rather than silently relabelled: swapping
    the roles of the two values would also swap which record value carries
    the larger pointwise influence, so callers must relabel their data
    explicitly (replace every record x by 1 - x and swap alpha with beta).
    ``alpha + beta == 1`` (independent records) is accepted.
    """

    n: int
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"chain length n must be a positive integer, got {self.n!r}")
        if not (0.0 < self.alpha < 1.0) or not (0.0 < self.beta < 1.0):
            raise ValueError(
                f"transition probabilities must lie strictly inside (0, 1), "
                f"got alpha={self.alpha!r}, beta={self.beta!r}"
            )
        if self.alpha > self.beta:
            raise ValueError(
                f"alpha <= beta is required (got alpha={self.alpha!r} > beta={self.beta!r}); "
                "relabel the record values (x -> 1-x, swapping alpha and beta) instead of "
                "expecting an automatic swap, which would corrupt region semantics"
            )

    def transition_matrix(self) -> np.ndarray:
        """One-step transition matrix as a 2x2 array, rows indexed by the source state."""
        return np.array(
            [[1.0 - self.alpha, self.alpha], [self.beta, 1.0 - self.beta]], dtype=float
        )


@dataclass(frozen=True)
class MultiStepTransition:
    """Parameters of the delta-step transition matrix P^delta.

    P^delta keeps the two-parameter form [[1 - a_d, a_d], [b_d, 1 - b_d]]
    with a_d / b_d = alpha / beta and 1 - a_d - b_d = (1 - alpha - beta)^delta.
    """

    delta: int
    alpha_delta: float
    beta_delta: float

    def matrix(self) -> np.ndarray:
        """P^delta as a 2x2 array."""
        return np.array(
            [
                [1.0 - self.alpha_delta, self.alpha_delta],
                [self.beta_delta, 1.0 - self.beta_delta],
            ],
            dtype=float,
        )


@dataclass(frozen=True, eq=False)
class Path:
    """One sampled realization of the chain, together with the seed that produced it."""

    values: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.int8)
        if values.ndim != 1:
            raise ValueError("path values must form a one-dimensional sequence")
        if values.size and not np.isin(values, (0, 1)).all():
            raise ValueError("path values must all be 0 or 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def stationary_marginal(model: MarkovModel) -> tuple[float, float]:
    """Marginal record distribution ``(Pr[X = 0], Pr[X = 1])``.

    Equals ``(beta, alpha) / (alpha + beta)``; the components sum to 1.
    """
    total = model.alpha + model.beta
    return model.beta / total, model.alpha / total


def multi_step(model: MarkovModel, delta: int) -> MultiStepTransition:
    """Closed-form parameters of P^delta for ``delta >= 1``.

    a_d = alpha/(alpha+beta) * (1 - (1-alpha-beta)^delta) and symmetrically
    for b_d.  ``delta = 0`` is rejected: the identity matrix is trivial and
    does not satisfy the a_d / b_d = alpha / beta invariant.
    """
    if not isinstance(delta, int) or isinstance(delta, bool) or delta < 1:
        raise ValueError(f"delta must be a positive integer, got {delta!r}")
    decay = 1.0 - (1.0 - model.alpha - model.beta) ** delta
    total = model.alpha + model.beta
    return MultiStepTransition(
        delta=delta,
        alpha_delta=model.alpha / total * decay,
        beta_delta=model.beta / total * decay,
    )


def sample_path(model: MarkovModel, seed: int) -> Path:
    """Sample one realization: X_1 from the stationary marginal, then step with P.

    Deterministic given the seed, which is recorded on the returned path.
    """
    rng = np.random.default_rng(seed)
    _, pi1 = stationary_marginal(model)
    uniforms = rng.random(model.n)
    values = np.empty(model.n, dtype=np.int8)
    values[0] = uniforms[0] < pi1
    alpha, beta = model.alpha, model.beta
    for t in range(1, model.n):
        if values[t - 1] == 0:
            values[t] = uniforms[t] < alpha
        else:
            values[t] = uniforms[t] >= beta
    return Path(values=values, seed=seed)
