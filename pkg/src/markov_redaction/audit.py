"""Exact leakage verification by exhaustive enumeration of the output space.

The leakage of a mechanism about the private record is

    log  sup  Pr[Y = y | X_p = x] / Pr[Y = y | X_p = 1 - x]

over supported outputs y and both values x; the mechanism is eps-private
when this is at most eps.  This module evaluates the supremum exactly: it
enumerates every output string over the per-position feasible symbols
(a value x is feasible at t when r_t(x) < 1, the redaction symbol when
some value redacts with positive probability) and computes each output's
conditional probability by two directional passes away from p — given
X_p, the left and right chain segments are independent, and backward
transition probabilities equal forward ones under stationarity.

An output supported under exactly one conditioning certifies infinite
leakage: it occurs with positive marginal probability yet pins the
private value.  Ratio comparisons happen in log space (differences of
log-probabilities), and the reported witness re-evaluates to the reported
leakage through :func:`output_probability`.

The audit is this package's ground-truth oracle, so it refuses (rather
than approximates) chains longer than the enumeration cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import MarkovModel
from .errors import EnumerationCapError
from .influence import SET_ENUMERATION_CAP, _set_influence_rows
from .mechanisms import RedactionMechanism

__all__ = [
    "LeakageReport",
    "REDACTED",
    "output_probability",
    "exact_leakage",
    "leakage_lower_bound_check",
]

#: Symbol used for a redacted record in output strings.
REDACTED = "⊥"

_SYMBOLS = ("0", "1", REDACTED)

#: Default largest chain the exhaustive audit will enumerate (3^cap outputs).
DEFAULT_AUDIT_CAP = 12


@dataclass(frozen=True)
class LeakageReport:
    """Result of an exact audit.

    ``leakage`` is in nats and may be ``math.inf``; ``witness`` is an output
    string over {0, 1, ⊥} attaining it; ``outputs_enumerated`` counts the
    feasible output strings inspected.  ``per_side`` holds the leakages of
    the mechanism restricted to [1, p] and [p, n] (in that order) — the two
    compose additively to bound the total.
    """

    leakage: float
    witness: str
    outputs_enumerated: int
    per_side: tuple[float, float] | None = None


def _check_pair(model: MarkovModel, mechanism: RedactionMechanism) -> None:
    if model.n != mechanism.n:
        raise ValueError(
            f"model covers {model.n} records but the mechanism table has {mechanism.n} rows"
        )


def _weights(mechanism: RedactionMechanism) -> np.ndarray:
    """W[t-1, symbol, state] = Pr[Y_t = symbol | X_t = state]."""
    r = mechanism.redact_prob
    w = np.zeros((mechanism.n, 3, 2))
    w[:, 0, 0] = 1.0 - r[:, 0]
    w[:, 1, 1] = 1.0 - r[:, 1]
    w[:, 2, :] = r
    return w


def _feasible_symbols(mechanism: RedactionMechanism) -> list[list[int]]:
    """Symbol codes with nonzero emission probability at each position."""
    feasible = []
    for row in mechanism.redact_prob:
        symbols = [x for x in (0, 1) if row[x] < 1.0]
        if row.max() > 0.0:
            symbols.append(2)
        feasible.append(symbols)
    return feasible


def _parse_output(y, n: int) -> list[int]:
    if len(y) != n:
        raise ValueError(f"output must have length {n}, got {len(y)}")
    codes = []
    for symbol in y:
        try:
            codes.append(_SYMBOLS.index(symbol))
        except ValueError:
            raise ValueError(
                f"output symbols must be one of {_SYMBOLS}, got {symbol!r}"
            ) from None
    return codes


def output_probability(
    model: MarkovModel, mechanism: RedactionMechanism, y, x_p: int
) -> float:
    """log Pr[Y = y | X_p = x_p], exactly; -inf for impossible outputs.

    ``y`` is a string (or sequence) over {0, 1, ⊥}.  Cost is linear in n:
    one pass leftward and one rightward from p, folding the local emission
    factor of each position into the chain transition.
    """
    _check_pair(model, mechanism)
    if x_p not in (0, 1):
        raise ValueError(f"x_p must be 0 or 1, got {x_p!r}")
    codes = _parse_output(y, model.n)
    weights = _weights(mechanism)
    p = mechanism.p
    transition = model.transition_matrix()

    log_prob = 0.0
    emit_p = weights[p - 1, codes[p - 1], x_p]
    if emit_p <= 0.0:
        return -math.inf
    log_prob += math.log(emit_p)

    for positions in (range(p, model.n), range(p - 2, -1, -1)):
        state = np.zeros(2)
        state[x_p] = 1.0
        for t in positions:
            state = (state @ transition) * weights[t, codes[t], :]
            total = state.sum()
            if total <= 0.0:
                return -math.inf
            if total < 1e-280:  # rescale long chains away from the underflow floor
                state /= total
                log_prob += math.log(total)
        remaining = state.sum()
        if remaining <= 0.0:
            return -math.inf
        log_prob += math.log(remaining)
    return log_prob


def _chain_output_probs(
    model: MarkovModel,
    weights: np.ndarray,
    feasible: list[list[int]],
    positions: list[int],
) -> np.ndarray:
    """Probabilities of every feasible partial output along ``positions``.

    Positions are walked outward from p.  Returns shape (2, K) indexed by
    the conditioning value of X_p and the mixed-radix combination index
    (first walked position most significant).
    """
    transition = model.transition_matrix()
    state = np.zeros((2, 1, 2))
    state[0, 0, 0] = 1.0
    state[1, 0, 1] = 1.0
    for t in positions:
        stepped = state @ transition
        emit = weights[t - 1][feasible[t - 1], :]  # (symbols, 2)
        state = (stepped[:, :, None, :] * emit[None, None, :, :]).reshape(2, -1, 2)
    return state.sum(axis=2)


def _lexicographic_min(rows: np.ndarray) -> np.ndarray:
    """Lexicographically smallest row of an integer matrix."""
    keep = np.arange(rows.shape[0])
    for j in range(rows.shape[1]):
        col = rows[keep, j]
        keep = keep[col == col.min()]
        if keep.size == 1:
            break
    return rows[keep[0]]


def _decode_outputs(
    indices: np.ndarray,
    feasible: list[list[int]],
    left_positions: list[int],
    right_positions: list[int],
    p: int,
    n: int,
) -> np.ndarray:
    """Symbol codes (m, n) for flat combination indices of the full product."""
    m = indices.shape[0]
    codes = np.empty((m, n), dtype=np.int8)
    rest = indices
    for t in reversed(right_positions):
        options = np.array(feasible[t - 1], dtype=np.int8)
        rest, digit = np.divmod(rest, len(options))
        codes[:, t - 1] = options[digit]
    options = np.array(feasible[p - 1], dtype=np.int8)
    rest, digit = np.divmod(rest, len(options))
    codes[:, p - 1] = options[digit]
    for t in reversed(left_positions):
        options = np.array(feasible[t - 1], dtype=np.int8)
        rest, digit = np.divmod(rest, len(options))
        codes[:, t - 1] = options[digit]
    return codes


def exact_leakage(
    model: MarkovModel,
    mechanism: RedactionMechanism,
    cap: int = DEFAULT_AUDIT_CAP,
    per_side: bool = True,
) -> LeakageReport:
    """Exact leakage of a mechanism by exhausting its output distribution.

    Enumerates every output over the per-position feasible symbols, skips
    those unsupported under both conditionings, and maximizes the absolute
    log-probability difference; any output supported on one side only
    yields infinite leakage.  Ties break to the lexicographically smallest
    witness (symbol order 0 < 1 < ⊥).  With ``per_side`` the report also
    carries the leakages of the mechanism restricted to [1, p] and [p, n].
    """
    _check_pair(model, mechanism)
    if model.n > cap:
        raise EnumerationCapError(
            f"exact audit would enumerate 3^{model.n} outputs; the cap is n <= {cap}"
        )
    weights = _weights(mechanism)
    feasible = _feasible_symbols(mechanism)
    p = mechanism.p
    left_positions = list(range(p - 1, 0, -1))
    right_positions = list(range(p + 1, model.n + 1))
    left = _chain_output_probs(model, weights, feasible, left_positions)
    right = _chain_output_probs(model, weights, feasible, right_positions)
    emit_p = weights[p - 1][feasible[p - 1], :].T  # (2, symbols at p)
    probs = (
        left[:, :, None, None] * emit_p[:, None, :, None] * right[:, None, None, :]
    ).reshape(2, -1)
    count = probs.shape[1]

    positive_0 = probs[0] > 0.0
    positive_1 = probs[1] > 0.0
    one_sided = positive_0 ^ positive_1
    if one_sided.any():
        candidates = np.flatnonzero(one_sided)
    else:
        both = positive_0 & positive_1
        with np.errstate(divide="ignore"):
            gaps = np.abs(np.log(probs[0, both]) - np.log(probs[1, both]))
        supported_indices = np.flatnonzero(both)
        candidates = supported_indices[gaps == gaps.max()]
    witness_codes = _lexicographic_min(
        _decode_outputs(candidates, feasible, left_positions, right_positions, p, model.n)
    )
    witness = "".join(_SYMBOLS[code] for code in witness_codes)

    log_0 = output_probability(model, mechanism, witness, 0)
    log_1 = output_probability(model, mechanism, witness, 1)
    leakage = math.inf if math.isinf(log_0) or math.isinf(log_1) else abs(log_0 - log_1)

    sides = None
    if per_side:
        left_model = MarkovModel(n=p, alpha=model.alpha, beta=model.beta)
        right_model = MarkovModel(n=model.n - p + 1, alpha=model.alpha, beta=model.beta)
        sides = (
            exact_leakage(left_model, mechanism.restrict(1, p, p), cap, False).leakage,
            exact_leakage(
                right_model, mechanism.restrict(p, model.n, p), cap, False
            ).leakage,
        )
    return LeakageReport(
        leakage=leakage, witness=witness, outputs_enumerated=count, per_side=sides
    )


def leakage_lower_bound_check(
    model: MarkovModel,
    mechanism: RedactionMechanism,
    released,
    slack: float = 1e-9,
) -> bool:
    """Check the influence lower bounds on the audited leakage.

    For any local redaction mechanism, every releasable joint realization
    of ``released`` lower-bounds the leakage by its pointwise set
    influence; when the mechanism is data-independent on ``released``
    (r_t(0) = r_t(1) < 1 there), the max influence of the whole set is a
    lower bound too.  Returns True when the exact audit respects both
    bounds within ``slack``.
    """
    indices = sorted(set(released))
    table = mechanism.redact_prob
    for t in indices:
        if not (1 <= t <= mechanism.n):
            raise ValueError(f"released index {t} outside [1, {mechanism.n}]")
        if t == mechanism.p:
            raise ValueError("the private record can never be released")
        if table[t - 1].min() >= 1.0:
            raise ValueError(f"record {t} is always redacted, never released")
    if len(indices) > SET_ENUMERATION_CAP:
        raise EnumerationCapError(
            f"lower-bound check over {len(indices)} records needs "
            f"2^{len(indices)} realizations; the cap is {SET_ENUMERATION_CAP}"
        )
    exact = exact_leakage(model, mechanism, per_side=False).leakage
    if not indices:
        return exact + slack >= 0.0
    bits, influence = _set_influence_rows(model, mechanism.p, indices)
    releasable = np.ones(bits.shape[0], dtype=bool)
    for j, t in enumerate(indices):
        allowed = [x for x in (0, 1) if table[t - 1, x] < 1.0]
        releasable &= np.isin(bits[:, j], allowed)
    pointwise_bound = float(influence[releasable].max())
    if exact + slack < pointwise_bound:
        return False
    data_independent = all(
        table[t - 1, 0] == table[t - 1, 1] and table[t - 1, 0] < 1.0 for t in indices
    )
    if data_independent and exact + slack < float(influence.max()):
        return False
    return True
