"""Support probability distributions of an itemset.

The support of an itemset is ``certain_support`` plus a sum of independent
Bernoulli variables, one per transaction where containment is uncertain. Its
distribution is the coefficient vector of prod_i (1 - p_i + p_i x), built one
factor at a time. A textbook Poisson-binomial recurrence is kept alongside as
an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

# rounding noise allowed below zero before a coefficient is clamped
NEG_CLAMP = 1e-15
# |remainder| above this means the divisor was not a factor
DIVISION_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SupportPDF:
    """``coeffs[j]`` is P(support == base + j). If ``truncated_at`` is k,
    only the first k coefficients were kept."""

    coeffs: np.ndarray
    base: int = 0
    truncated_at: int | None = None

    def __len__(self):
        return len(self.coeffs)

    def supports(self) -> range:
        return range(self.base, self.base + len(self.coeffs))

    def prob_at_least(self, min_sup: int) -> float:
        if self.truncated_at is not None and min_sup - self.base > self.truncated_at:
            raise ValueError("distribution was truncated below the requested support")
        j = max(min_sup - self.base, 0)
        return float(1.0 - self.coeffs[:j].sum())

    def mean(self) -> float:
        return float(self.base + np.arange(len(self.coeffs)) @ self.coeffs)


@dataclass(frozen=True)
class FrequentnessQuery:
    min_sup: int
    tau: float = 1.0

    def __post_init__(self):
        if self.min_sup < 1:
            raise ValueError(f"min_sup must be >= 1, got {self.min_sup}")
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")


def _clamp(c: np.ndarray) -> np.ndarray:
    low = c.min(initial=0.0)
    if low < -NEG_CLAMP:
        raise ArithmeticError(f"coefficient {low} is negative beyond rounding noise")
    return np.maximum(c, 0.0)


def _as_array(probs: Sequence[float]) -> np.ndarray:
    return np.ascontiguousarray(probs, dtype=np.float64)


@njit(cache=True)
def _expand(probs):
    n = len(probs)
    c = np.zeros(n + 1)
    c[0] = 1.0
    for i in range(n):
        p = probs[i]
        for j in range(i + 1, 0, -1):
            c[j] = c[j] * (1.0 - p) + c[j - 1] * p
        c[0] *= 1.0 - p
    return c


@njit(cache=True)
def _truncated_frequentness(probs, keep, tau, early_stop):
    # c[j] = P(j uncertain successes so far), j < keep
    c = np.zeros(keep)
    c[0] = 1.0
    # mass pushed past the window: a running lower bound on the answer
    spilled = 0.0
    for i in range(len(probs)):
        p = probs[i]
        top = min(i + 1, keep - 1)
        if i + 1 >= keep:
            spilled += c[keep - 1] * p
        for j in range(top, 0, -1):
            c[j] = c[j] * (1.0 - p) + c[j - 1] * p
        c[0] *= 1.0 - p
        if early_stop and spilled >= tau:
            return spilled, True
    # spilled is now exactly the tail 1 - sum(c), without the cancellation
    return min(spilled, 1.0), False


@njit(cache=True)
def _pbr_tail(probs, need):
    # table[i, j] = P(at least j successes among the first i trials)
    n = len(probs)
    table = np.zeros((n + 1, need + 1))
    table[:, 0] = 1.0
    for i in range(1, n + 1):
        p = probs[i - 1]
        for j in range(1, need + 1):
            table[i, j] = table[i - 1, j - 1] * p + table[i - 1, j] * (1.0 - p)
    return table[n, need]


def _multiply(c: np.ndarray, p: float) -> np.ndarray:
    """c * (1 - p + p x)"""
    out = np.zeros(len(c) + 1)
    out[:-1] = c * (1.0 - p)
    out[1:] += c * p
    return out


def support_pdf(certain_support: int, probs: Sequence[float]) -> SupportPDF:
    """Full expansion of the generating function, O(N^2)."""
    return SupportPDF(_clamp(_expand(_as_array(probs))), certain_support)


def frequentness_probability(certain_support: int, probs: Sequence[float],
                             q: FrequentnessQuery,
                             early_stop: bool = True) -> tuple[float, bool]:
    """P(support >= q.min_sup), keeping only coefficients below min_sup.

    With ``early_stop`` the loop ends as soon as the running lower bound
    reaches ``q.tau``; the returned probability is then that bound and the
    flag is True. Otherwise the value is exact.
    """
    keep = q.min_sup - certain_support
    if keep <= 0:
        return 1.0, False
    if keep > len(probs):
        return 0.0, False
    value, stopped = _truncated_frequentness(_as_array(probs), keep, q.tau, early_stop)
    return float(value), bool(stopped)


def update_pdf(pdf: SupportPDF, old_p: float, new_p: float) -> SupportPDF:
    """Replace the factor (1 - old_p + old_p x) with (1 - new_p + new_p x).

    old_p = 0 inserts a new factor, new_p = 0 only removes one. Division is
    synthetic division run from the low end for old_p <= 1/2 and from the
    high end otherwise, which keeps the error growth factor below one.
    """
    if pdf.truncated_at is not None:
        raise ValueError("cannot update a truncated distribution")
    for p in (old_p, new_p):
        if not 0.0 <= p < 1.0:
            raise ValueError(f"probabilities must lie in [0, 1), got {p}")
    c = np.asarray(pdf.coeffs, dtype=float)
    if old_p > 0.0:
        c = _divide(c, old_p)
    if new_p > 0.0:
        c = _multiply(c, new_p)
    return SupportPDF(_clamp(c), pdf.base)


def _divide(c: np.ndarray, p: float) -> np.ndarray:
    n = len(c) - 1
    if n < 1:
        raise ValueError("distribution has no factor to remove")
    a, b = 1.0 - p, p
    q = np.empty(n)
    if p <= 0.5:
        q[0] = c[0] / a
        for j in range(1, n):
            q[j] = (c[j] - b * q[j - 1]) / a
        rem = c[n] - b * q[n - 1]
    else:
        q[n - 1] = c[n] / b
        for j in range(n - 1, 0, -1):
            q[j - 1] = (c[j] - a * q[j]) / b
        rem = c[0] - a * q[0]
    if abs(rem) > DIVISION_TOL:
        raise ValueError(f"(1 - {p} + {p}x) does not divide the distribution (remainder {rem:.3g})")
    return q


def pbr_frequentness(certain_support: int, probs: Sequence[float], q: FrequentnessQuery) -> float:
    """Frequentness via the Poisson binomial recurrence, no early stop.

    Runs on "at least" probabilities, P[i][j] = P(at least j successes in the
    first i trials) = P[i-1][j-1] p_i + P[i-1][j] (1 - p_i), for
    j <= min_sup - certain_support. Entries of ``probs`` equal to 1 are
    allowed and simply shift the support.
    """
    need = q.min_sup - certain_support
    if need <= 0:
        return 1.0
    n = len(probs)
    if need > n:
        return 0.0
    return float(_pbr_tail(_as_array(probs), need))


def expected_support(certain_support: int, probs: Sequence[float]) -> float:
    return certain_support + float(sum(probs))
