"""Error-bar estimation from a noisy-model/ideal comparison.

The procedure: simulate the experiment with the noise model, compare the
expectation values against the ideal ones, average the absolute deviation
(normalized by the observable's full scale, 2 for Pauli expectations), add
the preparation infidelity, and interpret the total as a symmetric bound
holding with 95% probability under a Gaussian, i.e. sigma = bound / 1.959964.

Bounds combine additively by default; a quadrature mode exists for
sensitivity analysis.  Whether the source percentages were normalized by
full scale or by signal amplitude is not pinned down anywhere, so the
full-scale convention used here is an explicit, documented choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tolerances import GAUSSIAN_95_QUANTILE


def discrepancy(ideal, noisy, full_scale: float = 2.0) -> float:
    """Mean absolute difference between the series, over the full scale."""
    a = np.asarray(ideal, dtype=float).reshape(-1)
    b = np.asarray(noisy, dtype=float).reshape(-1)
    if a.size == 0:
        raise ValueError("discrepancy of empty series")
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    return float(np.mean(np.abs(a - b)) / full_scale)


def error_bar(total_bound: float) -> float:
    """Gaussian sigma whose central 95% mass spans +- total_bound."""
    if total_bound < 0:
        raise ValueError(f"bound must be non-negative, got {total_bound}")
    return total_bound / GAUSSIAN_95_QUANTILE


@dataclass(frozen=True)
class ErrorBudget:
    """Model discrepancy plus preparation infidelity, folded into one sigma."""

    model_discrepancy: float
    preparation_infidelity: float
    combine: str = "additive"

    def __post_init__(self):
        if self.model_discrepancy < 0 or self.preparation_infidelity < 0:
            raise ValueError("budget terms must be non-negative")
        if self.combine not in ("additive", "quadrature"):
            raise ValueError(f"unknown combination mode {self.combine!r}")

    @property
    def total_bound(self) -> float:
        if self.combine == "additive":
            return self.model_discrepancy + self.preparation_infidelity
        return math.hypot(self.model_discrepancy, self.preparation_infidelity)

    @property
    def sigma(self) -> float:
        return error_bar(self.total_bound)


def magnitude_sigma(real_part: float, imag_part: float, sigma: float) -> float:
    """First-order sigma of |x - i y| when x and y carry equal error bars.

    Equal quadrature errors propagate through the magnitude unchanged; at a
    magnitude of zero the linearization is singular and the Rayleigh-like
    worst case sqrt(2) sigma is reported instead.
    """
    if math.hypot(real_part, imag_part) < 1e-12:
        return sigma * math.sqrt(2)
    return sigma


def concurrence_sigma(zyy: float, xyy: float, sigma: float) -> float:
    """Propagated error of |<ZYY> - i <XYY>|."""
    return magnitude_sigma(zyy, xyy, sigma)


def three_tangle_sigma(expectations: dict, sigma: float) -> float:
    """First-order propagated error of the three-tangle magnitude.

    ``expectations`` maps the six enlarged-space words to their values; all
    six are assumed to carry the same sigma.
    """
    from .monotones import THREE_TANGLE_OBSERVABLES, _TANGLE_SIGNS

    brackets = [
        complex(expectations[zw], -expectations[xw])
        for zw, xw in zip(THREE_TANGLE_OBSERVABLES[0::2], THREE_TANGLE_OBSERVABLES[1::2])
    ]
    total = sum(s * q * q for s, q in zip(_TANGLE_SIGNS, brackets))
    mag = abs(total)
    if mag < 1e-12:
        # gradient of |.| is singular at zero; fall back to the worst
        # single-term sensitivity 2|q| sigma
        return 2.0 * max(abs(q) for q in brackets) * sigma * math.sqrt(2)
    var = 0.0
    direction = total.conjugate() / mag
    for s, q in zip(_TANGLE_SIGNS, brackets):
        d_re = (direction * (2 * s * q)).real          # d|S|/d(Re q_k)
        d_im = (direction * (2 * s * q * -1j)).real    # d|S|/d(Im q_k)
        var += (d_re**2 + d_im**2) * sigma**2
    return math.sqrt(var)
