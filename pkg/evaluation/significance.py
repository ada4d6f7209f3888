"""
Matched-pairs sentence-segment word error (MAPSSWE) test.
"""

import logging
import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import norm

from exceptions import ContractViolation

logger = logging.getLogger(__name__)


class SignificanceResult(NamedTuple):
    z: float
    significant: bool


def critical_value(alpha: float) -> float:
    """Two-tailed standard normal quantile; 1.96 at alpha = 0.05."""
    return float(norm.ppf(1.0 - alpha / 2.0))


def mapsswe(errors_a: Sequence[int], errors_b: Sequence[int], alpha: float = 0.05) -> SignificanceResult:
    """
    z-test on per-segment error differences d_i = a_i - b_i.

    z = mean(d) / (std(d) / sqrt(N)) with the sample standard deviation. A
    positive z means system A makes more errors than system B.

    Args:
        errors_a: Per-segment error counts of system A.
        errors_b: Per-segment error counts of system B, same segments.
        alpha: Significance level.

    Returns:
        SignificanceResult(z, significant). A zero spread gives z = +-inf
        (significant) for a non-zero mean and z = 0 (not significant) otherwise.

    Raises:
        ContractViolation: On unequal lengths or fewer than two segments.
    """
    a = np.asarray(errors_a, dtype=np.float64)
    b = np.asarray(errors_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ContractViolation(f"MAPSSWE needs matched segments, got {a.shape} and {b.shape}")
    if len(a) < 2:
        raise ContractViolation(f"MAPSSWE needs at least 2 segments, got {len(a)}")

    d = a - b
    mean = float(d.mean())
    std = float(d.std(ddof=1))
    if std == 0.0:
        if mean == 0.0:
            return SignificanceResult(0.0, False)
        return SignificanceResult(math.copysign(math.inf, mean), True)

    z = mean / (std / math.sqrt(len(d)))
    return SignificanceResult(z, abs(z) > critical_value(alpha))
