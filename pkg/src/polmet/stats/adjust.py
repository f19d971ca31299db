"""Multiple-comparison adjustment and significance labels."""

from __future__ import annotations

import math


def bonferroni(p_values, m: int | None = None) -> list[float]:
    """Bonferroni-adjusted p values: min(1, p * m).

    ``m`` defaults to the number of p values supplied; passing a larger
    ``m`` supports adjusting a subset of a bigger family.
    """
    p_values = list(p_values)
    if m is None:
        m = len(p_values)
    if p_values and m < max(len(p_values), 1):
        raise ValueError(f"family size {m} is smaller than the "
                         f"{len(p_values)} p values supplied")
    for p in p_values:
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"p value {p!r} outside [0, 1]")
    return [min(1.0, p * m) for p in p_values]


def significance_stars(p: float) -> str:
    """Conventional label: *** < 0.001, ** < 0.01, * < 0.05, else empty."""
    if math.isnan(p):
        return ""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
