"""Studentized range distribution and Tukey HSD pairwise comparisons.

The distribution function is evaluated directly from its double-integral
definition.  For the range of k standard normals divided by an
independent chi estimate s with df degrees of freedom,

    P(Q <= q) = integral_0^inf f_df(s) * P_k(q * s) ds

where P_k(w) = k * integral phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz is the
probability that the range of k standard normals is below w, and f_df is
the density of sqrt(chi^2_df / df).  Both integrals are handled by
adaptive quadrature over truncated domains; the discarded tail mass is
far below the quadrature tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_INV_SQRT_2 = 1.0 / math.sqrt(2.0)


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) * _INV_SQRT_2PI


def _Phi(z: float) -> float:
    return 0.5 * math.erfc(-z * _INV_SQRT_2)


def _normal_range_cdf(w: float, k: int) -> float:
    """P(range of k iid standard normals <= w)."""
    if w <= 0.0:
        return 0.0

    km1 = k - 1

    def integrand(z):
        return k * _phi(z) * (_Phi(z) - _Phi(z - w)) ** km1

    # The integrand decays like the normal density outside [-10, w + 10].
    value, _ = scipy.integrate.quad(integrand, -10.0, w + 10.0,
                                    limit=200, epsabs=1e-11, epsrel=1e-11)
    return min(max(value, 0.0), 1.0)


def _chi_scale_logpdf(s: float, df: float) -> float:
    """Log density of sqrt(chi^2_df / df) at s > 0."""
    half = df / 2.0
    return (math.log(2.0) + half * math.log(half) - math.lgamma(half)
            + (df - 1.0) * math.log(s) - half * s * s)


def studentized_range_cdf(q: float, k: int, df: float) -> float:
    """P(Q <= q) for the studentized range with k groups and df error df."""
    if k < 2:
        raise ValueError("studentized range requires k >= 2")
    if df < 1:
        raise ValueError("studentized range requires df >= 1")
    if not np.isfinite(q):
        return 1.0 if q > 0 else 0.0
    if q <= 0.0:
        return 0.0

    def integrand(s):
        if s <= 0.0:
            return 0.0
        return math.exp(_chi_scale_logpdf(s, df)) * _normal_range_cdf(q * s, k)

    # The scale density concentrates near s = 1 with spread ~ 1/sqrt(2 df).
    upper = 1.0 + 12.0 / math.sqrt(df)
    value, _ = scipy.integrate.quad(integrand, 0.0, upper, points=[1.0],
                                    limit=200, epsabs=1e-10, epsrel=1e-10)
    return min(max(value, 0.0), 1.0)


def studentized_range_sf(q: float, k: int, df: float) -> float:
    """P(Q > q); the Tukey HSD p value for an observed range statistic."""
    return 1.0 - studentized_range_cdf(q, k, df)


@dataclass
class PairwiseComparison:
    group_a: str
    group_b: str
    mean_diff: float
    q_stat: float
    p_value: float
    significant: bool


@dataclass
class TukeyResult:
    comparisons: list[PairwiseComparison]
    ms_within: float
    df_within: int
    n_groups: int
    group_means: dict
    group_sizes: dict

    def comparison(self, group_a: str, group_b: str) -> PairwiseComparison:
        for comp in self.comparisons:
            if {comp.group_a, comp.group_b} == {group_a, group_b}:
                return comp
        raise KeyError((group_a, group_b))


def tukey_hsd(groups: dict[str, np.ndarray],
              alpha: float = 0.05) -> TukeyResult:
    """All pairwise Tukey HSD comparisons over a one-way layout.

    Unequal group sizes use the Tukey-Kramer standard error
    sqrt(ms_within / 2 * (1/n_i + 1/n_j)).  An exactly zero mean
    difference is reported as q = 0, p = 1 regardless of the error
    variance; a nonzero difference with zero error variance is q = inf,
    p = 0.
    """
    if len(groups) < 2:
        raise ValueError("Tukey HSD requires at least two groups")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    arrays = {label: np.asarray(vals, dtype=float)
              for label, vals in groups.items()}
    for label, vals in arrays.items():
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError(f"group {label!r} must be a non-empty vector")

    k = len(arrays)
    sizes = {label: int(vals.size) for label, vals in arrays.items()}
    means = {label: float(vals.mean()) for label, vals in arrays.items()}
    n_total = sum(sizes.values())
    df_within = n_total - k
    if df_within <= 0:
        raise ValueError("no residual degrees of freedom "
                         "(every group has a single observation)")
    ss_within = sum(float(np.sum((vals - means[label]) ** 2))
                    for label, vals in arrays.items())
    ms_within = ss_within / df_within

    comparisons = []
    for label_a, label_b in itertools.combinations(arrays, 2):
        diff = means[label_a] - means[label_b]
        if diff == 0.0:
            q_stat, p_value = 0.0, 1.0
        elif ms_within == 0.0:
            q_stat, p_value = np.inf, 0.0
        else:
            stderr = np.sqrt(ms_within / 2.0
                             * (1.0 / sizes[label_a] + 1.0 / sizes[label_b]))
            q_stat = abs(diff) / stderr
            p_value = studentized_range_sf(q_stat, k, df_within)
        comparisons.append(PairwiseComparison(
            group_a=label_a,
            group_b=label_b,
            mean_diff=diff,
            q_stat=float(q_stat),
            p_value=float(p_value),
            significant=bool(p_value < alpha),
        ))

    return TukeyResult(
        comparisons=comparisons,
        ms_within=float(ms_within),
        df_within=df_within,
        n_groups=k,
        group_means=means,
        group_sizes=sizes,
    )
