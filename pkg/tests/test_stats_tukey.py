"""Studentized range distribution and Tukey HSD comparisons."""

import numpy as np
import pytest
from scipy import stats as sps

from polmet.stats.ranges import (studentized_range_cdf, studentized_range_sf,
                                 tukey_hsd)


@pytest.mark.parametrize("q,k,df", [
    (3.77, 3, 12),
    (2.0, 2, 5),
    (4.5, 5, 30),
    (1.0, 4, 8),
    (6.0, 3, 3),
    (3.0, 8, 60),
])
def test_cdf_matches_scipy(q, k, df):
    assert studentized_range_cdf(q, k, df) == pytest.approx(
        sps.studentized_range.cdf(q, k, df), abs=1e-10)


def test_classic_critical_point():
    # 3.77 is the tabulated 5% point for k = 3 groups, 12 error df
    assert studentized_range_sf(3.77, 3, 12) == pytest.approx(0.05, abs=2e-3)


def test_sf_decreases_in_q():
    values = [studentized_range_sf(q, 3, 10) for q in (1.0, 2.0, 3.0, 4.0)]
    assert values == sorted(values, reverse=True)
    assert all(0.0 <= v <= 1.0 for v in values)


def test_cdf_edges_and_validation():
    assert studentized_range_cdf(0.0, 3, 10) == 0.0
    assert studentized_range_cdf(-2.0, 3, 10) == 0.0
    assert studentized_range_cdf(np.inf, 3, 10) == 1.0
    assert studentized_range_cdf(-np.inf, 3, 10) == 0.0
    with pytest.raises(ValueError, match="k >= 2"):
        studentized_range_cdf(2.0, 1, 10)
    with pytest.raises(ValueError, match="df >= 1"):
        studentized_range_cdf(2.0, 3, 0.5)


def test_tukey_kramer_matches_scipy_on_unequal_groups():
    rng = np.random.default_rng(17)
    samples = {"a": rng.normal(0.0, 1.0, 12),
               "b": rng.normal(0.5, 1.0, 8),
               "c": rng.normal(1.0, 1.0, 15)}
    result = tukey_hsd(samples)
    ref = sps.tukey_hsd(*samples.values())
    labels = list(samples)
    for i in range(3):
        for j in range(i + 1, 3):
            comp = result.comparison(labels[i], labels[j])
            assert comp.p_value == pytest.approx(ref.pvalue[i, j],
                                                 abs=1e-10)
    assert result.n_groups == 3
    assert result.df_within == 12 + 8 + 15 - 3
    assert result.group_sizes == {"a": 12, "b": 8, "c": 15}
    ab = result.comparison("a", "b")
    assert ab.mean_diff == pytest.approx(
        samples["a"].mean() - samples["b"].mean())
    # lookup is unordered
    assert result.comparison("b", "a") is ab
    with pytest.raises(KeyError):
        result.comparison("a", "zzz")


def test_tukey_never_less_conservative_than_pairwise_t():
    rng = np.random.default_rng(17)
    a = rng.normal(0.0, 1.0, 12)
    b = rng.normal(0.5, 1.0, 8)
    c = rng.normal(1.0, 1.0, 15)
    result = tukey_hsd({"a": a, "b": b, "c": c})
    _, p_t = sps.ttest_ind(a, b, equal_var=True)
    assert result.comparison("a", "b").p_value >= p_t


def test_zero_difference_takes_precedence_over_zero_variance():
    result = tukey_hsd({"a": np.ones(3), "b": np.ones(3)})
    (comp,) = result.comparisons
    assert comp.q_stat == 0.0 and comp.p_value == 1.0
    assert not comp.significant
    assert result.ms_within == 0.0


def test_zero_variance_with_separation():
    result = tukey_hsd({"a": np.zeros(3), "b": np.ones(3)})
    (comp,) = result.comparisons
    assert comp.q_stat == np.inf and comp.p_value == 0.0
    assert comp.significant


def test_significance_respects_alpha():
    rng = np.random.default_rng(17)
    groups = {"a": rng.normal(0.0, 1.0, 12), "c": rng.normal(1.0, 1.0, 15)}
    loose = tukey_hsd(groups, alpha=0.05)
    strict = tukey_hsd(groups, alpha=1e-6)
    assert loose.comparisons[0].significant
    assert not strict.comparisons[0].significant


def test_tukey_validation():
    with pytest.raises(ValueError, match="two groups"):
        tukey_hsd({"a": np.arange(5.0)})
    with pytest.raises(ValueError, match="non-empty"):
        tukey_hsd({"a": np.arange(5.0), "b": np.array([])})
    with pytest.raises(ValueError, match="degrees of freedom"):
        tukey_hsd({"a": np.array([1.0]), "b": np.array([2.0])})
    with pytest.raises(ValueError, match="alpha"):
        tukey_hsd({"a": np.arange(3.0), "b": np.arange(3.0)}, alpha=1.5)
