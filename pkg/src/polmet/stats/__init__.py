"""Statistical machinery: OLS, random-intercept mixed models, ANOVA,
Tukey HSD, and Bonferroni correction."""

from polmet.stats.design import DesignMatrix, RankDeficiencyError
from polmet.stats.ols import RegressionResult, ols_fit
from polmet.stats.lmm import LmmResult, lmm_fit
from polmet.stats.anova import AnovaRow, AnovaTable, anova_one_way, anova_two_way
from polmet.stats.ranges import (PairwiseComparison, TukeyResult,
                                 studentized_range_cdf, studentized_range_sf,
                                 tukey_hsd)
from polmet.stats.adjust import bonferroni, significance_stars

__all__ = [
    "DesignMatrix", "RankDeficiencyError",
    "RegressionResult", "ols_fit",
    "LmmResult", "lmm_fit",
    "AnovaRow", "AnovaTable", "anova_one_way", "anova_two_way",
    "PairwiseComparison", "TukeyResult",
    "studentized_range_cdf", "studentized_range_sf", "tukey_hsd",
    "bonferroni", "significance_stars",
]
