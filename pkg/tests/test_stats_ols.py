"""Least-squares fitting against normal-equation and closed-form oracles."""

import numpy as np
import pytest
from scipy import stats as sps

from polmet.stats.design import RankDeficiencyError, column_stack_design
from polmet.stats.ols import ols_fit


def test_exact_line():
    x = np.arange(6.0)
    design = column_stack_design({"x": x}, response=2.0 * x + 1.0)
    result = ols_fit(design)
    np.testing.assert_allclose(result.coef, [1.0, 2.0], atol=1e-12)
    assert result.rss == pytest.approx(0.0, abs=1e-18)


def test_zero_residual_convention():
    # constant response on an intercept-only design fits exactly in
    # floating point, so the zero-SE branch genuinely triggers
    design = column_stack_design({}, response=np.ones(4))
    result = ols_fit(design)
    row = result.coefficient("intercept")
    assert row["coef"] == 1.0 and row["se"] == 0.0
    assert row["t"] == np.inf and row["p"] == 0.0


def test_zero_coef_with_zero_se():
    design = column_stack_design({"x": np.arange(4.0)},
                                 response=np.zeros(4))
    result = ols_fit(design)
    row = result.coefficient("x")
    assert row["coef"] == 0.0 and row["se"] == 0.0
    assert row["t"] == 0.0 and row["p"] == 1.0


def test_matches_normal_equations_oracle():
    rng = np.random.default_rng(12)
    n = 50
    cols = {"x1": rng.normal(size=n), "x2": rng.uniform(-2, 2, size=n)}
    y = (0.5 + 1.5 * cols["x1"] - 0.75 * cols["x2"]
         + rng.normal(scale=0.3, size=n))
    design = column_stack_design(cols, response=y)
    result = ols_fit(design)

    # independent route: solve the normal equations directly
    x = np.column_stack([np.ones(n), cols["x1"], cols["x2"]])
    xtx = x.T @ x
    beta = np.linalg.solve(xtx, x.T @ y)
    np.testing.assert_allclose(result.coef, beta, atol=1e-8)

    resid = y - x @ beta
    rss = float(resid @ resid)
    assert result.rss == pytest.approx(rss, abs=1e-8)
    df = n - 3
    sigma2 = rss / df
    assert result.sigma2 == pytest.approx(sigma2, rel=1e-10)
    se = np.sqrt(sigma2 * np.diag(np.linalg.inv(xtx)))
    np.testing.assert_allclose(result.se, se, rtol=1e-8)
    t = beta / se
    np.testing.assert_allclose(result.t_stat, t, rtol=1e-8)
    np.testing.assert_allclose(result.p_value, 2 * sps.t.sf(np.abs(t), df),
                               rtol=1e-8)
    assert result.df_resid == df and result.n_obs == n


def test_slope_only_closed_form():
    rng = np.random.default_rng(7)
    x = rng.normal(size=30)
    y = 3.0 * x + rng.normal(scale=0.1, size=30)
    design = column_stack_design({"x": x}, response=y,
                                 add_intercept=False)
    result = ols_fit(design)
    assert result.coef[0] == pytest.approx(float(x @ y) / float(x @ x),
                                           rel=1e-12)


def test_collinear_design_rejected():
    rng = np.random.default_rng(3)
    a = rng.normal(size=10)
    design = column_stack_design(
        {"a": a, "double_a": 2.0 * a}, response=rng.normal(size=10))
    with pytest.raises(RankDeficiencyError) as err:
        ols_fit(design)
    # pivoting decides which twin is reported; either name is correct
    assert set(err.value.columns) & {"a", "double_a"}


def test_underdetermined_rejected():
    # full column rank but no residual degrees of freedom (n == p)
    design = column_stack_design(
        {"a": np.array([1.0, 2.0, 4.0]), "b": np.array([3.0, 5.0, 2.0])},
        response=np.array([1.0, 2.0, 0.0]))
    with pytest.raises(ValueError, match="observations"):
        ols_fit(design)


def test_table_and_lookup():
    rng = np.random.default_rng(5)
    design = column_stack_design({"x": rng.normal(size=12)},
                                 response=rng.normal(size=12))
    result = ols_fit(design)
    table = result.table()
    assert [row["name"] for row in table] == ["intercept", "x"]
    assert table[1] == result.coefficient("x")
    with pytest.raises(ValueError):
        result.coefficient("missing")
