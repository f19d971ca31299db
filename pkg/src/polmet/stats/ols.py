"""Ordinary least squares with Wald t inference."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import stats as sps


@dataclass
class RegressionResult:
    """Coefficient table plus fit summaries for a least-squares fit."""

    names: list[str]
    coef: np.ndarray
    se: np.ndarray
    t_stat: np.ndarray
    p_value: np.ndarray
    sigma2: float
    df_resid: int
    n_obs: int
    rss: float

    def coefficient(self, name: str) -> dict:
        """Return coef/se/t/p for one named predictor."""
        idx = self.names.index(name)
        return {
            "name": name,
            "coef": float(self.coef[idx]),
            "se": float(self.se[idx]),
            "t": float(self.t_stat[idx]),
            "p": float(self.p_value[idx]),
        }

    def table(self) -> list[dict]:
        return [self.coefficient(name) for name in self.names]


def _wald_inference(coef, diag_cov, df_resid):
    """Standard errors, t statistics, and two-sided p values.

    A zero standard error with a nonzero coefficient yields t = +/-inf and
    p = 0; a zero coefficient with zero standard error yields t = 0, p = 1.
    """
    se = np.sqrt(np.maximum(diag_cov, 0.0))
    t_stat = np.empty_like(coef)
    for i in range(len(coef)):
        if se[i] > 0.0:
            t_stat[i] = coef[i] / se[i]
        elif coef[i] == 0.0:
            t_stat[i] = 0.0
        else:
            t_stat[i] = np.inf if coef[i] > 0 else -np.inf
    if df_resid > 0:
        p_value = 2.0 * sps.t.sf(np.abs(t_stat), df_resid)
    else:
        p_value = np.full_like(coef, np.nan)
    return se, t_stat, p_value


def ols_fit(design) -> RegressionResult:
    """Fit y = X beta + eps by least squares.

    Raises :class:`~polmet.stats.design.RankDeficiencyError` when the
    design is collinear and ValueError when there are no residual degrees
    of freedom.
    """
    design.rank_check()
    x, y = design.x, design.y
    n, p = x.shape
    if n <= p:
        raise ValueError(f"{n} observations cannot identify {p} "
                         "coefficients with residual degrees of freedom")

    q, r = scipy.linalg.qr(x, mode="economic")
    coef = scipy.linalg.solve_triangular(r, q.T @ y)
    resid = y - x @ coef
    rss = float(resid @ resid)
    df_resid = n - p
    sigma2 = rss / df_resid

    # (X'X)^-1 = R^-1 R^-T from the economy QR factor.
    r_inv = scipy.linalg.solve_triangular(r, np.eye(p))
    xtx_inv = r_inv @ r_inv.T
    se, t_stat, p_value = _wald_inference(coef, sigma2 * np.diag(xtx_inv),
                                          df_resid)

    return RegressionResult(
        names=list(design.names),
        coef=coef,
        se=se,
        t_stat=t_stat,
        p_value=p_value,
        sigma2=sigma2,
        df_resid=df_resid,
        n_obs=n,
        rss=rss,
    )
