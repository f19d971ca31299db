"""Linear mixed model with a single random intercept.

The model is y = X beta + Z u + eps with one random intercept per group,
u ~ N(0, sigma_g^2) and eps ~ N(0, sigma_e^2).  Writing theta for the
variance ratio sigma_g^2 / sigma_e^2, the marginal covariance is
sigma_e^2 * V(theta) with V = I + theta Z Z'.  Because Z encodes a simple
partition, V is block diagonal and

    V_j^{-1} = I - theta / (1 + theta n_j) * J_j
    log|V|   = sum_j log(1 + theta n_j)

so every likelihood evaluation is O(n p) without forming V.  The profiled
REML (or ML) log likelihood is maximized over log(theta) by a coarse grid
followed by bounded Brent refinement, and the interior candidate is
compared against the theta = 0 boundary (where the fit reduces to OLS).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from polmet.stats.ols import _wald_inference

_LOG_THETA_LO = -23.5   # just below log(1e-10)
_LOG_THETA_HI = 23.5    # just above log(1e10)
_GRID_POINTS = 471  # 0.1 spacing in log theta, finer than audit grids


@dataclass
class LmmResult:
    """Fixed-effect table and variance components for a mixed-model fit."""

    names: list[str]
    coef: np.ndarray
    se: np.ndarray
    t_stat: np.ndarray
    p_value: np.ndarray
    sigma_group2: float
    sigma_resid2: float
    theta: float
    loglik: float
    method: str
    converged: bool
    n_obs: int
    n_groups: int
    df_resid: int

    def coefficient(self, name: str) -> dict:
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


class _GroupedData:
    """Rows sorted by group with reduceat offsets for block operations."""

    def __init__(self, x, y, groups):
        codes = np.unique(groups, return_inverse=True)[1]
        order = np.argsort(codes, kind="stable")
        self.x = x[order]
        self.y = y[order]
        sorted_codes = codes[order]
        self.sizes = np.bincount(sorted_codes)
        self.starts = np.concatenate([[0], np.cumsum(self.sizes)[:-1]])
        self.n_groups = len(self.sizes)
        self.n, self.p = x.shape

    def vinv_apply(self, arr, theta):
        """Compute V(theta)^{-1} @ arr exploiting the block structure."""
        if theta == 0.0:
            return arr
        weights = theta / (1.0 + theta * self.sizes)
        sums = np.add.reduceat(arr, self.starts, axis=0)
        if arr.ndim == 1:
            return arr - np.repeat(weights * sums, self.sizes)
        return arr - np.repeat(weights[:, None] * sums, self.sizes, axis=0)

    def logdet_v(self, theta):
        return float(np.sum(np.log1p(theta * self.sizes)))


def _profile_pieces(data: _GroupedData, theta: float):
    """GLS coefficients and quadratic form at a fixed variance ratio."""
    vinv_x = data.vinv_apply(data.x, theta)
    xt_vinv_x = data.x.T @ vinv_x
    xt_vinv_y = vinv_x.T @ data.y
    coef = scipy.linalg.solve(xt_vinv_x, xt_vinv_y, assume_a="pos")
    resid = data.y - data.x @ coef
    quad = float(resid @ data.vinv_apply(resid, theta))
    return coef, quad, xt_vinv_x


def _profile_loglik(data: _GroupedData, theta: float, method: str) -> float:
    """Log likelihood at theta with sigma_e^2 profiled out."""
    _, quad, xt_vinv_x = _profile_pieces(data, theta)
    n, p = data.n, data.p
    logdet_v = data.logdet_v(theta)
    if quad == 0.0:
        # Perfect fit: the profiled residual variance is zero and the
        # likelihood is unbounded.  Reporting +inf lets the boundary
        # tie-break settle on theta = 0.
        return np.inf
    if method == "REML":
        df = n - p
        sigma2 = quad / df
        sign, logdet_xvx = np.linalg.slogdet(xt_vinv_x)
        if sign <= 0:
            return -np.inf
        return -0.5 * (df * (np.log(2.0 * np.pi * sigma2) + 1.0)
                       + logdet_v + logdet_xvx)
    sigma2 = quad / n
    return -0.5 * (n * (np.log(2.0 * np.pi * sigma2) + 1.0) + logdet_v)


def profiled_deviance(design, theta: float, method: str = "REML") -> float:
    """-2 * profiled log likelihood at a given variance ratio.

    Exposed so callers can audit the optimizer against a grid search.
    """
    data = _grouped_from_design(design, method)
    return -2.0 * _profile_loglik(data, float(theta), method)


def _grouped_from_design(design, method: str) -> _GroupedData:
    if design.groups is None:
        raise ValueError("mixed model requires a grouping vector")
    if method not in ("REML", "ML"):
        raise ValueError(f"unknown method {method!r}")
    design.rank_check()
    n, p = design.x.shape
    if n <= p:
        raise ValueError(f"{n} observations cannot identify {p} "
                         "coefficients with residual degrees of freedom")
    data = _GroupedData(design.x, design.y, design.groups)
    if data.n_groups < 2:
        raise ValueError("mixed model requires at least two groups")
    return data


def lmm_fit(design, method: str = "REML") -> LmmResult:
    """Fit the random-intercept model by profiled REML (default) or ML."""
    data = _grouped_from_design(design, method)
    n, p = data.n, data.p

    ll_boundary = _profile_loglik(data, 0.0, method)
    grid = np.linspace(_LOG_THETA_LO, _LOG_THETA_HI, _GRID_POINTS)
    values = np.array([_profile_loglik(data, np.exp(t), method)
                       for t in grid])
    best = int(np.argmax(values))
    if np.isposinf(ll_boundary) or np.isposinf(values[best]):
        # Residuals at machine zero make the profiled likelihood unbounded
        # (the profile is flat to rounding); settle on the boundary without
        # running the optimizer on infinities.
        theta, loglik, converged = 0.0, ll_boundary, True
    else:
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, len(grid) - 1)]
        opt = scipy.optimize.minimize_scalar(
            lambda t: -_profile_loglik(data, np.exp(t), method),
            bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12})
        theta_interior = float(np.exp(opt.x))
        ll_interior = -float(opt.fun)

        # Ties go to the boundary so flat profiles collapse to plain OLS.
        if ll_boundary >= ll_interior - 1e-10:
            theta, loglik = 0.0, ll_boundary
        else:
            theta, loglik = theta_interior, ll_interior

        converged = bool(theta == 0.0 or opt.success)
        if theta > 0.0 and (best == 0 or best == len(grid) - 1):
            converged = False

    coef, quad, xt_vinv_x = _profile_pieces(data, theta)
    df_resid = n - p
    sigma_resid2 = quad / (df_resid if method == "REML" else n)
    sigma_group2 = theta * sigma_resid2

    xvx_inv = scipy.linalg.inv(xt_vinv_x)
    se, t_stat, p_value = _wald_inference(
        coef, sigma_resid2 * np.diag(xvx_inv), df_resid)

    return LmmResult(
        names=list(design.names),
        coef=coef,
        se=se,
        t_stat=t_stat,
        p_value=p_value,
        sigma_group2=float(sigma_group2),
        sigma_resid2=float(sigma_resid2),
        theta=float(theta),
        loglik=float(loglik),
        method=method,
        converged=converged,
        n_obs=n,
        n_groups=data.n_groups,
        df_resid=df_resid,
    )
