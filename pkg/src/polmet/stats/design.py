"""Design matrices for the regression routines.

A :class:`DesignMatrix` bundles the predictor matrix, the response vector,
column names, and (optionally) a grouping vector for random intercepts.
Rank checking is done once here so that every downstream fit can report
*which* columns are collinear instead of failing inside a solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg


class RankDeficiencyError(ValueError):
    """Raised when the predictor matrix is rank deficient.

    Carries the names of the columns that the pivoted QR factorization
    identified as linearly dependent on earlier columns.
    """

    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(
            "design matrix is rank deficient; dependent columns: "
            + ", ".join(self.columns)
        )


@dataclass
class DesignMatrix:
    """Fixed-effects design with optional grouping labels.

    Parameters
    ----------
    x : (n, p) float array
        Predictor matrix, intercept column included by the caller.
    y : (n,) float array
        Response vector.
    names : sequence of str
        One name per predictor column.
    groups : (n,) array or None
        Group label per row (any hashable dtype); required for mixed
        models, ignored by plain OLS.
    """

    x: np.ndarray
    y: np.ndarray
    names: list[str]
    groups: np.ndarray | None = None

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.names = list(self.names)
        if self.x.ndim != 2:
            raise ValueError("design matrix must be 2-dimensional")
        n, p = self.x.shape
        if n == 0 or p == 0:
            raise ValueError("design matrix must be non-empty")
        if self.y.shape != (n,):
            raise ValueError(
                f"response has shape {self.y.shape}, expected ({n},)")
        if len(self.names) != p:
            raise ValueError(
                f"{len(self.names)} column names for {p} columns")
        if self.groups is not None:
            self.groups = np.asarray(self.groups)
            if self.groups.shape != (n,):
                raise ValueError(
                    f"groups has shape {self.groups.shape}, expected ({n},)")
        if not np.all(np.isfinite(self.x)):
            raise ValueError("design matrix contains non-finite values")
        if not np.all(np.isfinite(self.y)):
            raise ValueError("response contains non-finite values")

    @property
    def n_obs(self) -> int:
        return self.x.shape[0]

    @property
    def n_params(self) -> int:
        return self.x.shape[1]

    def rank_check(self, rel_tol: float = 1e-10) -> None:
        """Raise :class:`RankDeficiencyError` naming dependent columns.

        Uses column-pivoted QR; a column is flagged when its pivot in R
        falls below ``rel_tol`` times the largest pivot.
        """
        dependent = self.dependent_columns(rel_tol)
        if dependent:
            raise RankDeficiencyError(dependent)

    def dependent_columns(self, rel_tol: float = 1e-10) -> list[str]:
        """Names of columns flagged as linearly dependent (may be empty)."""
        r, perm = scipy.linalg.qr(self.x, mode="r", pivoting=True)
        diag = np.abs(np.diag(r))
        if diag.size == 0 or diag[0] == 0.0:
            return list(self.names)
        keep = diag > rel_tol * diag[0]
        rank = int(np.sum(keep))
        bad = sorted(perm[rank:])
        return [self.names[j] for j in bad]


def column_stack_design(columns: dict[str, np.ndarray],
                        response: np.ndarray,
                        groups: np.ndarray | None = None,
                        add_intercept: bool = True) -> DesignMatrix:
    """Assemble a DesignMatrix from named column vectors.

    Column order follows dict insertion order; an ``intercept`` column of
    ones is prepended unless ``add_intercept`` is False.
    """
    names = list(columns)
    arrays = [np.asarray(columns[name], dtype=float) for name in names]
    n = len(np.asarray(response))
    for name, arr in zip(names, arrays):
        if arr.shape != (n,):
            raise ValueError(f"column {name!r} has shape {arr.shape}, "
                             f"expected ({n},)")
    if add_intercept:
        names = ["intercept"] + names
        arrays = [np.ones(n)] + arrays
    x = np.column_stack(arrays) if arrays else np.empty((n, 0))
    return DesignMatrix(x=x, y=np.asarray(response, dtype=float),
                        names=names, groups=groups)
