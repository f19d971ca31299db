"""One-way and two-way (Type II) analysis of variance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps


@dataclass
class AnovaRow:
    effect: str
    df: int
    ss: float
    ms: float
    f_stat: float | None
    p_value: float | None


@dataclass
class AnovaTable:
    rows: list[AnovaRow]

    def row(self, effect: str) -> AnovaRow:
        for row in self.rows:
            if row.effect == effect:
                return row
        raise KeyError(effect)

    @property
    def residual(self) -> AnovaRow:
        return self.row("residual")


def _f_test(ss, df, ms_resid, df_resid):
    """F statistic and p value with the zero-residual-variance convention:
    no signal and no noise gives F = 0, p = 1; signal with no noise gives
    F = inf, p = 0."""
    ms = ss / df
    if ms_resid > 0.0:
        f_stat = ms / ms_resid
        p_value = float(sps.f.sf(f_stat, df, df_resid))
    elif ss <= 0.0:
        f_stat, p_value = 0.0, 1.0
    else:
        f_stat, p_value = np.inf, 0.0
    return ms, float(f_stat), p_value


def anova_one_way(groups: dict[str, np.ndarray]) -> AnovaTable:
    """Single-factor ANOVA from a mapping of group label to values."""
    if len(groups) < 2:
        raise ValueError("one-way ANOVA requires at least two groups")
    arrays = {label: np.asarray(vals, dtype=float)
              for label, vals in groups.items()}
    for label, vals in arrays.items():
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError(f"group {label!r} must be a non-empty vector")

    all_values = np.concatenate(list(arrays.values()))
    n_total = all_values.size
    k = len(arrays)
    df_between = k - 1
    df_within = n_total - k
    if df_within <= 0:
        raise ValueError("no residual degrees of freedom "
                         "(every group has a single observation)")

    grand_mean = all_values.mean()
    ss_between = 0.0
    ss_within = 0.0
    for vals in arrays.values():
        mean = vals.mean()
        ss_between += vals.size * (mean - grand_mean) ** 2
        ss_within += float(np.sum((vals - mean) ** 2))

    ms_within = ss_within / df_within
    ms_between, f_stat, p_value = _f_test(ss_between, df_between,
                                          ms_within, df_within)
    return AnovaTable(rows=[
        AnovaRow("between", df_between, float(ss_between), ms_between,
                 f_stat, p_value),
        AnovaRow("residual", df_within, float(ss_within), ms_within,
                 None, None),
    ])


def _dummies(labels):
    """Treatment-coded dummy block (first level dropped), plus level list."""
    levels = sorted(set(labels))
    cols = [np.asarray([1.0 if lab == level else 0.0 for lab in labels])
            for level in levels[1:]]
    block = np.column_stack(cols) if cols else np.empty((len(labels), 0))
    return block, levels


def _rss_and_rank(y, blocks):
    """Residual sum of squares and rank for a design built from blocks."""
    x = np.column_stack(blocks)
    beta, _, rank, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    return float(resid @ resid), int(rank)


def anova_two_way(response, factor_a, factor_b,
                  names: tuple[str, str] = ("factor_a", "factor_b"),
                  interaction: bool = True) -> AnovaTable:
    """Two-factor ANOVA with Type II sums of squares.

    Each main effect is the residual-sum-of-squares drop from adding that
    factor to a model already containing the other factor (and no
    interaction), so the decomposition is order-invariant on unbalanced
    data.  With ``interaction=True`` every factor-level cell must be
    occupied; empty cells are reported by name.
    """
    y = np.asarray(response, dtype=float)
    labels_a = list(factor_a)
    labels_b = list(factor_b)
    if not (len(y) == len(labels_a) == len(labels_b)):
        raise ValueError("response and factor vectors must share a length")

    block_a, levels_a = _dummies(labels_a)
    block_b, levels_b = _dummies(labels_b)
    if len(levels_a) < 2 or len(levels_b) < 2:
        raise ValueError("each factor needs at least two observed levels")

    if interaction:
        occupied = set(zip(labels_a, labels_b))
        empty = [f"{a}*{b}" for a in levels_a for b in levels_b
                 if (a, b) not in occupied]
        if empty:
            raise ValueError(
                "interaction requested but these factor cells are empty: "
                + ", ".join(empty))

    intercept = np.ones(len(y))
    rss_b_only, rank_b_only = _rss_and_rank(y, [intercept, block_b])
    rss_a_only, rank_a_only = _rss_and_rank(y, [intercept, block_a])
    rss_additive, rank_additive = _rss_and_rank(
        y, [intercept, block_a, block_b])

    if interaction:
        cross = [block_a[:, i] * block_b[:, j]
                 for i in range(block_a.shape[1])
                 for j in range(block_b.shape[1])]
        block_ab = (np.column_stack(cross) if cross
                    else np.empty((len(y), 0)))
        rss_full, rank_full = _rss_and_rank(
            y, [intercept, block_a, block_b, block_ab])
    else:
        rss_full, rank_full = rss_additive, rank_additive

    df_resid = len(y) - rank_full
    if df_resid <= 0:
        raise ValueError("no residual degrees of freedom; the requested "
                         "model saturates the data")
    ms_resid = rss_full / df_resid

    rows = []
    ss_a = max(rss_b_only - rss_additive, 0.0)
    df_a = rank_additive - rank_b_only
    ms_a, f_a, p_a = _f_test(ss_a, df_a, ms_resid, df_resid)
    rows.append(AnovaRow(names[0], df_a, ss_a, ms_a, f_a, p_a))

    ss_b = max(rss_a_only - rss_additive, 0.0)
    df_b = rank_additive - rank_a_only
    ms_b, f_b, p_b = _f_test(ss_b, df_b, ms_resid, df_resid)
    rows.append(AnovaRow(names[1], df_b, ss_b, ms_b, f_b, p_b))

    if interaction:
        ss_ab = max(rss_additive - rss_full, 0.0)
        df_ab = rank_full - rank_additive
        ms_ab, f_ab, p_ab = _f_test(ss_ab, df_ab, ms_resid, df_resid)
        rows.append(AnovaRow(f"{names[0]}:{names[1]}", df_ab, ss_ab,
                             ms_ab, f_ab, p_ab))

    rows.append(AnovaRow("residual", df_resid, rss_full, ms_resid,
                         None, None))
    return AnovaTable(rows=rows)
