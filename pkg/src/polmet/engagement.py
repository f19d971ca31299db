"""Audience-engagement metrics: five natural-log transformed counts.

participation  ln(comments + 1)
propagation    ln(shares + 1)
acceptance     ln(likes + 1)
pos_provocation ln(love + haha + wow + 1)
neg_provocation ln(angry + sad + 1)

The reaction breakdown only exists for posts from 2016-03-01 on, so the two
provocation metrics are ineligible (None) before that date. A missing count
also makes its metric ineligible; missing is never treated as zero.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from polmet.data import Post

METRIC_NAMES = ("participation", "propagation", "acceptance",
                "pos_provocation", "neg_provocation")

REACTIONS_AVAILABLE_FROM = date(2016, 3, 1)


@dataclass(frozen=True)
class EngagementVector:
    participation: float | None
    propagation: float | None
    acceptance: float | None
    pos_provocation: float | None
    neg_provocation: float | None

    def get(self, metric: str) -> float | None:
        if metric not in METRIC_NAMES:
            raise KeyError(metric)
        return getattr(self, metric)


def _log1p_count(count: int | None) -> float | None:
    if count is None:
        return None
    return math.log(count + 1)


def _sum_or_none(*counts: int | None) -> int | None:
    if any(c is None for c in counts):
        return None
    return sum(counts)  # type: ignore[arg-type]


def reactions_eligible(post: Post) -> bool:
    """Eligibility for pos/neg provocation depends only on the UTC date."""
    return post.timestamp.date() >= REACTIONS_AVAILABLE_FROM


def compute_engagement(post: Post) -> EngagementVector:
    eligible = reactions_eligible(post)
    pos = _sum_or_none(post.love, post.haha, post.wow) if eligible else None
    neg = _sum_or_none(post.angry, post.sad) if eligible else None
    return EngagementVector(
        participation=_log1p_count(post.comments),
        propagation=_log1p_count(post.shares),
        acceptance=_log1p_count(post.likes),
        pos_provocation=_log1p_count(pos),
        neg_provocation=_log1p_count(neg),
    )


def write_engagement_table(path: str | Path, posts: list[Post]) -> None:
    """CSV of post_id, the five metrics, and the reaction eligibility flag."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["post_id", *METRIC_NAMES, "reactions_eligible"])
        for post in sorted(posts, key=lambda p: p.post_id):
            vec = compute_engagement(post)
            writer.writerow([
                post.post_id,
                *("" if vec.get(m) is None else repr(vec.get(m))
                  for m in METRIC_NAMES),
                int(reactions_eligible(post)),
            ])
