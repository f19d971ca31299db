"""Engagement metrics: log transforms, eligibility window, missing counts."""

import math
from datetime import datetime, timezone

import pytest

from polmet.data import Post
from polmet.engagement import (METRIC_NAMES, compute_engagement,
                               reactions_eligible, write_engagement_table)


def _post(ts, comments=3, shares=1, likes=10, love=2, haha=1, wow=0,
          angry=4, sad=1, post_id="p1"):
    return Post(post_id=post_id, politician_id="pol1", text="text",
                timestamp=ts, comments=comments, shares=shares, likes=likes,
                love=love, haha=haha, wow=wow, angry=angry, sad=sad)


JUNE = datetime(2016, 6, 15, 10, tzinfo=timezone.utc)


def test_log_plus_one_values():
    vec = compute_engagement(_post(JUNE))
    assert vec.participation == pytest.approx(math.log(4))
    assert vec.propagation == pytest.approx(math.log(2))
    assert vec.acceptance == pytest.approx(math.log(11))
    assert vec.pos_provocation == pytest.approx(math.log(2 + 1 + 0 + 1))
    assert vec.neg_provocation == pytest.approx(math.log(4 + 1 + 1))


def test_inverse_transform_recovers_counts():
    vec = compute_engagement(_post(JUNE))
    assert math.exp(vec.participation) - 1 == pytest.approx(3, abs=1e-9)
    assert math.exp(vec.acceptance) - 1 == pytest.approx(10, abs=1e-9)
    assert math.exp(vec.pos_provocation) - 1 == pytest.approx(3, abs=1e-9)
    assert math.exp(vec.neg_provocation) - 1 == pytest.approx(5, abs=1e-9)


def test_zero_counts_map_to_zero():
    vec = compute_engagement(_post(JUNE, comments=0, shares=0, likes=0,
                                   love=0, haha=0, wow=0, angry=0, sad=0))
    assert vec.participation == 0.0
    assert vec.neg_provocation == 0.0


def test_reaction_metrics_ineligible_before_march_2016():
    early = _post(datetime(2016, 2, 15, 23, 59, tzinfo=timezone.utc))
    assert not reactions_eligible(early)
    vec = compute_engagement(early)
    assert vec.pos_provocation is None
    assert vec.neg_provocation is None
    # the three count metrics are unaffected by the date
    assert vec.participation == pytest.approx(math.log(4))

    boundary = _post(datetime(2016, 3, 1, 0, 0, tzinfo=timezone.utc))
    assert reactions_eligible(boundary)
    assert compute_engagement(boundary).pos_provocation is not None

    last_out = _post(datetime(2016, 2, 29, 23, 59, tzinfo=timezone.utc))
    assert not reactions_eligible(last_out)


def test_missing_counts_become_none_not_zero():
    vec = compute_engagement(_post(JUNE, comments=None))
    assert vec.participation is None
    assert vec.propagation is not None
    # one missing component poisons the whole sum
    vec = compute_engagement(_post(JUNE, haha=None))
    assert vec.pos_provocation is None
    assert vec.neg_provocation is not None
    vec = compute_engagement(_post(JUNE, sad=None))
    assert vec.neg_provocation is None


def test_vector_get_and_unknown_metric():
    vec = compute_engagement(_post(JUNE))
    assert vec.get("participation") == vec.participation
    with pytest.raises(KeyError):
        vec.get("virality")


def test_engagement_table(tmp_path):
    posts = [
        _post(JUNE, post_id="b"),
        _post(datetime(2016, 2, 1, tzinfo=timezone.utc), post_id="a"),
        _post(JUNE, comments=None, post_id="c"),
    ]
    path = tmp_path / "engagement.csv"
    write_engagement_table(path, posts)
    lines = path.read_text().splitlines()
    assert lines[0] == "post_id," + ",".join(METRIC_NAMES) + \
        ",reactions_eligible"
    # sorted by post_id; ineligible/missing cells are empty
    assert lines[1].startswith("a,")
    row_a = lines[1].split(",")
    assert row_a[4] == "" and row_a[5] == "" and row_a[6] == "0"
    row_c = lines[3].split(",")
    assert row_c[1] == "" and row_c[6] == "1"
    # repr-precision floats round-trip exactly
    assert float(row_a[1]) == math.log(4)
