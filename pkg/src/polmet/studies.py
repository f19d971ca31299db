"""The three corpus studies over a scored corpus.

Study 1 (usage): per-post metaphoricity compared across gender, party, and
election-window quarters — box-plot summaries, length-controlled
regressions, one-way and two-way ANOVA, and Tukey HSD over the eight
party-by-quarter groups.

Study 2 (post-level engagement): mixed-effects fits of each engagement
metric on metaphoricity with post length, gender, and party as fixed
controls and a politician random intercept, over a balanced per-politician
sample.

Study 3 (word-level engagement): for each source/target word role, fits of
each engagement metric on metaphorical-vs-literal use of individual
lemmas, with a lemma (or politician) random intercept.

All report emission is deterministic: fixed file names, sorted keys, and
repr-precision floats, so identical inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path

import numpy as np
from scipy import stats as sps

from polmet.data import Politician, Post, VERB_CONSTRUCTIONS
from polmet.engagement import METRIC_NAMES, EngagementVector, compute_engagement
from polmet.scoring import ScoredPost
from polmet.stats import (AnovaTable, DesignMatrix, LmmResult,
                          RankDeficiencyError, RegressionResult, TukeyResult,
                          anova_one_way, anova_two_way, lmm_fit, ols_fit,
                          significance_stars, tukey_hsd)

QUARTER_LABELS = ("Q-3", "Q-2", "Q-1", "Q+1")
PARTIES = ("Democrat", "Republican")
ROLES = ("source-verb", "source-adjective", "target-noun")


@dataclass(frozen=True)
class StudyConfig:
    """Shared analysis configuration.

    The default quarter boundaries split the one-year study window into
    four half-open three-month intervals; the last interval starts the day
    before election day.
    """

    quarter_boundaries: tuple[date, ...] = (
        date(2016, 2, 7), date(2016, 5, 7), date(2016, 8, 7),
        date(2016, 11, 7), date(2017, 2, 7))
    election_date: date = date(2016, 11, 8)
    per_politician: int = 100
    sample_seed: int = 0
    bonferroni_family: int = 5

    def __post_init__(self):
        if len(self.quarter_boundaries) != len(QUARTER_LABELS) + 1:
            raise ValueError("need exactly five quarter boundary dates")
        if any(a >= b for a, b in zip(self.quarter_boundaries,
                                      self.quarter_boundaries[1:])):
            raise ValueError("quarter boundaries must be strictly increasing")
        if self.per_politician < 1:
            raise ValueError("per_politician must be >= 1")
        if self.bonferroni_family < 1:
            raise ValueError("bonferroni_family must be >= 1")


DEFAULT_CONFIG = StudyConfig()


def config_from_json(path: str | Path) -> StudyConfig:
    """Read a study configuration file; absent keys keep their defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    kwargs = {}
    if "quarter_boundaries" in raw:
        kwargs["quarter_boundaries"] = tuple(
            date.fromisoformat(s) for s in raw["quarter_boundaries"])
    if "election_date" in raw:
        kwargs["election_date"] = date.fromisoformat(raw["election_date"])
    for key in ("per_politician", "sample_seed", "bonferroni_family"):
        if key in raw:
            kwargs[key] = int(raw[key])
    return StudyConfig(**kwargs)


def post_date(timestamp: datetime) -> date:
    """UTC calendar date of a timestamp (naive values count as UTC)."""
    if timestamp.tzinfo is not None:
        timestamp = timestamp.astimezone(timezone.utc)
    return timestamp.date()


def assign_quarter(timestamp: datetime | date,
                   config: StudyConfig = DEFAULT_CONFIG) -> str | None:
    """Quarter label for a timestamp, or None when outside the window.

    Intervals are half-open, so a timestamp equal to the final boundary is
    already out of the window.
    """
    when = post_date(timestamp) if isinstance(timestamp, datetime) else timestamp
    bounds = config.quarter_boundaries
    for label, lo, hi in zip(QUARTER_LABELS, bounds, bounds[1:]):
        if lo <= when < hi:
            return label
    return None


@dataclass
class JoinedPost:
    """One scored post joined with its author and engagement metrics."""

    scored: ScoredPost
    post: Post
    politician: Politician
    quarter: str | None
    engagement: EngagementVector

    @property
    def metaphoricity(self) -> int:
        return self.scored.metaphoricity

    @property
    def gender_female(self) -> float:
        return 1.0 if self.politician.gender == "female" else 0.0

    @property
    def party_democrat(self) -> float:
        return 1.0 if self.politician.effective_party == "Democrat" else 0.0


def join_posts(scored: list[ScoredPost], posts: list[Post],
               politicians: dict[str, Politician],
               config: StudyConfig = DEFAULT_CONFIG) -> list[JoinedPost]:
    """Join scored posts with their posts and authors, ordered by post_id."""
    by_id = {p.post_id: p for p in posts}
    joined = []
    missing_posts, missing_pols = [], []
    for sp in sorted(scored, key=lambda s: s.post_id):
        post = by_id.get(sp.post_id)
        if post is None:
            missing_posts.append(sp.post_id)
            continue
        pol = politicians.get(post.politician_id)
        if pol is None:
            missing_pols.append(post.politician_id)
            continue
        joined.append(JoinedPost(
            scored=sp, post=post, politician=pol,
            quarter=assign_quarter(post.timestamp, config),
            engagement=compute_engagement(post)))
    if missing_posts:
        raise ValueError("scored posts missing from the corpus: "
                         f"{sorted(missing_posts)[:10]}")
    if missing_pols:
        raise ValueError("posts by unknown politicians: "
                         f"{sorted(set(missing_pols))[:10]}")
    return joined


def _box_stats(values: np.ndarray) -> dict:
    """Quartiles plus whiskers at the most extreme points within 1.5 IQR."""
    q1, median, q3 = (float(v) for v in np.percentile(values, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    return {
        "n": int(values.size),
        "mean": float(values.mean()),
        "q1": q1,
        "median": median,
        "q3": q3,
        "whisker_low": float(inside.min()) if inside.size else q1,
        "whisker_high": float(inside.max()) if inside.size else q3,
        "n_outliers": int(values.size - inside.size),
    }


def _drop_constant_columns(columns: dict[str, np.ndarray],
                           notes: list[str], context: str) -> dict:
    kept = {}
    for name, arr in columns.items():
        if np.ptp(arr) == 0.0:
            notes.append(f"{context}: column {name!r} is constant; dropped")
        else:
            kept[name] = arr
    return kept


@dataclass
class UsageReport:
    gender_boxplots: dict[str, dict]
    party_boxplots: dict[str, dict]
    regression_ols: RegressionResult | None
    regression_lmm: LmmResult | None
    quarter_party_means: list[dict]
    quarter_anova: AnovaTable | None
    party_quarter_anova: AnovaTable | None
    tukey: TukeyResult | None
    n_posts_in_window: int
    n_out_of_window: int
    notes: list[str] = field(default_factory=list)


def run_usage_study(scored: list[ScoredPost], posts: list[Post],
                    politicians: dict[str, Politician],
                    config: StudyConfig = DEFAULT_CONFIG) -> UsageReport:
    """Metaphor usage across gender, party, and election quarters."""
    joined = join_posts(scored, posts, politicians, config)
    in_window = [j for j in joined if j.quarter is not None]
    notes: list[str] = []
    if not in_window:
        raise ValueError("no posts fall inside the study window")

    meta = np.array([j.metaphoricity for j in in_window], dtype=float)

    gender_box = {}
    for gender in ("male", "female"):
        vals = meta[[j.politician.gender == gender for j in in_window]]
        if vals.size:
            gender_box[gender] = _box_stats(vals)
        else:
            notes.append(f"usage: no posts by {gender} politicians")
    party_box = {}
    for party in PARTIES:
        vals = meta[[j.politician.effective_party == party
                     for j in in_window]]
        if vals.size:
            party_box[party] = _box_stats(vals)
        else:
            notes.append(f"usage: no posts by {party} politicians")

    # Length-controlled gender/party coefficients. The paper does not say
    # whether these came from OLS or a mixed model, so both are fitted.
    columns = {
        "post_length": np.array([j.scored.word_count for j in in_window],
                                dtype=float),
        "gender_female": np.array([j.gender_female for j in in_window]),
        "party_democrat": np.array([j.party_democrat for j in in_window]),
    }
    columns = _drop_constant_columns(columns, notes, "usage regression")
    x = np.column_stack([np.ones(len(in_window)), *columns.values()])
    names = ["intercept", *columns]
    design = DesignMatrix(x=x, y=meta, names=names)
    try:
        regression_ols = ols_fit(design)
    except (RankDeficiencyError, ValueError) as exc:
        regression_ols = None
        notes.append(f"usage OLS failed: {exc}")
    try:
        groups = np.array([j.politician.politician_id for j in in_window])
        regression_lmm = lmm_fit(replace_groups(design, groups))
    except (RankDeficiencyError, ValueError) as exc:
        regression_lmm = None
        notes.append(f"usage LMM failed: {exc}")

    by_quarter: dict[str, list[float]] = {}
    by_cell: dict[tuple[str, str], list[float]] = {}
    for j, m in zip(in_window, meta):
        by_quarter.setdefault(j.quarter, []).append(m)
        cell = (j.politician.effective_party, j.quarter)
        by_cell.setdefault(cell, []).append(m)

    quarter_party_means = []
    for quarter in QUARTER_LABELS:
        for party in PARTIES:
            vals = np.array(by_cell.get((party, quarter), []), dtype=float)
            if vals.size == 0:
                notes.append(f"usage: empty cell {party}/{quarter}")
                continue
            sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
            quarter_party_means.append({
                "quarter": quarter, "party": party, "n": int(vals.size),
                "mean": float(vals.mean()), "sd": sd,
                "se": sd / float(np.sqrt(vals.size)),
            })

    quarter_groups = {q: np.array(by_quarter[q], dtype=float)
                      for q in QUARTER_LABELS if q in by_quarter}
    try:
        quarter_anova = anova_one_way(quarter_groups)
    except ValueError as exc:
        quarter_anova = None
        notes.append(f"usage one-way ANOVA skipped: {exc}")

    parties = [j.politician.effective_party for j in in_window]
    quarters = [j.quarter for j in in_window]
    party_quarter_anova = None
    try:
        party_quarter_anova = anova_two_way(
            meta, parties, quarters, names=("party", "quarter"))
    except ValueError as exc:
        notes.append(f"usage two-way ANOVA degraded: {exc}")
        try:
            party_quarter_anova = anova_two_way(
                meta, parties, quarters, names=("party", "quarter"),
                interaction=False)
        except ValueError as exc2:
            notes.append(f"usage two-way ANOVA skipped: {exc2}")

    tukey_groups = {f"{party}/{quarter}": np.array(vals, dtype=float)
                    for (party, quarter), vals in sorted(by_cell.items())}
    try:
        tukey = tukey_hsd(tukey_groups)
    except ValueError as exc:
        tukey = None
        notes.append(f"usage Tukey HSD skipped: {exc}")

    return UsageReport(
        gender_boxplots=gender_box,
        party_boxplots=party_box,
        regression_ols=regression_ols,
        regression_lmm=regression_lmm,
        quarter_party_means=quarter_party_means,
        quarter_anova=quarter_anova,
        party_quarter_anova=party_quarter_anova,
        tukey=tukey,
        n_posts_in_window=len(in_window),
        n_out_of_window=len(joined) - len(in_window),
        notes=notes,
    )


def replace_groups(design: DesignMatrix, groups: np.ndarray) -> DesignMatrix:
    return DesignMatrix(x=design.x, y=design.y, names=list(design.names),
                        groups=groups)


def balanced_sample(scored: list[ScoredPost], posts: list[Post],
                    per_politician: int = 100,
                    seed: int = 0) -> list[ScoredPost]:
    """Exactly ``per_politician`` posts from each politician who has that
    many scored posts; politicians below the quota are excluded entirely."""
    if per_politician < 1:
        raise ValueError("per_politician must be >= 1")
    author = {p.post_id: p.politician_id for p in posts}
    by_politician: dict[str, list[str]] = {}
    for sp in scored:
        pid = author.get(sp.post_id)
        if pid is None:
            raise ValueError(f"scored post {sp.post_id!r} missing from corpus")
        by_politician.setdefault(pid, []).append(sp.post_id)

    rng = np.random.default_rng(seed)
    chosen: set[str] = set()
    for pid in sorted(by_politician):
        ids = sorted(by_politician[pid])
        if len(ids) < per_politician:
            continue
        picks = rng.choice(len(ids), size=per_politician, replace=False)
        chosen.update(ids[i] for i in picks)
    return sorted((sp for sp in scored if sp.post_id in chosen),
                  key=lambda s: s.post_id)


@dataclass(frozen=True)
class EngagementOptions:
    """Post-level study variants mirroring the paper's follow-up analyses."""

    pre_election_only: bool = False
    post_election_control: bool = False
    party_interaction: bool = False
    election_interaction: bool = False
    pre_election_cutoff: str = "election-day"  # or "quarter-start"

    def __post_init__(self):
        if self.pre_election_cutoff not in ("election-day", "quarter-start"):
            raise ValueError("pre_election_cutoff must be 'election-day' "
                             "or 'quarter-start'")


@dataclass
class MetricFit:
    metric: str
    n_obs: int
    result: LmmResult | None
    coefficients: list[dict] = field(default_factory=list)
    scatter_slope: float | None = None
    scatter_intercept: float | None = None
    note: str | None = None


@dataclass
class EngagementReport:
    fits: dict[str, MetricFit]
    options: EngagementOptions
    n_sample: int
    election_cutoff: date
    scatter_points: dict[str, list[tuple[str, float, float]]]
    notes: list[str] = field(default_factory=list)


def _bonferroni_table(result: LmmResult, family: int) -> list[dict]:
    rows = []
    for entry in result.table():
        p_adj = min(1.0, entry["p"] * family)
        rows.append({**entry, "p_bonferroni": p_adj,
                     "stars": significance_stars(p_adj)})
    return rows


def _election_cutoff(options: EngagementOptions, config: StudyConfig) -> date:
    if options.pre_election_cutoff == "election-day":
        return config.election_date
    return config.quarter_boundaries[3]


def run_post_engagement_study(sample: list[ScoredPost], posts: list[Post],
                              politicians: dict[str, Politician],
                              options: EngagementOptions | None = None,
                              config: StudyConfig = DEFAULT_CONFIG
                              ) -> EngagementReport:
    """Fit each engagement metric on metaphoricity with politician random
    intercepts over a balanced sample.

    Rows whose metric is unavailable (missing counts, or reactions before
    the breakdown exists) are excluded from that metric's fit only. A
    rank-deficient fixed-effect design raises, naming the columns.
    """
    options = options or EngagementOptions()
    joined = join_posts(sample, posts, politicians, config)
    if not joined:
        raise ValueError("empty engagement sample")
    cutoff = _election_cutoff(options, config)
    if options.pre_election_only:
        joined = [j for j in joined if post_date(j.post.timestamp) < cutoff]
        if not joined:
            raise ValueError("no posts before the election cutoff")

    notes: list[str] = []
    fits: dict[str, MetricFit] = {}
    scatter_points: dict[str, list[tuple[str, float, float]]] = {}
    for metric in METRIC_NAMES:
        rows = [j for j in joined if j.engagement.get(metric) is not None]
        if not rows:
            fits[metric] = MetricFit(metric=metric, n_obs=0, result=None,
                                     note="no eligible posts")
            notes.append(f"{metric}: no eligible posts; fit skipped")
            scatter_points[metric] = []
            continue

        y = np.array([j.engagement.get(metric) for j in rows])
        meta = np.array([float(j.metaphoricity) for j in rows])
        columns = {
            "metaphoricity": meta,
            "post_length": np.array([float(j.scored.word_count)
                                     for j in rows]),
            "gender_female": np.array([j.gender_female for j in rows]),
            "party_democrat": np.array([j.party_democrat for j in rows]),
        }
        if options.post_election_control or options.election_interaction:
            post_elec = np.array([0.0 if post_date(j.post.timestamp) < cutoff
                                  else 1.0 for j in rows])
            columns["post_election"] = post_elec
            if options.election_interaction:
                columns["post_election_x_metaphoricity"] = post_elec * meta
                if not options.post_election_control:
                    notes.append(f"{metric}: post_election main effect "
                                 "added to support its interaction")
        if options.party_interaction:
            columns["party_democrat_x_metaphoricity"] = (
                columns["party_democrat"] * meta)

        x = np.column_stack([np.ones(len(rows)), *columns.values()])
        design = DesignMatrix(
            x=x, y=y, names=["intercept", *columns],
            groups=np.array([j.politician.politician_id for j in rows]))
        result = lmm_fit(design)  # rank deficiency propagates, named
        fit = MetricFit(metric=metric, n_obs=len(rows), result=result,
                        coefficients=_bonferroni_table(
                            result, config.bonferroni_family))

        # Plot-ready regression scatter: metric against length-normalized
        # metaphoricity, with a simple least-squares line.
        norm = np.array([j.scored.metaphoricity_norm for j in rows])
        scatter_points[metric] = [
            (j.scored.post_id, float(n), float(v))
            for j, n, v in zip(rows, norm, y)]
        if np.ptp(norm) > 0.0:
            slope, intercept = np.polyfit(norm, y, 1)
            fit.scatter_slope = float(slope)
            fit.scatter_intercept = float(intercept)
        fits[metric] = fit

    return EngagementReport(fits=fits, options=options, n_sample=len(joined),
                            election_cutoff=cutoff,
                            scatter_points=scatter_points, notes=notes)


@dataclass(frozen=True)
class LemmaInstance:
    """One post's use of a lemma in a given role, with post covariates."""

    lemma: str
    role: str
    is_metaphorical: bool
    post_id: str
    politician_id: str
    gender: str
    party: str
    post_length: int
    engagement: EngagementVector


def select_lemmas(scored: list[ScoredPost], posts: list[Post],
                  politicians: dict[str, Politician],
                  min_metaphorical: int = 10, min_literal: int = 10,
                  config: StudyConfig = DEFAULT_CONFIG
                  ) -> tuple[dict, list[LemmaInstance]]:
    """Lemma inventory and instance table for the word-level study.

    Posts with more than one metaphorical pair are excluded first; then a
    lemma-role combination qualifies when it appears metaphorically in at
    least ``min_metaphorical`` remaining posts and literally in at least
    ``min_literal``. A lemma counts once per post and role; the instance is
    metaphorical when any of its pairs in that role crossed the threshold.
    """
    joined = join_posts(scored, posts, politicians, config)
    eligible = [j for j in joined if j.metaphoricity <= 1]

    candidates: list[LemmaInstance] = []
    for j in eligible:
        flags: dict[tuple[str, str], bool] = {}
        for sp in j.scored.pairs:
            gov_role = ("source-verb"
                        if sp.pair.construction in VERB_CONSTRUCTIONS
                        else "source-adjective")
            for lemma, role in ((sp.pair.governor, gov_role),
                                (sp.pair.noun, "target-noun")):
                key = (lemma, role)
                flags[key] = flags.get(key, False) or sp.is_metaphor
        for (lemma, role), is_met in sorted(flags.items()):
            candidates.append(LemmaInstance(
                lemma=lemma, role=role, is_metaphorical=is_met,
                post_id=j.scored.post_id,
                politician_id=j.politician.politician_id,
                gender=j.politician.gender,
                party=j.politician.effective_party,
                post_length=j.scored.word_count,
                engagement=j.engagement))

    counts: dict[tuple[str, str], list[int]] = {}
    for inst in candidates:
        met_lit = counts.setdefault((inst.role, inst.lemma), [0, 0])
        met_lit[0 if inst.is_metaphorical else 1] += 1

    inventory: dict[str, dict[str, dict]] = {}
    for (role, lemma), (n_met, n_lit) in sorted(counts.items()):
        if n_met >= min_metaphorical and n_lit >= min_literal:
            inventory.setdefault(role, {})[lemma] = {
                "metaphorical": n_met, "literal": n_lit}

    kept = [inst for inst in candidates
            if inst.lemma in inventory.get(inst.role, {})]
    kept.sort(key=lambda i: (i.role, i.lemma, i.post_id))
    return inventory, kept


@dataclass
class RoleResult:
    role: str
    n_instances: int
    n_lemmas: int
    fits: dict[str, MetricFit]
    point_plots: dict[str, list[dict]]


@dataclass
class WordLevelReport:
    roles: dict[str, RoleResult]
    group_by: str
    notes: list[str] = field(default_factory=list)


def _point_plot_rows(instances: list[LemmaInstance], metric: str,
                     top_n: int) -> list[dict]:
    """Per-lemma metaphorical-vs-literal means with 95% confidence
    intervals, for the lemmas with the largest absolute difference."""
    by_lemma: dict[str, dict[bool, list[float]]] = {}
    for inst in instances:
        value = inst.engagement.get(metric)
        if value is None:
            continue
        by_lemma.setdefault(inst.lemma, {True: [], False: []})[
            inst.is_metaphorical].append(value)

    rows = []
    for lemma in sorted(by_lemma):
        met, lit = by_lemma[lemma][True], by_lemma[lemma][False]
        if len(met) < 2 or len(lit) < 2:
            continue
        entry = {"lemma": lemma}
        for side, values in (("metaphorical", met), ("literal", lit)):
            arr = np.array(values)
            half = (sps.t.ppf(0.975, arr.size - 1)
                    * arr.std(ddof=1) / np.sqrt(arr.size))
            entry[f"n_{side}"] = int(arr.size)
            entry[f"mean_{side}"] = float(arr.mean())
            entry[f"ci_low_{side}"] = float(arr.mean() - half)
            entry[f"ci_high_{side}"] = float(arr.mean() + half)
        entry["mean_difference"] = (entry["mean_metaphorical"]
                                    - entry["mean_literal"])
        rows.append(entry)
    rows.sort(key=lambda r: (-abs(r["mean_difference"]), r["lemma"]))
    return rows[:top_n]


def run_word_level_study(instances: list[LemmaInstance],
                         group_by: str = "lemma",
                         top_n: int = 10,
                         config: StudyConfig = DEFAULT_CONFIG
                         ) -> WordLevelReport:
    """Per-role mixed-effects fits of engagement on metaphorical use.

    Degenerate designs are reported in the role's notes instead of
    aborting the study: a constant is_metaphorical column is a rank error
    for that metric only, and constant control columns are dropped.
    """
    if group_by not in ("lemma", "politician"):
        raise ValueError("group_by must be 'lemma' or 'politician'")
    notes: list[str] = []
    roles: dict[str, RoleResult] = {}
    for role in ROLES:
        role_instances = [i for i in instances if i.role == role]
        if not role_instances:
            notes.append(f"{role}: no qualifying lemmas; skipped")
            continue
        lemmas = sorted({i.lemma for i in role_instances})
        fits: dict[str, MetricFit] = {}
        point_plots: dict[str, list[dict]] = {}
        for metric in METRIC_NAMES:
            rows = [i for i in role_instances
                    if i.engagement.get(metric) is not None]
            point_plots[metric] = _point_plot_rows(rows, metric, top_n)
            if not rows:
                fits[metric] = MetricFit(metric=metric, n_obs=0, result=None,
                                         note="no eligible instances")
                notes.append(f"{role}/{metric}: no eligible instances")
                continue

            flags = np.array([1.0 if i.is_metaphorical else 0.0
                              for i in rows])
            if np.ptp(flags) == 0.0:
                msg = ("rank error: is_metaphorical is constant; "
                       "coefficient undefined")
                fits[metric] = MetricFit(metric=metric, n_obs=len(rows),
                                         result=None, note=msg)
                notes.append(f"{role}/{metric}: {msg}")
                continue
            columns = {
                "post_length": np.array([float(i.post_length)
                                         for i in rows]),
                "gender_female": np.array(
                    [1.0 if i.gender == "female" else 0.0 for i in rows]),
                "party_democrat": np.array(
                    [1.0 if i.party == "Democrat" else 0.0 for i in rows]),
            }
            columns = _drop_constant_columns(columns, notes,
                                             f"{role}/{metric}")
            columns = {"is_metaphorical": flags, **columns}
            x = np.column_stack([np.ones(len(rows)), *columns.values()])
            groups = np.array([i.lemma if group_by == "lemma"
                               else i.politician_id for i in rows])
            design = DesignMatrix(x=x,
                                  y=np.array([i.engagement.get(metric)
                                              for i in rows]),
                                  names=["intercept", *columns],
                                  groups=groups)
            try:
                result = lmm_fit(design)
            except (RankDeficiencyError, ValueError) as exc:
                fits[metric] = MetricFit(metric=metric, n_obs=len(rows),
                                         result=None, note=str(exc))
                notes.append(f"{role}/{metric}: fit failed: {exc}")
                continue
            fits[metric] = MetricFit(
                metric=metric, n_obs=len(rows), result=result,
                coefficients=_bonferroni_table(result,
                                               config.bonferroni_family))
        roles[role] = RoleResult(role=role, n_instances=len(role_instances),
                                 n_lemmas=len(lemmas), fits=fits,
                                 point_plots=point_plots)
    return WordLevelReport(roles=roles, group_by=group_by, notes=notes)


# ---------------------------------------------------------------------------
# Report serialization


def _regression_dict(res: RegressionResult | None) -> dict | None:
    if res is None:
        return None
    return {"coefficients": res.table(), "sigma2": float(res.sigma2),
            "df_resid": res.df_resid, "n_obs": res.n_obs,
            "rss": float(res.rss)}


def _lmm_dict(res: LmmResult | None) -> dict | None:
    if res is None:
        return None
    return {"coefficients": res.table(),
            "sigma_group2": res.sigma_group2,
            "sigma_resid2": res.sigma_resid2,
            "theta": res.theta, "loglik": res.loglik, "method": res.method,
            "converged": res.converged, "n_obs": res.n_obs,
            "n_groups": res.n_groups, "df_resid": res.df_resid}


def _anova_dict(table: AnovaTable | None) -> dict | None:
    if table is None:
        return None
    return {"rows": [{"effect": r.effect, "df": int(r.df), "ss": float(r.ss),
                      "ms": float(r.ms),
                      "f": None if r.f_stat is None else float(r.f_stat),
                      "p": None if r.p_value is None else float(r.p_value)}
                     for r in table.rows]}


def _tukey_dict(res: TukeyResult | None) -> dict | None:
    if res is None:
        return None
    return {
        "ms_within": res.ms_within, "df_within": res.df_within,
        "n_groups": res.n_groups,
        "group_means": {k: float(v) for k, v in sorted(res.group_means.items())},
        "group_sizes": {k: int(v) for k, v in sorted(res.group_sizes.items())},
        "comparisons": [{
            "group_a": c.group_a, "group_b": c.group_b,
            "mean_diff": float(c.mean_diff), "q": float(c.q_stat),
            "p": float(c.p_value), "significant": c.significant,
        } for c in res.comparisons],
    }


def _metric_fit_dict(fit: MetricFit) -> dict:
    return {"n_obs": fit.n_obs, "note": fit.note,
            "coefficients": fit.coefficients,
            "scatter_slope": fit.scatter_slope,
            "scatter_intercept": fit.scatter_intercept,
            "fit": _lmm_dict(fit.result)}


def _json_safe(obj):
    """Replace non-finite floats with strings so the output stays valid
    strict JSON (degenerate fits can produce infinite t statistics)."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_json_safe(payload), fh, sort_keys=True, indent=2,
                  allow_nan=False)
        fh.write("\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def emit_report(destination: str | Path,
                usage: UsageReport | None = None,
                engagement: EngagementReport | None = None,
                wordlevel: WordLevelReport | None = None,
                summary: dict | None = None) -> list[Path]:
    """Write the study tables under a fixed, deterministic file layout."""
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit_json(name: str, payload) -> None:
        path = dest / name
        _write_json(path, payload)
        written.append(path)

    def emit_csv(name: str, header: list[str], rows: list[list]) -> None:
        path = dest / name
        _write_csv(path, header, rows)
        written.append(path)

    if usage is not None:
        box_rows = []
        for dimension, box in (("gender", usage.gender_boxplots),
                               ("party", usage.party_boxplots)):
            for group in sorted(box):
                s = box[group]
                box_rows.append([dimension, group, s["n"], s["mean"],
                                 s["q1"], s["median"], s["q3"],
                                 s["whisker_low"], s["whisker_high"],
                                 s["n_outliers"]])
        emit_csv("usage_boxplots.csv",
                 ["dimension", "group", "n", "mean", "q1", "median", "q3",
                  "whisker_low", "whisker_high", "n_outliers"], box_rows)
        emit_csv("quarter_trends.csv",
                 ["quarter", "party", "n", "mean", "sd", "se"],
                 [[r["quarter"], r["party"], r["n"], r["mean"], r["sd"],
                   r["se"]] for r in usage.quarter_party_means])
        emit_json("anova.json", {
            "one_way_quarters": _anova_dict(usage.quarter_anova),
            "two_way_party_quarter": _anova_dict(usage.party_quarter_anova),
            "tukey_party_quarter": _tukey_dict(usage.tukey),
            "n_posts_in_window": usage.n_posts_in_window,
            "n_out_of_window": usage.n_out_of_window,
            "notes": usage.notes,
        })
        emit_json("usage_regression.json", {
            "ols": _regression_dict(usage.regression_ols),
            "lmm": _lmm_dict(usage.regression_lmm),
            "notes": usage.notes,
        })

    if engagement is not None:
        emit_json("engagement_lmm.json", {
            "options": {
                "pre_election_only": engagement.options.pre_election_only,
                "post_election_control":
                    engagement.options.post_election_control,
                "party_interaction": engagement.options.party_interaction,
                "election_interaction":
                    engagement.options.election_interaction,
                "pre_election_cutoff":
                    engagement.options.pre_election_cutoff,
                "election_cutoff_date":
                    engagement.election_cutoff.isoformat(),
            },
            "n_sample": engagement.n_sample,
            "metrics": {m: _metric_fit_dict(f)
                        for m, f in engagement.fits.items()},
            "notes": engagement.notes,
        })
        coef_rows = []
        for metric in METRIC_NAMES:
            fit = engagement.fits.get(metric)
            if fit is None:
                continue
            for c in fit.coefficients:
                coef_rows.append([metric, c["name"], c["coef"], c["se"],
                                  c["t"], c["p"], c["p_bonferroni"],
                                  c["stars"]])
        emit_csv("engagement_lmm.csv",
                 ["metric", "coefficient", "estimate", "se", "t", "p",
                  "p_bonferroni", "stars"], coef_rows)
        scatter_rows = []
        for metric in METRIC_NAMES:
            for post_id, x, y in engagement.scatter_points.get(metric, []):
                scatter_rows.append([metric, post_id, x, y])
        emit_csv("engagement_scatter.csv",
                 ["metric", "post_id", "metaphoricity_norm", "value"],
                 scatter_rows)

    if wordlevel is not None:
        emit_json("wordlevel_lmm.json", {
            "group_by": wordlevel.group_by,
            "roles": {role: {
                "n_instances": rr.n_instances,
                "n_lemmas": rr.n_lemmas,
                "metrics": {m: _metric_fit_dict(f)
                            for m, f in rr.fits.items()},
            } for role, rr in wordlevel.roles.items()},
            "notes": wordlevel.notes,
        })
        coef_rows = []
        plot_rows = []
        for role in ROLES:
            rr = wordlevel.roles.get(role)
            if rr is None:
                continue
            for metric in METRIC_NAMES:
                fit = rr.fits.get(metric)
                if fit is not None:
                    for c in fit.coefficients:
                        coef_rows.append([role, metric, c["name"], c["coef"],
                                          c["se"], c["t"], c["p"],
                                          c["p_bonferroni"], c["stars"]])
                for rank, entry in enumerate(rr.point_plots.get(metric, []),
                                             start=1):
                    plot_rows.append([
                        role, metric, rank, entry["lemma"],
                        entry["n_metaphorical"], entry["mean_metaphorical"],
                        entry["ci_low_metaphorical"],
                        entry["ci_high_metaphorical"],
                        entry["n_literal"], entry["mean_literal"],
                        entry["ci_low_literal"], entry["ci_high_literal"],
                        entry["mean_difference"]])
        emit_csv("wordlevel_lmm.csv",
                 ["role", "metric", "coefficient", "estimate", "se", "t",
                  "p", "p_bonferroni", "stars"], coef_rows)
        emit_csv("wordlevel_pointplot.csv",
                 ["role", "metric", "rank", "lemma",
                  "n_metaphorical", "mean_metaphorical",
                  "ci_low_metaphorical", "ci_high_metaphorical",
                  "n_literal", "mean_literal", "ci_low_literal",
                  "ci_high_literal", "mean_difference"], plot_rows)

    if summary is not None:
        emit_json("corpus_summary.json", summary)

    return written
