"""Metaphor usage across election quarters and parties.

Runs the usage study on a synthetic scored corpus with one planted
effect: Democrat posts in the post-election quarter carry one extra
metaphorical pair. The study buckets posts into four half-open quarters
around election day, fits one-way and two-way (Type II) ANOVAs, compares
all eight party-by-quarter cells with Tukey-Kramer, and fits a mixed
model with politician random intercepts.
"""

import tempfile
from pathlib import Path

from polmet.simulate import make_study_corpus
from polmet.studies import emit_report, run_usage_study

out = Path(tempfile.mkdtemp(prefix="polmet_demo3_"))

# --- a 400-post corpus with the planted Democrat/Q+1 shift ---------------
scored, posts, politicians, truth = make_study_corpus(seed=0,
                                                      posts_per_cell=50)
print(f"corpus: {len(posts)} posts by {len(politicians)} politicians; "
      f"planted cell {truth['planted_party']}/{truth['planted_quarter']}")

report = run_usage_study(scored, posts, politicians)
print(f"{report.n_posts_in_window} posts inside the study window, "
      f"{report.n_out_of_window} outside")

# --- cell means: the planted cell should sit about one pair higher ------
print("\nmean metaphoricity per party/quarter cell:")
for row in report.quarter_party_means:
    print(f"  {row['party']:>10s} {row['quarter']}: mean {row['mean']:.2f} "
          f"(n={row['n']})")

# --- ANOVA: party x quarter with interaction -----------------------------
print("\ntwo-way ANOVA (Type II):")
for row in report.party_quarter_anova.rows:
    stat = "" if row.f_stat is None else \
        f" F={row.f_stat:.1f} p={row.p_value:.2e}"
    print(f"  {row.effect:<16s} df={row.df:<3d} ss={row.ss:9.2f}{stat}")

# --- Tukey: exactly the seven comparisons against the planted cell ------
significant = [c for c in report.tukey.comparisons if c.significant]
print(f"\nTukey-Kramer: {len(significant)} of "
      f"{len(report.tukey.comparisons)} pairwise comparisons significant:")
for c in significant:
    print(f"  {c.group_a} vs {c.group_b}: diff {c.mean_diff:+.2f} "
          f"p={c.p_value:.1e}")

# --- mixed model controlling for who is posting -------------------------
lmm = report.regression_lmm
print("\nmixed model (politician random intercepts):")
for row in lmm.table():
    print(f"  {row['name']:<16s} {row['coef']:+.3f} (se {row['se']:.3f}, "
          f"p {row['p']:.2g})")
print(f"  variance: politician {lmm.sigma_group2:.3f}, "
      f"residual {lmm.sigma_resid2:.3f}")

written = emit_report(out, usage=report)
print(f"\nwrote {', '.join(p.name for p in written)} to {out}")
