"""Scoring predictors against item means under missing data.

Demonstrates the three goodness-of-fit statistics: the plain r2 of a
predictor with the item means, the r2/ICC ratio (which is stable across
participant group sizes), and the corrected r2 (which recovers the
complete-table r2 when cells are missing).
"""

from icctab import (
    SynthSpec,
    fit_predictors,
    generate,
    r2cor_bias_demo,
    r2_icc_curve,
    zscore,
)
from icctab.rand import as_generator

raw, truth = generate(SynthSpec(rows=1400, cols=80, item_sd=0.3, seed=37))
table = zscore(raw)

# A predictor correlated with the hidden item effects, plus a useless one.
gen = as_generator(38)
good = truth.item_effects + gen.normal(0, 0.25, size=1400)
noise = gen.normal(0, 1, size=1400)

fit = fit_predictors(table, [[g, n] for g, n in zip(good, noise)])
print("predictor scores on the complete table:")
print(f"  r2      = {fit.r2[0]:.4f} (informative)  {fit.r2[1]:.4f} (noise)")
print(f"  r2/ICC  = {fit.r2_on_icc[0]:.4f}           {fit.r2_on_icc[1]:.4f}")

print("\nr2/ICC ratio across participant group sizes (200 resamples each):")
print("   g    icc      r2     ratio")
for point in r2_icc_curve(table, good, group_sizes=(2, 4, 8, 16), resamples=200, rng=39):
    print(f"  {point.g:3d}  {point.icc:.4f}  {point.r2:.4f}  {point.ratio:.4f}")
print("the ratio stays flat: it estimates the predictor's squared correlation")
print("with the hidden item effects, independent of the group size.")

print("\ncorrected r2 under degradation (10 replications per level):")
print("   p    observed   corrected   exact")
for point in r2cor_bias_demo(table, good, (0.1, 0.3, 0.6), replications=10, rng=40):
    print(f"  {point.p:.1f}   {point.r2_observed:.4f}     {point.r2_cor:.4f}     {point.r2_exact:.4f}")
print("the observed r2 decays with missing data; the corrected statistic")
print("tracks the complete-table value (with growing variance).")
