"""How missing data depress the ICC, and how the correction recovers it.

Builds a complete item-by-participant table with a known variance ratio,
masks an increasing share of cells, and compares three statistics at each
level: the observed ICC, the corrected ICC, and the truth.
"""

import numpy as np

from icctab import SynthSpec, degrade_random, generate, icc_report, zscore

# A 1400-item by 80-participant table following the additive model.
# item_sd=0.4 against unit noise gives a variance ratio q = 0.16,
# i.e. an ICC around 0.93 when averaging over all 80 participants.
raw, truth = generate(SynthSpec(rows=1400, cols=80, seed=7))
table = zscore(raw)

exact = icc_report(table)
print(f"complete table: icc={exact.icc:.4f} (theory {truth.expected_icc:.4f})")
for prob, lower, upper in exact.conf:
    print(f"  {prob:.1%} confidence interval: [{lower:.4f}, {upper:.4f}]")

print("\n   p    observed    corrected")
for p in (0.05, 0.10, 0.20, 0.30):
    report = icc_report(degrade_random(table, p, rng=int(p * 100)))
    print(f"  {p:.2f}   {report.icc:.4f}      {report.icc_cor:.4f}")

print(
    "\nThe observed ICC falls with the missing proportion; the corrected"
    f"\nestimate stays near the complete-table value {exact.icc:.4f}."
)

# The correction can also be applied to the confidence limits directly.
from icctab import corrected_interval

degraded = icc_report(degrade_random(table, 0.2, rng=20))
print("\ncorrected 95% interval at p=0.20:",
      tuple(round(v, 4) for v in corrected_interval(degraded.conf[0], degraded.pmiss)[1:]))
