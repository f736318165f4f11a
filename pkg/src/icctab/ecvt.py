"""Expected Correlation Validity Test (ECVT).

Checks whether a complete table is compatible with the additive two-way
model by permutation resampling: for each group size ``g``, two disjoint
random participant groups are drawn repeatedly, the Pearson correlation
between their item-mean vectors is recorded, and the mean observed
correlation is compared with the value the table's own variance ratio
predicts, ``q*g / (q*g + 1)``.  Standardized deviations are summed over
group sizes into a chi-square statistic with one degree of freedom per
group size.

The test requires a complete table — resampling cannot form full item-mean
vectors when cells are missing — so incomplete tables must be imputed
first (see :mod:`icctab.impute`).
"""

import math
from dataclasses import dataclass

import numpy as np

from .anova import anova, expected_icc
from .errors import PreconditionError
from .rand import as_generator
from .special import chi2_upper_tail
from .table import DataTable

__all__ = ["EcvtReport", "ecvt", "default_group_sizes", "chi2_upper_tail"]


@dataclass(frozen=True)
class EcvtReport:
    """Observed vs. predicted split-group correlations and the verdict.

    ``compatible`` is True when the chi-square p-value exceeds ``alpha``.
    Group sizes whose correlation distribution collapsed (zero standard
    deviation) are dropped from the statistic, with ``df`` decremented and
    a warning recorded.
    """

    group_sizes: tuple[int, ...]
    observed_mean_r: np.ndarray
    observed_sd_r: np.ndarray
    predicted_r: np.ndarray
    chi2: float
    df: int
    p_value: float
    alpha: float
    compatible: bool
    warnings: tuple[str, ...]

    @property
    def verdict(self) -> str:
        return "compatible" if self.compatible else "incompatible"


def default_group_sizes(n_participants: int) -> tuple[int, ...]:
    """Doubling group sizes 1, 2, 4, ... up to and including n // 2."""
    half = n_participants // 2
    sizes = []
    g = 1
    while g < half:
        sizes.append(g)
        g *= 2
    sizes.append(half)
    return tuple(sizes)


def ecvt(
    table: DataTable,
    group_sizes=None,
    resamples: int = 200,
    alpha: float = 0.01,
    rng=None,
    fisher_z: bool = False,
) -> EcvtReport:
    """Run the validity test on a complete table.

    Parameters
    ----------
    table
        Complete table (no missing cells).
    group_sizes
        Participant group sizes to test; defaults to doubling sizes up to
        half the participant count.  Two disjoint groups of each size must
        fit, so ``2 * max(group_sizes) <= n``.
    resamples
        Number of disjoint group pairs drawn per size.
    alpha
        Significance level of the verdict.
    fisher_z
        Average and standardize the correlations on the Fisher-z scale
        instead of the raw r scale (reported means are transformed back).

    Raises
    ------
    PreconditionError
        Missing cells present (impute first), or a group size too large.
    """
    if table.missing.any():
        raise PreconditionError(
            "the table has missing cells; impute them (e.g. crari_impute) "
            "before running the validity test"
        )
    n = table.cols
    if group_sizes is None:
        sizes = default_group_sizes(n)
    else:
        sizes = tuple(int(g) for g in group_sizes)
        if not sizes or min(sizes) < 1:
            raise PreconditionError("group sizes must be positive integers")
    if 2 * max(sizes) > n:
        raise PreconditionError(
            f"two disjoint groups of size {max(sizes)} do not fit in "
            f"{n} participants"
        )
    if resamples < 2:
        raise PreconditionError("at least 2 resamples are required")
    dec = anova(table)
    q = math.inf if dec.vij == 0.0 else dec.vi / dec.vij
    gen = as_generator(rng)
    values = table.values

    observed_mean = np.empty(len(sizes))
    observed_sd = np.empty(len(sizes))
    predicted = np.empty(len(sizes))
    chi2 = 0.0
    df = 0
    warnings = []
    for k, g in enumerate(sizes):
        rs = np.empty(resamples)
        for b in range(resamples):
            group_a, group_b = disjoint_groups(gen, n, g)
            means_a = values[:, group_a].mean(axis=1)
            means_b = values[:, group_b].mean(axis=1)
            rs[b] = _pearson(means_a, means_b)
        if fisher_z:
            zs = np.arctanh(np.clip(rs, -1 + 1e-15, 1 - 1e-15))
            center, spread = zs.mean(), zs.std(ddof=1)
            observed_mean[k] = math.tanh(center)
            observed_sd[k] = rs.std(ddof=1)
            target = math.atanh(min(expected_icc(q, g), 1 - 1e-15))
        else:
            center, spread = rs.mean(), rs.std(ddof=1)
            observed_mean[k] = center
            observed_sd[k] = spread
            target = expected_icc(q, g)
        predicted[k] = expected_icc(q, g)
        if spread == 0.0:
            warnings.append(
                f"group size {g}: constant correlations, dropped from the statistic"
            )
            continue
        chi2 += ((center - target) / (spread / math.sqrt(resamples))) ** 2
        df += 1

    if df == 0:
        warnings.append("all group sizes degenerate; verdict defaults to compatible")
        p_value = 1.0
    else:
        p_value = chi2_upper_tail(chi2, df)
    return EcvtReport(
        group_sizes=sizes,
        observed_mean_r=observed_mean,
        observed_sd_r=observed_sd,
        predicted_r=predicted,
        chi2=chi2,
        df=df,
        p_value=p_value,
        alpha=alpha,
        compatible=p_value > alpha,
        warnings=tuple(warnings),
    )


def disjoint_groups(
    gen: np.random.Generator, n: int, g: int
) -> tuple[np.ndarray, np.ndarray]:
    """Two disjoint uniformly random participant groups of size ``g``."""
    draw = gen.permutation(n)[: 2 * g]
    return draw[:g], draw[g:]


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return math.nan
    return float(xc @ yc) / denom
