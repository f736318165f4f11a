"""Predictor goodness of fit against item means, corrected for missing data.

A predictor is scored by the squared Pearson correlation ``r2`` between its
values and the per-item means of the valid data.  Because the ICC bounds
the reproducible proportion of item-related variance, the ratio
``r2 / icc`` estimates the proportion of *reproducible* variance the
predictor accounts for — a quantity independent of the noise level and of
the number of participants.  Multiplying that ratio by the corrected ICC
gives ``r2_cor``, an estimate of the squared correlation the predictor
would reach on the table without missing data:

    r2_cor = icc_cor * r2 / icc

Every fit carries the ICC report it was computed against, so the statistic
and its reference ICC cannot be mismatched by callers.
"""

from dataclasses import dataclass

import numpy as np

from .anova import IccReport, icc_report
from .ecvt import disjoint_groups
from .errors import NumericError, PreconditionError, StructuralError
from .rand import as_generator
from .synth import degrade_random
from .table import DataTable

__all__ = [
    "PredictorFit",
    "RatioCurvePoint",
    "R2BiasPoint",
    "corrected_r2",
    "fit_predictors",
    "r2_icc_curve",
    "r2cor_bias_demo",
]


@dataclass(frozen=True)
class PredictorFit:
    """Per-predictor r2, r2/ICC ratio and corrected r2, plus ICC context."""

    r2: np.ndarray
    r2_on_icc: np.ndarray
    r2_cor: np.ndarray
    icc_context: IccReport
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class RatioCurvePoint:
    """Resampled ICC, r2 and their ratio at one participant group size."""

    g: int
    icc: float
    r2: float
    ratio: float
    excluded: float


@dataclass(frozen=True)
class R2BiasPoint:
    """Observed and corrected r2 at one degradation level."""

    p: float
    r2_observed: float
    r2_cor: float
    r2_exact: float


def corrected_r2(r2, icc: float, icc_cor: float):
    """The (r2/ICC, corrected r2) pair for observed r2 values."""
    r2 = np.asarray(r2, dtype=float)
    ratio = r2 / icc
    return ratio, icc_cor * ratio


def fit_predictors(
    table: DataTable,
    predictors,
    conf_probs: tuple[float, ...] = (0.95, 0.99, 0.999),
) -> PredictorFit:
    """Score one or more predictors against the table's item means.

    ``predictors`` is an m x k array (or a length-m vector for a single
    predictor) aligned with the table's rows.

    Raises
    ------
    StructuralError
        Predictor rows do not match the table's rows.
    NumericError
        A predictor column is constant.
    """
    pred = np.asarray(predictors, dtype=float)
    if pred.ndim == 1:
        pred = pred[:, None]
    if pred.ndim != 2 or pred.shape[0] != table.rows:
        raise StructuralError(
            f"predictors must have {table.rows} rows, got shape {pred.shape}"
        )
    constant = np.flatnonzero(pred.std(axis=0) == 0)
    if constant.size:
        raise NumericError(f"constant predictor column(s): {(constant + 1).tolist()}")
    report = icc_report(table, conf_probs)
    item_means = report.item_means
    r2 = np.array(
        [_pearson(item_means, pred[:, j]) ** 2 for j in range(pred.shape[1])]
    )
    ratio, r2_cor = corrected_r2(r2, report.icc, report.icc_cor)
    warnings = ()
    if report.column_effect_warning:
        warnings = ("non-negligible column effect: corrected statistics unreliable",)
    return PredictorFit(
        r2=r2,
        r2_on_icc=ratio,
        r2_cor=r2_cor,
        icc_context=report,
        warnings=warnings,
    )


def r2_icc_curve(
    table: DataTable,
    predictor,
    group_sizes,
    resamples: int = 200,
    rng=None,
) -> list[RatioCurvePoint]:
    """Resampled r2/ICC ratio as a function of participant group size.

    For each size ``g``, two disjoint participant groups are drawn
    ``resamples`` times; the ICC is estimated as the mean correlation
    between the two groups' item means, and r2 as the mean squared
    correlation of the first group's item means with the predictor.  Items
    without any valid value inside a drawn group are excluded pairwise from
    that resample; the mean number of exclusions is reported per size.
    """
    pred = np.asarray(predictor, dtype=float).ravel()
    if pred.size != table.rows:
        raise StructuralError(
            f"predictor must have {table.rows} values, got {pred.size}"
        )
    sizes = tuple(int(g) for g in group_sizes)
    n = table.cols
    if 2 * max(sizes) > n:
        raise PreconditionError(
            f"two disjoint groups of size {max(sizes)} do not fit in {n} participants"
        )
    gen = as_generator(rng)
    filled = np.where(table.valid, table.values, 0.0)
    valid = table.valid.astype(float)
    points = []
    for g in sizes:
        r_icc = np.empty(resamples)
        r2_vals = np.empty(resamples)
        excluded = np.empty(resamples)
        for b in range(resamples):
            group_a, group_b = disjoint_groups(gen, n, g)
            counts_a = valid[:, group_a].sum(axis=1)
            counts_b = valid[:, group_b].sum(axis=1)
            means_a = np.divide(
                filled[:, group_a].sum(axis=1),
                counts_a,
                out=np.zeros(table.rows),
                where=counts_a > 0,
            )
            means_b = np.divide(
                filled[:, group_b].sum(axis=1),
                counts_b,
                out=np.zeros(table.rows),
                where=counts_b > 0,
            )
            both = (counts_a > 0) & (counts_b > 0)
            r_icc[b] = _pearson(means_a[both], means_b[both])
            has_a = counts_a > 0
            r2_vals[b] = _pearson(means_a[has_a], pred[has_a]) ** 2
            excluded[b] = table.rows - int(both.sum())
        icc_g = float(r_icc.mean())
        r2_g = float(r2_vals.mean())
        points.append(
            RatioCurvePoint(
                g=g,
                icc=icc_g,
                r2=r2_g,
                ratio=r2_g / icc_g,
                excluded=float(excluded.mean()),
            )
        )
    return points


def r2cor_bias_demo(
    table: DataTable,
    predictor,
    p_grid,
    replications: int,
    rng=None,
) -> list[R2BiasPoint]:
    """Track observed and corrected r2 while cells are masked at random.

    ``r2_exact`` is the predictor's r2 on the complete input table; each
    degradation level reports the mean observed r2 and mean corrected r2
    over ``replications``.
    """
    if table.missing.any():
        raise PreconditionError("the reference table must have no missing cells")
    pred = np.asarray(predictor, dtype=float).ravel()
    gen = as_generator(rng)
    r2_exact = float(fit_predictors(table, pred).r2[0])
    points = []
    for p in p_grid:
        observed = np.empty(replications)
        cor = np.empty(replications)
        for r in range(replications):
            degraded = degrade_random(table, p, gen)
            fit = fit_predictors(degraded, pred)
            observed[r] = fit.r2[0]
            cor[r] = fit.r2_cor[0]
        points.append(
            R2BiasPoint(
                p=float(p),
                r2_observed=float(observed.mean()),
                r2_cor=float(cor.mean()),
                r2_exact=r2_exact,
            )
        )
    return points


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        return float("nan")
    return float(xc @ yc) / denom
