"""Statistics and imputation for item-by-participant tables with missing data.

The package centers on the consistency-of-averages intraclass correlation
(ICC) of rectangular behavioral data tables: computing it on tables with
missing cells, correcting it (and predictor goodness-of-fit statistics)
for the missing proportion, imputing missing cells so that item means and
a target ICC are preserved, and validating the additive data model by
permutation resampling.
"""

from .anova import (
    AnovaDecomposition,
    IccReport,
    anova,
    corrected_icc,
    corrected_interval,
    expected_icc,
    icc_report,
)
from .ecvt import EcvtReport, default_group_sizes, ecvt
from .errors import (
    IccTabError,
    NumericError,
    PreconditionError,
    StructuralError,
    TableFormatError,
    UnreachableTargetError,
)
from .fit import (
    PredictorFit,
    R2BiasPoint,
    RatioCurvePoint,
    corrected_r2,
    fit_predictors,
    r2cor_bias_demo,
    r2_icc_curve,
)
from .impute import (
    AriBiasPoint,
    ImputationOutcome,
    adjust_fills,
    ari_bias_demo,
    ari_impute,
    crari_impute,
)
from .rand import as_generator, split_seed
from .special import beta_quantile, chi2_upper_tail, f_quantile
from .synth import (
    SynthSpec,
    SynthTruth,
    alpha_cdf,
    degrade_pattern,
    degrade_random,
    generate,
    signed_power,
)
from .table import (
    DataTable,
    MissingPattern,
    load_csv,
    mix_rows,
    save_csv,
    virtualize,
    zscore,
)

__version__ = "0.1.0"

__all__ = [
    "AnovaDecomposition",
    "AriBiasPoint",
    "DataTable",
    "EcvtReport",
    "IccReport",
    "IccTabError",
    "ImputationOutcome",
    "MissingPattern",
    "NumericError",
    "PreconditionError",
    "PredictorFit",
    "R2BiasPoint",
    "RatioCurvePoint",
    "StructuralError",
    "SynthSpec",
    "SynthTruth",
    "TableFormatError",
    "UnreachableTargetError",
    "adjust_fills",
    "alpha_cdf",
    "anova",
    "ari_bias_demo",
    "ari_impute",
    "as_generator",
    "beta_quantile",
    "chi2_upper_tail",
    "corrected_icc",
    "corrected_interval",
    "corrected_r2",
    "crari_impute",
    "default_group_sizes",
    "degrade_pattern",
    "degrade_random",
    "ecvt",
    "expected_icc",
    "f_quantile",
    "fit_predictors",
    "generate",
    "icc_report",
    "load_csv",
    "mix_rows",
    "r2_icc_curve",
    "r2cor_bias_demo",
    "save_csv",
    "signed_power",
    "split_seed",
    "virtualize",
    "zscore",
]
