"""Group selection-rate audits: ratios, significance tests and reports."""

from .audit import (
    AuditConfig,
    AuditReport,
    CandidateOutcome,
    classify_evidence,
    rank_alternatives,
    run_audit,
)
from .errors import AuditError, ConfigError, DataError
from .kernels import BACKEND
from .ratios import (
    DisparityAssessment,
    RatioValue,
    categorical_worst_case,
    fair_band,
    raw_ratio,
    symmetrized_ratio,
)
from .significance import (
    ContingencyView,
    SignificanceResult,
    fisher_exact_2x2,
    goodness_of_fit,
    pearson_chi_squared,
    regularized_upper_gamma,
    two_proportion_z,
)
from .tables import (
    GroupOutcomeTable,
    OutcomePolarity,
    ReferenceDistribution,
    flip_polarity,
    from_aggregate,
    from_rows,
    selection_rate,
)

__version__ = "0.1.0"
