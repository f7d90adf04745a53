"""Assemble ratios and significance tests into an audit report.

The report separates two kinds of evidence: selection-rate ratios compared
against a threshold, and significance tests compared against ``alpha``.
Neither is treated as a legal conclusion; every report carries a fixed
disclaimer and regulatory citation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import ratios as rm
from . import significance as sig
from .errors import ConfigError, DataError
from .tables import GroupOutcomeTable, OutcomePolarity, ReferenceDistribution

__all__ = [
    "ALL_OTHERS",
    "CAVEAT_MESSAGES",
    "DISCLAIMER",
    "REGULATORY_CONTEXT",
    "AuditConfig",
    "Caveat",
    "PairwiseAssessment",
    "PrimaFacieEvidence",
    "AuditReport",
    "CandidateOutcome",
    "RankedAlternative",
    "classify_evidence",
    "run_audit",
    "rank_alternatives",
]

ALL_OTHERS = "all_others"

NOT_A_LEGAL_FINDING = "NOT_A_LEGAL_FINDING"
SMALL_NUMBERS = "SMALL_NUMBERS"
SMALLER_DIFFERENCES_SIGNIFICANT = "SMALLER_DIFFERENCES_SIGNIFICANT"

CAVEAT_MESSAGES = {
    NOT_A_LEGAL_FINDING: (
        "These figures are descriptive statistics. They do not establish, and must not "
        "be reported as, a legal determination of discrimination."
    ),
    SMALL_NUMBERS: (
        "A ratio is at or below the threshold, but no significance test reached the "
        "configured alpha. Large ratio differences based on small numbers may not "
        "indicate adverse impact."
    ),
    SMALLER_DIFFERENCES_SIGNIFICANT: (
        "No ratio is at or below the threshold, yet at least one significance test "
        "reached the configured alpha. Smaller differences in selection rate can still "
        "indicate adverse impact when statistically and practically significant."
    ),
    rm.DEGENERATE_RATES: (
        "At least one selection rate is 0 or a test could not be computed on a "
        "degenerate table; affected values are reported as 0, undefined or infinite, "
        "or omitted."
    ),
    rm.EXCLUDED_EMPTY_GROUPS: (
        "Groups with no records were excluded from ratio calculations."
    ),
    sig.LOW_EXPECTED_CELL: (
        "At least one expected cell count is below 5; chi-squared approximations may "
        "be unreliable."
    ),
}
CAVEAT_ORDER = tuple(CAVEAT_MESSAGES)

DISCLAIMER = (
    "The reported value is a selection-rate ratio, not a disparate-impact finding. "
    "Falling below the threshold does not by itself establish adverse impact in law, "
    "and staying above it does not rule adverse impact out. Courts give more weight "
    "to statistical significance testing, to the choice of comparison population and "
    "to the facts of the case than to the four-fifths rule, which federal agencies "
    "use as a screening guideline."
)

REGULATORY_CONTEXT = (
    "29 CFR §1607.4(D), Uniform Guidelines on Employee Selection Procedures: "
    "federal enforcement agencies generally treat a group selection rate under "
    "four-fifths (80%) of the highest group rate as evidence of adverse impact. "
    "The same paragraph allows smaller differences to count when they are "
    "statistically and practically significant, and larger differences not to "
    "count when they rest on small numbers and are not statistically significant."
)

NO_EVIDENCE = "no_evidence"
RATIO_FLAG_ONLY = "ratio_flag_only"
STATISTICAL_EVIDENCE_ONLY = "statistical_evidence_only"
RATIO_AND_STATISTICAL = "ratio_and_statistical"

DEFAULT_TESTS = (sig.PEARSON_CHI2, sig.FISHER_EXACT)


@dataclass(frozen=True)
class AuditConfig:
    protected_field: str | None = None
    outcome_field: str | None = None
    polarity: OutcomePolarity | None = None
    reference_group: str | None = None
    comparison_groups: tuple[str, ...] | str = ALL_OTHERS
    reference_distribution: ReferenceDistribution | None = None
    tau: float = 0.8
    alpha: float = 0.05
    tests: tuple[str, ...] = DEFAULT_TESTS
    yates: bool = False
    fail_on_flag: bool = False

    def __post_init__(self) -> None:
        rm.check_tau(self.tau)
        if not (0.0 < float(self.alpha) < 1.0):
            raise ConfigError(f"alpha must lie strictly between 0 and 1, got {self.alpha!r}")
        tests = tuple(self.tests)
        for t in tests:
            if t not in sig.METHODS:
                raise ConfigError(f"unknown test {t!r}; choose from {', '.join(sig.METHODS)}")
        # canonical order keeps reports independent of how the list was written
        object.__setattr__(self, "tests", tuple(m for m in sig.METHODS if m in tests))
        if self.comparison_groups != ALL_OTHERS:
            if isinstance(self.comparison_groups, str):
                raise ConfigError(
                    f"comparison_groups must be a list or {ALL_OTHERS!r}"
                )
            object.__setattr__(self, "comparison_groups", tuple(self.comparison_groups))

    def to_dict(self) -> dict:
        return {
            "protected_field": self.protected_field,
            "outcome_field": self.outcome_field,
            "polarity": None if self.polarity is None else self.polarity.to_dict(),
            "reference_group": self.reference_group,
            "comparison_groups": (
                self.comparison_groups
                if self.comparison_groups == ALL_OTHERS
                else list(self.comparison_groups)
            ),
            "reference_distribution": (
                None
                if self.reference_distribution is None
                else dict(self.reference_distribution.proportions)
            ),
            "tau": self.tau,
            "alpha": self.alpha,
            "tests": list(self.tests),
            "yates": self.yates,
            "fail_on_flag": self.fail_on_flag,
        }


@dataclass(frozen=True)
class Caveat:
    code: str

    @property
    def message(self) -> str:
        return CAVEAT_MESSAGES[self.code]

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class PairwiseAssessment:
    comparison_group: str
    raw: rm.DisparityAssessment
    symmetrized: rm.DisparityAssessment


@dataclass(frozen=True)
class PrimaFacieEvidence:
    pairwise: tuple[PairwiseAssessment, ...]
    overall: rm.DisparityAssessment
    tests: tuple[sig.SignificanceResult, ...]
    evidence_status: str

    def assessments(self) -> list[rm.DisparityAssessment]:
        out = []
        for pair in self.pairwise:
            out += [pair.raw, pair.symmetrized]
        out.append(self.overall)
        return out

    @property
    def flagged_any(self) -> bool:
        return any(a.flagged for a in self.assessments())


@dataclass(frozen=True)
class AuditReport:
    config: AuditConfig
    table: GroupOutcomeTable
    evidence: PrimaFacieEvidence
    caveats: tuple[Caveat, ...]
    notices: tuple[str, ...] = ()
    regulatory_context: str = REGULATORY_CONTEXT
    disclaimer: str = DISCLAIMER

    @property
    def flagged(self) -> bool:
        return self.evidence.flagged_any


def classify_evidence(flagged_any: bool, significant_any: bool) -> str:
    if flagged_any:
        return RATIO_AND_STATISTICAL if significant_any else RATIO_FLAG_ONLY
    return STATISTICAL_EVIDENCE_ONLY if significant_any else NO_EVIDENCE


def _comparison_groups(table: GroupOutcomeTable, config: AuditConfig) -> list[str]:
    ref = config.reference_group
    if config.comparison_groups == ALL_OTHERS:
        return [g for g in table.nonempty_groups() if g != ref]
    groups = list(config.comparison_groups)
    for g in groups:
        if g == ref:
            raise ConfigError(f"comparison group {g!r} is the reference group")
        table.cell(g)
    return groups


def _run_tests(
    table: GroupOutcomeTable, config: AuditConfig, comparisons: Sequence[str]
) -> tuple[list[sig.SignificanceResult], bool]:
    """Run the configured tests; returns results and whether any was skipped."""
    results = []
    skipped = False
    ref = config.reference_group
    included = table.nonempty_groups()

    def attempt(fn, *args):
        nonlocal skipped
        try:
            results.append(fn(*args))
        except DataError:
            skipped = True

    for method in config.tests:
        if method == sig.PEARSON_CHI2:
            view = sig.ContingencyView.from_table(table, included)
            if config.yates and view.k != 2:
                raise ConfigError("the Yates correction applies to two groups only")
            attempt(sig.pearson_chi_squared, view, config.yates)
        elif method == sig.GOODNESS_OF_FIT:
            observed = {g: table.cell(g)[0] for g in table.groups}
            attempt(sig.goodness_of_fit, observed, config.reference_distribution)
        else:
            fn = sig.fisher_exact_2x2 if method == sig.FISHER_EXACT else sig.two_proportion_z
            for g in comparisons:
                attempt(fn, sig.ContingencyView.from_table(table, [g, ref]))
    return results, skipped


def run_audit(table: GroupOutcomeTable, config: AuditConfig) -> AuditReport:
    """Compute every configured ratio and test against the reference group."""
    ref = config.reference_group
    if ref is None:
        raise ConfigError("reference_group is required for an audit")
    if table.total(ref) == 0:
        raise DataError(f"reference group {ref!r} has no records")
    if sig.GOODNESS_OF_FIT in config.tests and config.reference_distribution is None:
        raise ConfigError("goodness_of_fit requires a reference_distribution")

    comparisons = _comparison_groups(table, config)
    pairwise = tuple(
        PairwiseAssessment(
            g,
            rm.raw_ratio(table, g, ref, config.tau),
            rm.symmetrized_ratio(table, g, ref, config.tau),
        )
        for g in comparisons
    )
    overall = rm.categorical_worst_case(table, config.tau)
    tests, skipped = _run_tests(table, config, comparisons)

    flagged_any = overall.flagged or any(p.raw.flagged or p.symmetrized.flagged for p in pairwise)
    significant_any = any(t.p_value < config.alpha for t in tests)
    evidence = PrimaFacieEvidence(
        pairwise=pairwise,
        overall=overall,
        tests=tuple(tests),
        evidence_status=classify_evidence(flagged_any, significant_any),
    )

    codes = {NOT_A_LEGAL_FINDING}
    if not flagged_any and significant_any:
        codes.add(SMALLER_DIFFERENCES_SIGNIFICANT)
    if flagged_any and tests and not significant_any:
        codes.add(SMALL_NUMBERS)
    if skipped:
        codes.add(rm.DEGENERATE_RATES)
    for a in evidence.assessments():
        codes.update(a.caveats)
    for t in tests:
        codes.update(t.caveats)

    notices = []
    if table.dropped_fields:
        notices.append(
            "Fields not used by any metric were ignored: " + ", ".join(table.dropped_fields)
        )
    if table.polarity is not None and table.polarity.flipped:
        notices.append("Outcome polarity was flipped: counts refer to the unfavorable outcome.")
    return AuditReport(
        config=config,
        table=table,
        evidence=evidence,
        caveats=tuple(Caveat(c) for c in CAVEAT_ORDER if c in codes),
        notices=tuple(notices),
    )


@dataclass(frozen=True)
class CandidateOutcome:
    label: str
    table: GroupOutcomeTable
    utility: float


@dataclass(frozen=True)
class RankedAlternative:
    label: str
    worst_case: rm.DisparityAssessment
    utility: float

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "worst_case_ratio": self.worst_case.value.value,
            "kind": self.worst_case.value.kind,
            "flagged": self.worst_case.flagged,
            "utility": self.utility,
        }


def rank_alternatives(
    candidates: Sequence[CandidateOutcome],
    utility_floor: float,
    config: AuditConfig | None = None,
) -> list[RankedAlternative]:
    """Order sufficient-value candidates from least to most disparate.

    Candidates below ``utility_floor`` are dropped. The rest are sorted by
    worst-case ratio (higher first), then utility (higher first), then label;
    candidates whose ratio is undefined come last.
    """
    tau = 0.8 if config is None else config.tau
    if not candidates:
        raise DataError("no candidates given")
    labels = [c.label for c in candidates]
    if len(set(labels)) != len(labels):
        raise DataError("candidate labels must be unique")
    ranked = [
        RankedAlternative(c.label, rm.categorical_worst_case(c.table, tau), float(c.utility))
        for c in candidates
        if c.utility >= utility_floor
    ]
    if not ranked:
        raise DataError(f"no candidate reaches the utility floor {utility_floor!r}")

    def key(r: RankedAlternative):
        v = r.worst_case.value
        if v.is_finite:
            return (0, -v.exact, -r.utility, r.label)
        return (1, 0, -r.utility, r.label)

    return sorted(ranked, key=key)
