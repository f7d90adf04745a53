"""Selection-rate ratios between groups.

Three formulations are offered:

``raw``
    rate(comparison) / rate(reference), with the reference group always
    chosen by the caller.
``symmetrized``
    the smaller of the two possible ratios between a pair of groups, so the
    result does not depend on which group sits in the denominator.
``categorical_worst_case``
    lowest group rate divided by highest group rate over all groups with at
    least one record.

Ratios are evaluated on exact fractions and rounded to float once, so
symmetry and scale invariance hold bit for bit. Threshold comparisons are
also exact against the binary value of ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, DataError
from .tables import GroupOutcomeTable

__all__ = [
    "RAW",
    "SYMMETRIZED",
    "CATEGORICAL_WORST_CASE",
    "DEGENERATE_RATES",
    "EXCLUDED_EMPTY_GROUPS",
    "RatioValue",
    "DisparityAssessment",
    "raw_ratio",
    "symmetrized_ratio",
    "categorical_worst_case",
    "fair_band",
    "check_tau",
]

RAW = "raw"
SYMMETRIZED = "symmetrized"
CATEGORICAL_WORST_CASE = "categorical_worst_case"

DEGENERATE_RATES = "DEGENERATE_RATES"
EXCLUDED_EMPTY_GROUPS = "EXCLUDED_EMPTY_GROUPS"

FINITE = "finite"
UNDEFINED = "undefined"
INFINITE = "infinite"


@dataclass(frozen=True)
class RatioValue:
    kind: str
    value: float | None = None
    exact: Fraction | None = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, numerator: Fraction, denominator: Fraction) -> RatioValue:
        if denominator == 0:
            return cls(UNDEFINED) if numerator == 0 else cls(INFINITE)
        q = numerator / denominator
        return cls(FINITE, float(q), q)

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE


@dataclass(frozen=True)
class DisparityAssessment:
    variant: str
    value: RatioValue
    threshold_tau: float
    flagged: bool
    comparison_group: str | None = None
    reference_group: str | None = None
    excluded_groups: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "label": "selection-rate ratio",
            "variant": self.variant,
            "kind": self.value.kind,
            "value": self.value.value,
            "threshold_tau": self.threshold_tau,
            "flagged": self.flagged,
            "comparison_group": self.comparison_group,
            "reference_group": self.reference_group,
            "excluded_groups": list(self.excluded_groups),
            "caveats": list(self.caveats),
        }


def check_tau(tau: float) -> float:
    tau = float(tau)
    if not (0.0 < tau < 1.0):
        raise ConfigError(f"tau must lie strictly between 0 and 1, got {tau!r}")
    return tau


def _assess(
    variant: str,
    value: RatioValue,
    tau: float,
    comparison: str | None = None,
    reference: str | None = None,
    excluded: tuple[str, ...] = (),
) -> DisparityAssessment:
    caveats = []
    if excluded:
        caveats.append(EXCLUDED_EMPTY_GROUPS)
    if value.is_finite:
        flagged = value.exact <= Fraction(tau)
        if value.exact == 0:
            caveats.append(DEGENERATE_RATES)
    else:
        flagged = False
        caveats.append(DEGENERATE_RATES)
    return DisparityAssessment(
        variant=variant,
        value=value,
        threshold_tau=tau,
        flagged=flagged,
        comparison_group=comparison,
        reference_group=reference,
        excluded_groups=excluded,
        caveats=tuple(caveats),
    )


def _pair_rates(table: GroupOutcomeTable, a: str, b: str) -> tuple[Fraction, Fraction]:
    if a == b:
        raise ConfigError(f"the two groups must differ, got {a!r} twice")
    return table.rate(a), table.rate(b)


def raw_ratio(
    table: GroupOutcomeTable, comparison_group: str, reference_group: str, tau: float = 0.8
) -> DisparityAssessment:
    tau = check_tau(tau)
    rc, rr = _pair_rates(table, comparison_group, reference_group)
    return _assess(RAW, RatioValue.of(rc, rr), tau, comparison_group, reference_group)


def symmetrized_ratio(
    table: GroupOutcomeTable, group_a: str, group_b: str, tau: float = 0.8
) -> DisparityAssessment:
    """min(r, 1/r) for r = rate(a)/rate(b); flagged when at or below ``tau``.

    ``comparison_group`` is set to ``group_a`` and ``reference_group`` to
    ``group_b`` for reporting only; the value does not depend on the order.
    """
    tau = check_tau(tau)
    ra, rb = _pair_rates(table, group_a, group_b)
    lo, hi = min(ra, rb), max(ra, rb)
    return _assess(SYMMETRIZED, RatioValue.of(lo, hi), tau, group_a, group_b)


def categorical_worst_case(table: GroupOutcomeTable, tau: float = 0.8) -> DisparityAssessment:
    tau = check_tau(tau)
    included = table.nonempty_groups()
    if len(included) < 2:
        raise DataError("at least two groups with records are required")
    excluded = tuple(g for g in table.groups if g not in included)
    rates = [table.rate(g) for g in included]
    return _assess(
        CATEGORICAL_WORST_CASE,
        RatioValue.of(min(rates), max(rates)),
        tau,
        excluded=excluded,
    )


def fair_band(tau: float) -> tuple[float, float]:
    """Open interval of raw ratios left unflagged by the symmetrized rule."""
    tau = check_tau(tau)
    return tau, 1.0 / tau
