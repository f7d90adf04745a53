"""Significance tests for differences in selection rates.

All tests work on a k x 2 view of a :class:`GroupOutcomeTable` (one row per
group, favorable count then unfavorable count), except the goodness-of-fit
test, which compares observed group counts with a reference population.
None of them decides what level counts as significant; that is left to the
caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kernels
from .errors import ConfigError, DataError
from .tables import GroupOutcomeTable, ReferenceDistribution

__all__ = [
    "PEARSON_CHI2",
    "FISHER_EXACT",
    "GOODNESS_OF_FIT",
    "TWO_PROPORTION_Z",
    "METHODS",
    "LOW_EXPECTED_CELL",
    "ContingencyView",
    "SignificanceResult",
    "pearson_chi_squared",
    "fisher_exact_2x2",
    "goodness_of_fit",
    "two_proportion_z",
    "regularized_upper_gamma",
    "chi2_sf",
]

PEARSON_CHI2 = "pearson_chi2"
FISHER_EXACT = "fisher_exact"
GOODNESS_OF_FIT = "goodness_of_fit"
TWO_PROPORTION_Z = "two_proportion_z"
METHODS = (PEARSON_CHI2, FISHER_EXACT, GOODNESS_OF_FIT, TWO_PROPORTION_Z)

LOW_EXPECTED_CELL = "LOW_EXPECTED_CELL"
MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class ContingencyView:
    groups: tuple[str, ...]
    cells: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        groups = tuple(self.groups)
        cells = tuple((int(f), int(u)) for f, u in self.cells)
        if len(groups) != len(cells):
            raise DataError("one cell pair is required per group")
        if len(groups) < 2:
            raise DataError("at least two groups are required")
        if any(f < 0 or u < 0 for f, u in cells):
            raise DataError("negative count")
        if sum(f + u for f, u in cells) == 0:
            raise DataError("table total is zero")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_table(
        cls, table: GroupOutcomeTable, groups: Sequence[str] | None = None
    ) -> ContingencyView:
        order = table.groups if groups is None else list(groups)
        return cls(tuple(order), tuple(table.cell(g) for g in order))

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> ContingencyView:
        """Anonymous view, groups named ``g0``, ``g1``, ..."""
        return cls(tuple(f"g{i}" for i in range(len(rows))), tuple(tuple(r) for r in rows))

    @property
    def k(self) -> int:
        return len(self.cells)

    def row_totals(self) -> list[int]:
        return [f + u for f, u in self.cells]

    def col_totals(self) -> tuple[int, int]:
        return sum(f for f, _ in self.cells), sum(u for _, u in self.cells)


@dataclass(frozen=True)
class SignificanceResult:
    method: str
    statistic: float
    dof: int | None
    p_value: float
    continuity_correction: bool = False
    caveats: tuple[str, ...] = ()
    signed_z: float | None = None
    groups: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "groups": list(self.groups),
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "continuity_correction": self.continuity_correction,
            "signed_z": self.signed_z,
            "caveats": list(self.caveats),
        }


def regularized_upper_gamma(s: float, x: float) -> float:
    """Q(s, x) = Gamma(s, x) / Gamma(s).

    Uses the power series for x < s + 1 and a continued fraction otherwise.
    Accurate to about 1e-10 relative or better for s <= 50 and x <= 500.
    """
    s = float(s)
    x = float(x)
    if not (s > 0.0) or math.isinf(s):
        raise ConfigError(f"shape must be positive and finite, got {s!r}")
    if not (x >= 0.0):
        raise ConfigError(f"x must be non-negative, got {x!r}")
    return kernels.upper_gamma_q(s, x)


def chi2_sf(statistic: float, dof: int) -> float:
    """Upper tail of the chi-squared distribution."""
    return regularized_upper_gamma(dof / 2.0, statistic / 2.0)


def _expected(view: ContingencyView) -> list[tuple[float, float]]:
    rows = view.row_totals()
    cols = view.col_totals()
    n = sum(rows)
    if any(r == 0 for r in rows) or any(c == 0 for c in cols):
        raise DataError("a row or column total is zero; the table is degenerate")
    return [(r * cols[0] / n, r * cols[1] / n) for r in rows]


def _low_expected(expected) -> tuple[str, ...]:
    if any(e < MIN_EXPECTED for pair in expected for e in pair):
        return (LOW_EXPECTED_CELL,)
    return ()


def _pearson_statistic(view: ContingencyView, correction: float) -> tuple[float, list]:
    expected = _expected(view)
    terms = []
    for (f, u), (ef, eu) in zip(view.cells, expected):
        for o, e in ((f, ef), (u, eu)):
            dev = max(abs(o - e) - correction, 0.0) if correction else abs(o - e)
            terms.append(dev * dev / e)
    return math.fsum(terms), expected


def pearson_chi_squared(view: ContingencyView, yates: bool = False) -> SignificanceResult:
    """Pearson chi-squared test of independence between group and outcome.

    With ``yates`` the continuity correction of 0.5 is applied (2 x 2 only).
    """
    if yates and view.k != 2:
        raise ConfigError("the Yates correction applies to two groups only")
    stat, expected = _pearson_statistic(view, 0.5 if yates else 0.0)
    dof = view.k - 1
    return SignificanceResult(
        method=PEARSON_CHI2,
        statistic=stat,
        dof=dof,
        p_value=chi2_sf(stat, dof),
        continuity_correction=yates,
        caveats=_low_expected(expected),
        groups=view.groups,
    )


def fisher_exact_2x2(view: ContingencyView) -> SignificanceResult:
    """Two-sided Fisher exact test.

    The p-value sums the hypergeometric probabilities of all tables with the
    observed margins that are no more likely than the observed table. The
    ``statistic`` field holds the observed table's probability.
    """
    if view.k != 2:
        raise ConfigError(f"Fisher's exact test needs exactly two groups, got {view.k}")
    (a, b), (c, d) = view.cells
    p_obs, p = kernels.fisher_two_sided(a, b, c, d)
    return SignificanceResult(
        method=FISHER_EXACT, statistic=p_obs, dof=None, p_value=p, groups=view.groups
    )


def goodness_of_fit(
    observed: Mapping[str, int], reference: ReferenceDistribution
) -> SignificanceResult:
    """Chi-squared goodness of fit of group counts to reference proportions.

    Reference groups absent from ``observed`` count as zero observations.
    """
    for g, count in observed.items():
        if g not in reference.proportions:
            raise DataError(f"group {g!r} is missing from the reference distribution")
        if count < 0:
            raise DataError(f"negative count for group {g!r}")
    n = sum(observed.values())
    if n == 0:
        raise DataError("observed total is zero")
    dof = len(reference.proportions) - 1
    if dof < 1:
        raise DataError("goodness of fit needs at least two reference groups")
    terms = []
    expected = []
    for g, p in reference.proportions.items():
        e = n * p
        o = observed.get(g, 0)
        expected.append(e)
        terms.append((o - e) ** 2 / e)
    stat = math.fsum(terms)
    return SignificanceResult(
        method=GOODNESS_OF_FIT,
        statistic=stat,
        dof=dof,
        p_value=chi2_sf(stat, dof),
        caveats=(LOW_EXPECTED_CELL,) if min(expected) < MIN_EXPECTED else (),
        groups=tuple(reference.proportions),
    )


def two_proportion_z(view: ContingencyView) -> SignificanceResult:
    """Pooled two-proportion z test; ``signed_z`` > 0 when group 0 has the higher rate."""
    if view.k != 2:
        raise ConfigError(f"the two-proportion test needs exactly two groups, got {view.k}")
    chi2, expected = _pearson_statistic(view, 0.0)
    (a, b), (c, d) = view.cells
    # sign of a/(a+b) - c/(c+d) without division
    diff = a * (c + d) - c * (a + b)
    z = math.copysign(math.sqrt(chi2), diff) if diff else 0.0
    return SignificanceResult(
        method=TWO_PROPORTION_Z,
        statistic=chi2,
        dof=None,
        p_value=math.erfc(abs(z) / math.sqrt(2.0)),
        caveats=_low_expected(expected),
        signed_z=z,
        groups=view.groups,
    )
