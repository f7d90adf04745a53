"""Per-group outcome counts and their ingestion.

A :class:`GroupOutcomeTable` holds, for each value of the protected
attribute, how many records received the favorable outcome and how many
did not. Which raw outcome token counts as favorable is never guessed:
it is declared through an :class:`OutcomePolarity`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .errors import DataError

__all__ = [
    "OutcomePolarity",
    "GroupOutcomeTable",
    "ReferenceDistribution",
    "normalize_label",
    "from_rows",
    "from_aggregate",
    "flip_polarity",
    "selection_rate",
]


def normalize_label(label: Any) -> str:
    """Trim surrounding whitespace; labels are otherwise compared verbatim."""
    text = str(label).strip()
    if not text:
        raise DataError("group label is empty")
    return text


@dataclass(frozen=True)
class OutcomePolarity:
    """Which raw outcome value is favorable.

    ``unfavorable_values`` of ``None`` means "every other value". When an
    explicit set is given, outcome tokens outside both sets are rejected.
    ``flipped`` records that the table built under this polarity has had
    its favorable and unfavorable columns swapped.
    """

    favorable_value: str
    unfavorable_values: frozenset[str] | None = None
    flipped: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "favorable_value", str(self.favorable_value))
        if self.unfavorable_values is not None:
            values = frozenset(str(v) for v in self.unfavorable_values)
            if self.favorable_value in values:
                raise DataError(
                    f"favorable value {self.favorable_value!r} is also listed as unfavorable"
                )
            object.__setattr__(self, "unfavorable_values", values)

    def is_favorable(self, token: Any) -> bool:
        token = str(token)
        if token == self.favorable_value:
            return True
        if self.unfavorable_values is not None and token not in self.unfavorable_values:
            raise DataError(f"unknown outcome token {token!r}")
        return False

    def to_dict(self) -> dict:
        return {
            "favorable_value": self.favorable_value,
            "unfavorable_values": (
                None if self.unfavorable_values is None else sorted(self.unfavorable_values)
            ),
            "flipped": self.flipped,
        }


@dataclass(frozen=True)
class GroupOutcomeTable:
    """Favorable/unfavorable counts per group, in insertion order."""

    entries: Mapping[str, tuple[int, int]]
    polarity: OutcomePolarity | None = None
    dropped_fields: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        clean: dict[str, tuple[int, int]] = {}
        for label, cell in self.entries.items():
            label = normalize_label(label)
            if label in clean:
                raise DataError(f"duplicate group {label!r}")
            fav, unfav = cell
            for count in (fav, unfav):
                if isinstance(count, bool) or not isinstance(count, int):
                    raise DataError(f"count for group {label!r} is not an integer: {count!r}")
                if count < 0:
                    raise DataError(f"negative count for group {label!r}")
            clean[label] = (fav, unfav)
        if not clean:
            raise DataError("table has no groups")
        if sum(f + u for f, u in clean.values()) == 0:
            raise DataError("table total is zero")
        object.__setattr__(self, "entries", clean)

    @property
    def groups(self) -> list[str]:
        return list(self.entries)

    def __contains__(self, group: str) -> bool:
        return group in self.entries

    def cell(self, group: str) -> tuple[int, int]:
        try:
            return self.entries[group]
        except KeyError:
            raise DataError(f"unknown group {group!r}") from None

    def total(self, group: str) -> int:
        fav, unfav = self.cell(group)
        return fav + unfav

    @property
    def grand_total(self) -> int:
        return sum(f + u for f, u in self.entries.values())

    def nonempty_groups(self) -> list[str]:
        return [g for g, (f, u) in self.entries.items() if f + u > 0]

    def triples(self) -> list[tuple[str, int, int]]:
        return [(g, f, u) for g, (f, u) in self.entries.items()]

    def scaled(self, factor: int) -> GroupOutcomeTable:
        return replace(
            self, entries={g: (f * factor, u * factor) for g, (f, u) in self.entries.items()}
        )

    def rate(self, group: str) -> Fraction:
        """Exact selection rate; see :func:`selection_rate` for the float."""
        fav, unfav = self.cell(group)
        if fav + unfav == 0:
            raise DataError(f"group {group!r} has no records")
        return Fraction(fav, fav + unfav)


@dataclass(frozen=True)
class ReferenceDistribution:
    """Group proportions of a comparison population."""

    proportions: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[str, float] = {}
        for label, p in self.proportions.items():
            label = normalize_label(label)
            if label in clean:
                raise DataError(f"duplicate group {label!r} in reference distribution")
            p = float(p)
            if not (0.0 < p <= 1.0):
                raise DataError(f"reference proportion for {label!r} must be in (0, 1]")
            clean[label] = p
        if not clean:
            raise DataError("reference distribution is empty")
        if abs(math.fsum(clean.values()) - 1.0) > 1e-9:
            raise DataError("reference proportions must sum to 1")
        object.__setattr__(self, "proportions", clean)


def from_rows(
    rows: Iterable[Mapping[str, Any]],
    protected_field: str,
    outcome_field: str,
    polarity: OutcomePolarity,
) -> GroupOutcomeTable:
    """Count favorable and unfavorable outcomes per protected-attribute value.

    Fields other than the two named ones are ignored; their names are kept
    on the table so reports can say they were not used.
    """
    counts: dict[str, list[int]] = {}
    seen_fields: dict[str, None] = {}
    n = 0
    for i, row in enumerate(rows):
        n += 1
        for name in (protected_field, outcome_field):
            if name not in row:
                raise DataError(f"row {i + 1} has no field {name!r}")
        for name in row:
            if name not in (protected_field, outcome_field):
                seen_fields.setdefault(name)
        group = normalize_label(row[protected_field])
        cell = counts.setdefault(group, [0, 0])
        if polarity.is_favorable(row[outcome_field]):
            cell[0] += 1
        else:
            cell[1] += 1
    if n == 0:
        raise DataError("no rows")
    return GroupOutcomeTable(
        {g: (f, u) for g, (f, u) in counts.items()},
        polarity=polarity,
        dropped_fields=tuple(seen_fields),
    )


def from_aggregate(
    triples: Sequence[tuple[str, int, int]], polarity: OutcomePolarity | None = None
) -> GroupOutcomeTable:
    entries: dict[str, tuple[int, int]] = {}
    for label, fav, unfav in triples:
        label = normalize_label(label)
        if label in entries:
            raise DataError(f"duplicate group {label!r}")
        entries[label] = (fav, unfav)
    return GroupOutcomeTable(entries, polarity=polarity)


def flip_polarity(table: GroupOutcomeTable) -> GroupOutcomeTable:
    """Treat the previously unfavorable outcome as the favorable one."""
    polarity = table.polarity
    if polarity is not None:
        polarity = replace(polarity, flipped=not polarity.flipped)
    return GroupOutcomeTable(
        {g: (u, f) for g, (f, u) in table.entries.items()},
        polarity=polarity,
        dropped_fields=table.dropped_fields,
    )


def selection_rate(table: GroupOutcomeTable, group: str) -> float:
    return float(table.rate(group))
