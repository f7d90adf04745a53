"""Reading tables, configurations and candidate manifests from files."""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path
from typing import Any

from .audit import ALL_OTHERS, AuditConfig, CandidateOutcome
from .errors import ConfigError, DataError
from .tables import (
    GroupOutcomeTable,
    OutcomePolarity,
    ReferenceDistribution,
    from_aggregate,
    from_rows,
)

__all__ = [
    "AGGREGATE_HEADER",
    "is_aggregate_csv",
    "read_aggregate_csv",
    "read_rows_csv",
    "read_table",
    "load_config",
    "config_from_dict",
    "load_reference_distribution",
    "load_manifest",
]

AGGREGATE_HEADER = ["group", "favorable", "unfavorable"]
_INT = re.compile(r"-?[0-9]+")

CONFIG_KEYS = (
    "protected_field",
    "outcome_field",
    "polarity",
    "reference_group",
    "comparison_groups",
    "reference_distribution",
    "tau",
    "alpha",
    "tests",
    "yates",
    "fail_on_flag",
)


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _header(text: str) -> list[str]:
    first = next(csv.reader(text.splitlines()[:1]), None)
    return [h.strip() for h in first] if first else []


def is_aggregate_csv(text: str) -> bool:
    return _header(text) == AGGREGATE_HEADER


def read_aggregate_csv(path) -> GroupOutcomeTable:
    text = _read_text(path)
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != AGGREGATE_HEADER:
        raise DataError(f"{path}: header must be exactly {','.join(AGGREGATE_HEADER)}")
    triples = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise DataError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
        label, fav, unfav = (v.strip() for v in row)
        if not (_INT.fullmatch(fav) and _INT.fullmatch(unfav)):
            raise DataError(f"{path}:{lineno}: counts must be decimal integers")
        triples.append((label, int(fav), int(unfav)))
    if not triples:
        raise DataError(f"{path}: no groups")
    return from_aggregate(triples)


def read_rows_csv(
    path, protected_field: str, outcome_field: str, polarity: OutcomePolarity
) -> GroupOutcomeTable:
    text = _read_text(path)
    reader = csv.DictReader(text.splitlines())
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if None in row or any(v is None for v in row.values()):
            raise DataError(f"{path}:{lineno}: field count does not match the header")
        rows.append(row)
    if reader.fieldnames is None:
        raise DataError(f"{path}: empty file")
    return from_rows(rows, protected_field, outcome_field, polarity)


def read_table(
    path,
    protected_field: str | None = None,
    outcome_field: str | None = None,
    polarity: OutcomePolarity | None = None,
) -> GroupOutcomeTable:
    """Load either CSV layout; row-level files need field names and a polarity."""
    if is_aggregate_csv(_read_text(path)):
        return read_aggregate_csv(path)
    missing = [
        name
        for name, value in (
            ("protected field", protected_field),
            ("outcome field", outcome_field),
            ("favorable outcome value", polarity),
        )
        if value is None
    ]
    if missing:
        raise ConfigError(f"row-level input requires: {', '.join(missing)}")
    return read_rows_csv(path, protected_field, outcome_field, polarity)


def _load_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {path}: {exc}") from None


def _polarity(value: Any) -> OutcomePolarity | None:
    if value is None:
        return None
    if not isinstance(value, dict):
        raise ConfigError("polarity must be an object")
    unknown = set(value) - {"favorable_value", "unfavorable_values"}
    if unknown:
        raise ConfigError(f"unknown polarity keys: {', '.join(sorted(unknown))}")
    if "favorable_value" not in value:
        raise ConfigError("polarity.favorable_value is required")
    unfav = value.get("unfavorable_values")
    if unfav is not None and not isinstance(unfav, list):
        raise ConfigError("polarity.unfavorable_values must be a list or null")
    try:
        return OutcomePolarity(
            str(value["favorable_value"]),
            None if unfav is None else frozenset(str(v) for v in unfav),
        )
    except DataError as exc:
        raise ConfigError(str(exc)) from None


def _number(cfg: dict, key: str, default: float) -> float:
    value = cfg.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number")
    return float(value)


def _flag(cfg: dict, key: str) -> bool:
    value = cfg.get(key, False)
    if not isinstance(value, bool):
        raise ConfigError(f"{key} must be true or false")
    return value


def config_from_dict(cfg: Any) -> AuditConfig:
    if not isinstance(cfg, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(cfg) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    for key in ("protected_field", "outcome_field", "reference_group"):
        if cfg.get(key) is not None and not isinstance(cfg[key], str):
            raise ConfigError(f"{key} must be a string")
    comparisons = cfg.get("comparison_groups", ALL_OTHERS)
    if comparisons != ALL_OTHERS and not (
        isinstance(comparisons, list) and all(isinstance(g, str) for g in comparisons)
    ):
        raise ConfigError(f"comparison_groups must be a list of labels or {ALL_OTHERS!r}")
    if comparisons != ALL_OTHERS:
        comparisons = tuple(g.strip() for g in comparisons)
    refdist = cfg.get("reference_distribution")
    if refdist is not None:
        if not isinstance(refdist, dict):
            raise ConfigError("reference_distribution must be an object")
        try:
            refdist = ReferenceDistribution(refdist)
        except (DataError, TypeError, ValueError) as exc:
            raise ConfigError(f"reference_distribution: {exc}") from None
    tests = cfg.get("tests")
    if tests is not None and not (
        isinstance(tests, list) and all(isinstance(t, str) for t in tests)
    ):
        raise ConfigError("tests must be a list of method names")
    ref = cfg.get("reference_group")
    kwargs = dict(
        protected_field=cfg.get("protected_field"),
        outcome_field=cfg.get("outcome_field"),
        polarity=_polarity(cfg.get("polarity")),
        reference_group=None if ref is None else ref.strip(),
        comparison_groups=comparisons,
        reference_distribution=refdist,
        tau=_number(cfg, "tau", 0.8),
        alpha=_number(cfg, "alpha", 0.05),
        yates=_flag(cfg, "yates"),
        fail_on_flag=_flag(cfg, "fail_on_flag"),
    )
    if tests is not None:
        kwargs["tests"] = tuple(tests)
    return AuditConfig(**kwargs)


def load_config(path) -> AuditConfig:
    return config_from_dict(_load_json(path))


def load_reference_distribution(path) -> ReferenceDistribution:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError("reference distribution must be a JSON object of group: proportion")
    try:
        return ReferenceDistribution(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"reference distribution: {exc}") from None


def load_manifest(path, config: AuditConfig | None = None) -> list[CandidateOutcome]:
    """Read a ``label,data,utility`` CSV; data paths are relative to the manifest."""
    base = Path(path).parent
    text = _read_text(path)
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
        "label",
        "data",
        "utility",
    ]:
        raise DataError(f"{path}: header must be exactly label,data,utility")
    candidates = []
    seen = set()
    for lineno, row in enumerate(reader, start=2):
        if None in row or any(v is None for v in row.values()):
            raise DataError(f"{path}:{lineno}: field count does not match the header")
        label = row["label"].strip()
        if not label:
            raise DataError(f"{path}:{lineno}: empty label")
        if label in seen:
            raise DataError(f"{path}:{lineno}: duplicate label {label!r}")
        seen.add(label)
        try:
            utility = float(row["utility"])
        except ValueError:
            raise DataError(f"{path}:{lineno}: utility is not a number") from None
        if not math.isfinite(utility):
            raise DataError(f"{path}:{lineno}: utility must be finite")
        kw = {}
        if config is not None:
            kw = dict(
                protected_field=config.protected_field,
                outcome_field=config.outcome_field,
                polarity=config.polarity,
            )
        table = read_table(base / row["data"].strip(), **kw)
        candidates.append(CandidateOutcome(label, table, utility))
    if not candidates:
        raise DataError(f"{path}: no candidates")
    return candidates
