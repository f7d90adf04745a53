"""Deterministic JSON and Markdown rendering.

Keys are emitted in a fixed order and floats are rounded to 12 significant
digits, so identical inputs give identical bytes and parsing then
re-rendering a JSON document reproduces it exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .audit import AuditReport, RankedAlternative
from .ratios import DisparityAssessment
from .significance import SignificanceResult

__all__ = [
    "round_floats",
    "render_json",
    "report_to_dict",
    "ranking_to_dict",
    "report_markdown",
    "assessment_markdown",
    "test_markdown",
    "ranking_markdown",
]

SIG_DIGITS = 12


def round_floats(obj: Any) -> Any:
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite numbers are not rendered")
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def render_json(obj: Any) -> str:
    return json.dumps(round_floats(obj), indent=2, ensure_ascii=False) + "\n"


def report_to_dict(report: AuditReport) -> dict:
    table = report.table
    groups = []
    for g, (fav, unfav) in table.entries.items():
        total = fav + unfav
        groups.append(
            {
                "group": g,
                "favorable": fav,
                "unfavorable": unfav,
                "total": total,
                "selection_rate": fav / total if total else None,
            }
        )
    ev = report.evidence
    return {
        "report": "selection-rate audit",
        "disclaimer": report.disclaimer,
        "regulatory_context": report.regulatory_context,
        "config": report.config.to_dict(),
        "groups": groups,
        "evidence": {
            "evidence_status": ev.evidence_status,
            "pairwise": [
                {
                    "comparison_group": p.comparison_group,
                    "raw": p.raw.to_dict(),
                    "symmetrized": p.symmetrized.to_dict(),
                }
                for p in ev.pairwise
            ],
            "overall": ev.overall.to_dict(),
            "tests": [t.to_dict() for t in ev.tests],
        },
        "flagged": report.flagged,
        "caveats": [c.to_dict() for c in report.caveats],
        "notices": list(report.notices),
    }


def ranking_to_dict(ranking: list[RankedAlternative], utility_floor: float) -> dict:
    return {
        "utility_floor": float(utility_floor),
        "ranking": [r.to_dict() for r in ranking],
    }


def _fmt(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value) if value else "none"
    return str(value)


def _assessment_rows(d: dict) -> list[str]:
    return [
        f"| {_fmt(d['variant'])} | {_fmt(d['comparison_group'])} | {_fmt(d['reference_group'])} "
        f"| {_fmt(d['value']) if d['kind'] == 'finite' else d['kind']} "
        f"| {_fmt(d['threshold_tau'])} | {_fmt(d['flagged'])} | {_fmt(d['caveats'])} |"
    ]


ASSESSMENT_HEADER = [
    "| variant | comparison | reference | selection-rate ratio | tau | flagged | caveats |",
    "|---|---|---|---|---|---|---|",
]
TEST_HEADER = [
    "| method | groups | statistic | dof | p-value | signed z | caveats |",
    "|---|---|---|---|---|---|---|",
]


def _test_row(d: dict) -> str:
    method = d["method"] + (" (Yates)" if d["continuity_correction"] else "")
    return (
        f"| {method} | {_fmt(d['groups'])} | {_fmt(d['statistic'])} | {_fmt(d['dof'])} "
        f"| {_fmt(d['p_value'])} | {_fmt(d['signed_z'])} | {_fmt(d['caveats'])} |"
    )


def assessment_markdown(assessment: DisparityAssessment) -> str:
    d = round_floats(assessment.to_dict())
    lines = ["## Selection-rate ratio", ""] + ASSESSMENT_HEADER + _assessment_rows(d)
    if d["excluded_groups"]:
        lines += ["", f"Excluded groups: {_fmt(d['excluded_groups'])}"]
    return "\n".join(lines) + "\n"


def test_markdown(result: SignificanceResult) -> str:
    d = round_floats(result.to_dict())
    return "\n".join(["## Significance test", ""] + TEST_HEADER + [_test_row(d)]) + "\n"


def report_markdown(report: AuditReport) -> str:
    d = round_floats(report_to_dict(report))
    cfg = d["config"]
    ev = d["evidence"]
    out = [
        "# Selection-rate audit",
        "",
        f"> {d['disclaimer']}",
        "",
        "## Regulatory context",
        "",
        d["regulatory_context"],
        "",
        "## Configuration",
        "",
    ]
    for key, value in cfg.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={_fmt(v)}" for k, v in value.items())
        out.append(f"- {key}: {_fmt(value)}")
    out += [
        "",
        "## Groups",
        "",
        "| group | favorable | unfavorable | total | selection rate |",
        "|---|---|---|---|---|",
    ]
    for g in d["groups"]:
        out.append(
            f"| {g['group']} | {g['favorable']} | {g['unfavorable']} | {g['total']} "
            f"| {_fmt(g['selection_rate'])} |"
        )
    out += ["", "## Selection-rate ratios", ""] + ASSESSMENT_HEADER
    for p in ev["pairwise"]:
        out += _assessment_rows(p["raw"]) + _assessment_rows(p["symmetrized"])
    out += _assessment_rows(ev["overall"])
    if ev["overall"]["excluded_groups"]:
        out += ["", f"Excluded groups: {_fmt(ev['overall']['excluded_groups'])}"]
    out += ["", "## Significance tests", ""]
    if ev["tests"]:
        out += TEST_HEADER + [_test_row(t) for t in ev["tests"]]
    else:
        out.append("No tests were run.")
    out += [
        "",
        "## Evidence status",
        "",
        f"- evidence_status: {ev['evidence_status']}",
        f"- flagged: {_fmt(d['flagged'])}",
        "",
        "## Caveats",
        "",
    ]
    out += [f"- **{c['code']}**: {c['message']}" for c in d["caveats"]]
    if d["notices"]:
        out += ["", "## Notices", ""] + [f"- {n}" for n in d["notices"]]
    return "\n".join(out) + "\n"


def ranking_markdown(ranking: list[RankedAlternative], utility_floor: float) -> str:
    d = round_floats(ranking_to_dict(ranking, utility_floor))
    out = [
        "# Alternatives ranked by worst-case selection-rate ratio",
        "",
        f"Utility floor: {_fmt(d['utility_floor'])}",
        "",
        "| rank | label | worst-case selection-rate ratio | flagged | utility |",
        "|---|---|---|---|---|",
    ]
    for i, r in enumerate(d["ranking"], 1):
        value = _fmt(r["worst_case_ratio"]) if r["kind"] == "finite" else r["kind"]
        out.append(f"| {i} | {r['label']} | {value} | {_fmt(r['flagged'])} | {_fmt(r['utility'])} |")
    return "\n".join(out) + "\n"
