"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed at the end of the pytest
run (see ``conftest.py``).
"""

import math
import random
import time
from fractions import Fraction

import pytest

import oracles
from disparity_audit import _pykernels, kernels
from disparity_audit.audit import (
    NOT_A_LEGAL_FINDING,
    SMALL_NUMBERS,
    SMALLER_DIFFERENCES_SIGNIFICANT,
    AuditConfig,
    run_audit,
)
from disparity_audit.ratios import (
    DEGENERATE_RATES,
    EXCLUDED_EMPTY_GROUPS,
    categorical_worst_case,
    raw_ratio,
    symmetrized_ratio,
)
from disparity_audit.significance import (
    LOW_EXPECTED_CELL,
    ContingencyView,
    fisher_exact_2x2,
    pearson_chi_squared,
    regularized_upper_gamma,
)
from disparity_audit.tables import GroupOutcomeTable, flip_polarity
from golden_cases import CASES, GOLDEN, run_cli

RESULTS = []


def record(criterion, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, detail


def two_group(p0, n0, p1, n1):
    return GroupOutcomeTable({"G0": (p0, n0), "G1": (p1, n1)})


def test_ac1_fisher_matches_enumeration():
    tables = [
        (a, b, c, d)
        for n in range(1, 26)
        for a in range(n + 1)
        for b in range(n - a + 1)
        for c in range(n - a - b + 1)
        for d in [n - a - b - c]
    ]
    start = time.perf_counter()
    worst = 0.0
    for cells in tables:
        expected = float(oracles.fisher_two_sided_exact(*cells))
        got = fisher_exact_2x2(ContingencyView.of([cells[:2], cells[2:]])).p_value
        worst = max(worst, abs(got - expected))
        if kernels.BACKEND != "python":
            worst = max(worst, abs(_pykernels.fisher_two_sided(*cells)[1] - expected))
    elapsed = time.perf_counter() - start
    record(
        "AC1 Fisher exact vs enumeration",
        worst <= 1e-10 and elapsed < 60,
        f"{len(tables)} tables, max |diff| {worst:.2e} (tol 1e-10), {elapsed:.1f}s (limit 60s)",
    )


def test_ac2_chi2_closed_form():
    rng = random.Random(20240601)
    worst = 0.0
    n = 0
    while n < 200:
        a, b, c, d = (rng.randint(0, 80) for _ in range(4))
        if 0 in (a + b, c + d, a + c, b + d):
            continue
        r = pearson_chi_squared(ContingencyView.of([[a, b], [c, d]]))
        worst = max(worst, abs(r.p_value - oracles.erfc_sqrt_half(r.statistic)))
        n += 1
    record(
        "AC2 chi-squared p = erfc(sqrt(chi2/2))",
        worst <= 1e-10,
        f"200 tables, max |diff| {worst:.2e} (tol 1e-10)",
    )


def test_ac3_incomplete_gamma_identities():
    worst = 0.0
    for x in (0.0, 1.0, 5.0):
        worst = max(worst, abs(regularized_upper_gamma(1, x) / math.exp(-x) - 1))
    for i in range(1, 21):
        s = i / 2
        for x in (0.1, 1.0, 10.0, 100.0):
            lhs = regularized_upper_gamma(s + 1, x)
            rhs = regularized_upper_gamma(s, x) + math.exp(
                s * math.log(x) - x - math.lgamma(s + 1)
            )
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
    record(
        "AC3 incomplete gamma identities",
        worst <= 1e-9,
        f"Q(1,x)=exp(-x) and recurrence over 80 grid points, max rel err {worst:.2e} (tol 1e-9)",
    )


def test_ac4_ratio_algebra():
    rng = random.Random(11)
    failures = []
    for _ in range(10_000):
        p0, n0, p1, n1 = (rng.randint(1, 500) for _ in range(4))
        k = rng.randint(2, 50)
        t = two_group(p0, n0, p1, n1)
        ab = raw_ratio(t, "G0", "G1").value.value
        ba = raw_ratio(t, "G1", "G0").value.value
        sym = symmetrized_ratio(t, "G0", "G1").value.value
        cat = categorical_worst_case(t).value.value
        s = t.scaled(k)
        checks = {
            "reciprocal": abs(ab * ba - 1) <= 1e-12,
            "identity": abs(ab - (1 + n1 / p1) / (1 + n0 / p0)) <= 1e-12,
            "swap": symmetrized_ratio(t, "G1", "G0").value.value == sym,
            "k2": cat == sym,
            "scale": abs(raw_ratio(s, "G0", "G1").value.value - ab) <= 1e-12
            and abs(symmetrized_ratio(s, "G0", "G1").value.value - sym) <= 1e-12
            and abs(categorical_worst_case(s).value.value - cat) <= 1e-12,
        }
        failures += [(name, (p0, n0, p1, n1, k)) for name, ok in checks.items() if not ok]
    record(
        "AC4 ratio algebra",
        not failures,
        f"10000 tables x 5 properties, {len(failures)} failures"
        + (f", first {failures[0]}" if failures else ""),
    )


def test_ac5_band_equivalence():
    rng = random.Random(5)
    mismatches = 0
    boundary_hits = 0
    for _ in range(20_000):
        n0, n1 = rng.randint(1, 40), rng.randint(1, 40)
        p0, p1 = rng.randint(1, n0), rng.randint(1, n1)
        t = two_group(p0, n0 - p0, p1, n1 - p1)
        r = raw_ratio(t, "G0", "G1", 0.8)
        flagged = symmetrized_ratio(t, "G0", "G1", 0.8).flagged
        outside_band = not (0.8 < r.value.value < 1.25)
        exact = r.value.exact
        # toolkit rule: fair iff 1 - min(DI, 1/DI) < 0.2
        toolkit_unfair = not (1 - min(exact, 1 / exact) < Fraction(1, 5))
        boundary_hits += exact in (Fraction(4, 5), Fraction(5, 4))
        mismatches += (flagged != outside_band) + (flagged != toolkit_unfair)
    record(
        "AC5 band equivalence",
        mismatches == 0 and boundary_hits > 0,
        f"20000 fixtures ({boundary_hits} on the 0.8/1.25 boundary), {mismatches} mismatches",
    )


def test_ac6_boundary_fixture():
    a = raw_ratio(GroupOutcomeTable({"X0": (4, 6), "X1": (5, 5)}), "X0", "X1", 0.8)
    record(
        "AC6 boundary fixture",
        a.value.value == 0.8 and a.flagged,
        f"raw ratio {a.value.value!r}, flagged={a.flagged}",
    )


CAVEAT_FIXTURES = {
    SMALL_NUMBERS: ({"X0": (4, 6), "X1": (5, 5)}, "X1", ("fisher_exact",)),
    SMALLER_DIFFERENCES_SIGNIFICANT: (
        {"X0": (425, 575), "X1": (500, 500)},
        "X1",
        ("pearson_chi2", "fisher_exact"),
    ),
    DEGENERATE_RATES: ({"A": (0, 5), "B": (0, 9)}, "A", ("fisher_exact",)),
    EXCLUDED_EMPTY_GROUPS: ({"A": (10, 10), "B": (10, 10), "E": (0, 0)}, "A", ("pearson_chi2",)),
    LOW_EXPECTED_CELL: ({"A": (2, 3), "B": (3, 2)}, "A", ("pearson_chi2",)),
}


def test_ac7_caveat_truth_table():
    problems = []
    for code, (cells, ref, tests) in CAVEAT_FIXTURES.items():
        report = run_audit(GroupOutcomeTable(cells), AuditConfig(reference_group=ref, tests=tests))
        codes = [c.code for c in report.caveats]
        if codes.count(code) != 1:
            problems.append(f"{code} appears {codes.count(code)} times")
        if SMALL_NUMBERS in codes and SMALLER_DIFFERENCES_SIGNIFICANT in codes:
            problems.append(f"{code} fixture carries both exclusive caveats")
        if codes.count(NOT_A_LEGAL_FINDING) != 1:
            problems.append(f"{code} fixture lacks {NOT_A_LEGAL_FINDING}")
    record(
        "AC7 caveat truth table",
        not problems,
        f"{len(CAVEAT_FIXTURES)} fixtures" + (f"; {'; '.join(problems)}" if problems else ", each caveat driven once, exclusion holds"),
    )


def test_ac8_report_contract():
    problems = []
    audits = [n for n in CASES if n.startswith("audit")]
    for name in audits:
        golden = (GOLDEN / name).read_text(encoding="utf-8")
        for needle in ("not a disparate-impact finding", "29 CFR §1607.4(D)", NOT_A_LEGAL_FINDING):
            if needle not in golden:
                problems.append(f"{name} lacks {needle!r}")
        first, second = run_cli(CASES[name]), run_cli(CASES[name])
        if first != second or first[1] != golden:
            problems.append(f"{name} output not byte-identical")
    for name in CASES:
        if "disparate impact" in (GOLDEN / name).read_text(encoding="utf-8").lower():
            problems.append(f"{name} uses the label 'disparate impact'")
    record(
        "AC8 report contract",
        not problems,
        f"{len(audits)} audit goldens, {len(CASES)} outputs scanned"
        + (f"; {'; '.join(problems)}" if problems else ""),
    )


def test_ac9_polarity_witness():
    t = GroupOutcomeTable({"X0": (4, 6), "X1": (5, 5)})
    original = raw_ratio(t, "X0", "X1").value.value
    flipped = raw_ratio(flip_polarity(t), "X0", "X1").value.value
    ok = abs(flipped - original) > 1e-6 and abs(flipped - 1 / original) > 1e-6
    record(
        "AC9 polarity non-reciprocality",
        ok,
        f"favorable {original:.6g}, flipped {flipped:.6g}, reciprocal {1 / original:.6g}",
    )
