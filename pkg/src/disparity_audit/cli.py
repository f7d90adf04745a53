"""Command-line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 a ratio was flagged and ``--fail-on-flag`` (or ``fail_on_flag``) is set.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import ratios, significance
from .audit import AuditConfig, rank_alternatives, run_audit
from .errors import ConfigError, DataError
from .io import load_config, load_manifest, load_reference_distribution, read_table
from .report import (
    assessment_markdown,
    ranking_markdown,
    ranking_to_dict,
    render_json,
    report_markdown,
    report_to_dict,
    test_markdown,
)
from .tables import OutcomePolarity

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_FLAGGED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _add_row_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protected", help="protected-attribute column (row-level input)")
    p.add_argument("--outcome", help="outcome column (row-level input)")
    p.add_argument("--favorable", help="outcome value counted as favorable")
    p.add_argument(
        "--unfavorable",
        type=_csv_list,
        help="comma-separated unfavorable values; other values become errors",
    )


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "markdown"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="disparity-audit",
        description="Selection-rate ratios, significance tests and audit reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metric", help="compute one selection-rate ratio")
    p.add_argument("data")
    _add_row_flags(p)
    p.add_argument("--variant", choices=("raw", "symmetrized", "categorical"), default="raw")
    p.add_argument("--reference-group")
    p.add_argument("--comparison-group")
    p.add_argument("--tau", type=float, default=0.8)
    _add_format(p)

    p = sub.add_parser("test", help="run one significance test")
    p.add_argument("data")
    _add_row_flags(p)
    p.add_argument("--method", choices=("chi2", "fisher", "gof", "z"), required=True)
    p.add_argument("--yates", action="store_true")
    p.add_argument("--reference-distribution", help="JSON object of group: proportion")
    p.add_argument("--groups", type=_csv_list, help="comma-separated groups, in order")
    _add_format(p)

    p = sub.add_parser("audit", help="full audit report")
    p.add_argument("data")
    p.add_argument("--config", required=True)
    p.add_argument("--fail-on-flag", action="store_true")
    p.add_argument("--tau", type=float)
    p.add_argument("--alpha", type=float)
    _add_format(p)

    p = sub.add_parser("compare", help="rank alternatives above a utility floor")
    p.add_argument("manifest", help="CSV with header label,data,utility")
    p.add_argument("--utility-floor", type=float, required=True)
    p.add_argument("--config")
    p.add_argument("--tau", type=float)
    _add_format(p)
    return parser


def _polarity(args) -> OutcomePolarity | None:
    if args.favorable is None:
        if args.unfavorable:
            raise UsageError("--unfavorable requires --favorable")
        return None
    unfav = None if args.unfavorable is None else frozenset(args.unfavorable)
    try:
        return OutcomePolarity(args.favorable, unfav)
    except DataError as exc:
        raise UsageError(str(exc)) from None


def _table(args):
    return read_table(args.data, args.protected, args.outcome, _polarity(args))


def cmd_metric(args) -> tuple[str, int]:
    table = _table(args)
    if args.variant == "categorical":
        result = ratios.categorical_worst_case(table, args.tau)
    else:
        if not (args.comparison_group and args.reference_group):
            raise UsageError(f"--variant {args.variant} needs --comparison-group and --reference-group")
        fn = ratios.raw_ratio if args.variant == "raw" else ratios.symmetrized_ratio
        result = fn(table, args.comparison_group.strip(), args.reference_group.strip(), args.tau)
    if args.format == "json":
        return render_json(result.to_dict()), EXIT_OK
    return assessment_markdown(result), EXIT_OK


def cmd_test(args) -> tuple[str, int]:
    if args.yates and args.method != "chi2":
        raise UsageError("--yates applies to --method chi2 only")
    if args.method == "gof" and not args.reference_distribution:
        raise UsageError("--method gof needs --reference-distribution")
    refdist = (
        load_reference_distribution(args.reference_distribution)
        if args.reference_distribution
        else None
    )
    table = _table(args)
    groups = args.groups or table.groups
    if args.method == "gof":
        result = significance.goodness_of_fit({g: table.cell(g)[0] for g in groups}, refdist)
    else:
        view = significance.ContingencyView.from_table(table, groups)
        if args.method == "chi2":
            result = significance.pearson_chi_squared(view, args.yates)
        elif args.method == "fisher":
            result = significance.fisher_exact_2x2(view)
        else:
            result = significance.two_proportion_z(view)
    if args.format == "json":
        return render_json(result.to_dict()), EXIT_OK
    return test_markdown(result), EXIT_OK


def cmd_audit(args) -> tuple[str, int]:
    config = load_config(args.config)
    overrides = {}
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.fail_on_flag:
        overrides["fail_on_flag"] = True
    if overrides:
        config = dataclasses.replace(config, **overrides)
    table = read_table(args.data, config.protected_field, config.outcome_field, config.polarity)
    report = run_audit(table, config)
    text = render_json(report_to_dict(report)) if args.format == "json" else report_markdown(report)
    code = EXIT_FLAGGED if (config.fail_on_flag and report.flagged) else EXIT_OK
    return text, code


def cmd_compare(args) -> tuple[str, int]:
    config = load_config(args.config) if args.config else AuditConfig()
    if args.tau is not None:
        config = dataclasses.replace(config, tau=args.tau)
    candidates = load_manifest(args.manifest, config)
    ranking = rank_alternatives(candidates, args.utility_floor, config)
    if args.format == "json":
        return render_json(ranking_to_dict(ranking, args.utility_floor)), EXIT_OK
    return ranking_markdown(ranking, args.utility_floor), EXIT_OK


COMMANDS = {"metric": cmd_metric, "test": cmd_test, "audit": cmd_audit, "compare": cmd_compare}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
