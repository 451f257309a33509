"""Command line workbench for catalogs and assessment files.

Exit status contract: 0 success, 1 validation or score failure, 2 usage
error, 3 unreadable or malformed input file. Commands that write never
leave a partially written file behind on failure; the assessment is saved
once, atomically, after every operation has succeeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

from . import assessment as asmt
from . import catalog as cat
from .effects import effects_map
from .errors import (
    AssessmentError,
    AssessmentFormatError,
    CatalogError,
    DigestMismatchError,
    ReportError,
)
from .report import (
    build_radar_spec,
    compliance_table,
    radar_svg,
    render_effects,
    render_snapshot_text,
    snapshot,
)
from .scoring import Verdict, overall_compliance

EXIT_OK = 0
EXIT_FAILURE = 1  # validation findings, score below threshold, domain rule broken
EXIT_USAGE = 2
EXIT_INPUT = 3  # missing, unreadable, or malformed input file

_HIPAA_ALIASES = {
    "admin": cat.HipaaType.ADMINISTRATIVE,
    "administrative": cat.HipaaType.ADMINISTRATIVE,
    "tech": cat.HipaaType.TECHNICAL,
    "technical": cat.HipaaType.TECHNICAL,
    "phys": cat.HipaaType.PHYSICAL,
    "physical": cat.HipaaType.PHYSICAL,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assesskit",
        description="Security posture assessment workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    catalog_p = sub.add_parser("catalog", help="catalog tooling")
    catalog_sub = catalog_p.add_subparsers(dest="subcommand", required=True)
    validate_p = catalog_sub.add_parser("validate", help="validate a catalog file")
    validate_p.add_argument("path", help="catalog JSON file")

    init_p = sub.add_parser("init", help="start a new assessment file")
    init_p.add_argument("catalog_path", help="catalog JSON file")
    init_p.add_argument("--level", required=True, choices=["medium", "high"])
    init_p.add_argument("--org", required=True, help="organization under assessment")
    init_p.add_argument("--threshold", type=float, default=asmt.DEFAULT_THRESHOLD)
    init_p.add_argument("--out", required=True, help="assessment file to create")
    init_p.add_argument("--force", action="store_true", help="overwrite an existing file")

    answer_p = sub.add_parser("answer", help="record a response for one requirement")
    answer_p.add_argument("assessment_path")
    answer_p.add_argument("requirement_id", help="e.g. IR.3")
    answer_p.add_argument(
        "--sat",
        required=True,
        choices=["Y", "P", "A", "N", "D", "PL", "PM", "PH"],
        help="satisfaction code; PL/PM/PH preset partial at 0.25/0.50/0.75",
    )
    answer_p.add_argument("--partial", help="partial credit in (0, 1), required with --sat P")
    answer_p.add_argument("--statement", default="", help="satisfying statement")
    answer_p.add_argument("--name", action="append", default=[], dest="names")
    answer_p.add_argument("--tool", action="append", default=[], dest="tools")
    answer_p.add_argument("--hipaa", action="append", default=[], dest="hipaa")
    answer_p.add_argument(
        "--odp",
        action="append",
        default=[],
        metavar="ORDINAL=VALUE",
        help="assign an organization-defined parameter, e.g. --odp 1='12 hours'",
    )
    answer_p.add_argument("--by", default="", help="who recorded the response")
    _add_catalog_options(answer_p)

    methods_p = sub.add_parser("methods", help="set method rigor for an enhanced requirement")
    methods_p.add_argument("assessment_path")
    methods_p.add_argument("requirement_id")
    for method in ("examine", "interview", "test"):
        methods_p.add_argument(
            f"--{method}",
            metavar="DEPTH,COVERAGE",
            help=f"{method} depth and coverage: basic, focused, or comprehensive",
        )
    _add_catalog_options(methods_p)

    score_p = sub.add_parser("score", help="print the compliance table")
    score_p.add_argument("assessment_path")
    score_p.add_argument("--strict", action="store_true",
                         help="exit 1 when aggregate compliance misses the threshold")
    score_p.add_argument("--format", choices=["csv", "table"], default="csv")
    _add_catalog_options(score_p)

    report_p = sub.add_parser("report", help="generate a report document")
    report_p.add_argument("assessment_path")
    report_p.add_argument(
        "--kind", required=True, choices=["snapshot", "compliance", "effects", "radar"]
    )
    report_p.add_argument("--out", help="output file (stdout when omitted)")
    _add_catalog_options(report_p)

    diff_p = sub.add_parser("diff", help="compare two assessment files")
    diff_p.add_argument("old_path")
    diff_p.add_argument("new_path")
    diff_p.add_argument("--format", choices=["table", "csv"], default="table")
    _add_catalog_options(diff_p)

    return parser


def _add_catalog_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--catalog",
        help="catalog JSON file (defaults to the packaged reference catalog)",
    )
    parser.add_argument(
        "--allow-digest-mismatch",
        action="store_true",
        help="load an assessment even when its catalog digest does not match",
    )


def _usage(message: str) -> int:
    print(f"usage error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _load_catalog(args: argparse.Namespace) -> cat.Catalog:
    path = args.catalog or cat.reference_catalog_path()
    return cat.parse_catalog(Path(path).read_text(encoding="utf-8"))


def _load_assessment(path: str, args: argparse.Namespace) -> tuple[asmt.Assessment, cat.Catalog]:
    catalog = _load_catalog(args)
    a = asmt.load_assessment(
        path, catalog, allow_digest_mismatch=args.allow_digest_mismatch
    )
    return a, catalog


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.tmp.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


# ---------------------------------------------------------------------------
# Commands

def cmd_catalog_validate(args: argparse.Namespace) -> int:
    source = Path(args.path).read_text(encoding="utf-8")
    _, report = cat.inspect_catalog(source)
    c = report.counts
    print(f"families={c.families} base={c.base} enhanced={c.enhanced} total={c.total}")
    for finding in report.findings:
        print(f"{finding.level}: {finding.message} ({finding.location})")
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_init(args: argparse.Namespace) -> int:
    if not 0.0 <= args.threshold <= 1.0:
        return _usage(f"--threshold must be within [0, 1], got {args.threshold}")
    out = Path(args.out)
    if out.exists() and not args.force:
        print(f"error: {out} already exists (use --force to overwrite)", file=sys.stderr)
        return EXIT_FAILURE
    catalog = cat.parse_catalog(Path(args.catalog_path).read_text(encoding="utf-8"))
    view = cat.select_level(catalog, cat.SecurityLevel(args.level))
    a = asmt.new_assessment(view, args.org, args.threshold)
    asmt.save_assessment(a, out)
    print(
        f"initialized {out}: level={args.level} "
        f"requirements={view.requirement_count} threshold={args.threshold}"
    )
    return EXIT_OK


def cmd_answer(args: argparse.Namespace) -> int:
    sat_flag = args.sat
    partial_value: float | None = None
    if sat_flag in asmt.PARTIAL_SHORTCUTS:
        if args.partial is not None:
            return _usage(f"--sat {sat_flag} already sets the partial value; drop --partial")
        satisfaction = asmt.Satisfaction.PARTIAL
        partial_value = asmt.PARTIAL_SHORTCUTS[sat_flag]
    else:
        satisfaction = asmt.Satisfaction(sat_flag)
        if satisfaction is asmt.Satisfaction.PARTIAL:
            if args.partial is None:
                return _usage("--sat P requires --partial")
            try:
                partial_value = float(args.partial)
            except ValueError:
                return _usage(f"--partial must be a number, got {args.partial!r}")
            if not 0.0 < partial_value < 1.0:
                return _usage(f"--partial must be strictly between 0 and 1, got {partial_value}")
        elif args.partial is not None:
            return _usage(f"--partial only applies with --sat P, not --sat {sat_flag}")

    hipaa: set[cat.HipaaType] = set()
    for word in args.hipaa:
        key = word.strip().lower()
        if key not in _HIPAA_ALIASES:
            return _usage(f"unknown HIPAA type {word!r} (administrative, technical, physical)")
        hipaa.add(_HIPAA_ALIASES[key])

    odp_assignments: list[tuple[int, str]] = []
    for raw in args.odp:
        ordinal_text, sep, value = raw.partition("=")
        if not sep:
            return _usage(f"--odp needs ORDINAL=VALUE, got {raw!r}")
        try:
            ordinal = int(ordinal_text)
        except ValueError:
            return _usage(f"--odp ordinal must be an integer, got {ordinal_text!r}")
        odp_assignments.append((ordinal, value))

    a, _ = _load_assessment(args.assessment_path, args)
    entry = asmt.ResponseEntry(
        satisfaction=satisfaction,
        partial_value=partial_value,
        satisfying_statement=args.statement,
        names=tuple(args.names),
        validation_tools=tuple(args.tools),
        hipaa_types=frozenset(hipaa),
        recorded_by=args.by,
    )
    a = asmt.record_response(a, args.requirement_id, entry)
    for ordinal, value in odp_assignments:
        a = asmt.assign_odp(a, args.requirement_id, ordinal, value)
    asmt.save_assessment(a, args.assessment_path)
    progress = asmt.completion(a)
    print(
        f"{args.requirement_id} <- {satisfaction.code} "
        f"(answered {progress.answered}/{progress.total}, revision {a.revision})"
    )
    return EXIT_OK


def _parse_method_pair(flag: str, raw: str) -> tuple[asmt.Attribute, asmt.Attribute] | int:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        return _usage(f"--{flag} needs DEPTH,COVERAGE, got {raw!r}")
    try:
        return (asmt.Attribute(parts[0]), asmt.Attribute(parts[1]))
    except ValueError:
        return _usage(
            f"--{flag} attributes must be basic, focused, or comprehensive; got {raw!r}"
        )


def cmd_methods(args: argparse.Namespace) -> int:
    provided: dict[str, tuple[asmt.Attribute, asmt.Attribute]] = {}
    for method in ("examine", "interview", "test"):
        raw = getattr(args, method)
        if raw is None:
            continue
        pair = _parse_method_pair(method, raw)
        if isinstance(pair, int):
            return pair
        provided[method] = pair
    if not provided:
        return _usage("provide at least one of --examine, --interview, --test")

    a, _ = _load_assessment(args.assessment_path, args)
    existing = a.method_matrices.get(args.requirement_id, asmt.MethodMatrix())
    specs = {}
    for method in ("examine", "interview", "test"):
        current: asmt.MethodSpec = getattr(existing, method)
        if method in provided:
            depth, coverage = provided[method]
            specs[method] = asmt.MethodSpec(depth, coverage, current.evidence)
        else:
            specs[method] = current
    a = asmt.set_method_matrix(a, args.requirement_id, asmt.MethodMatrix(**specs))
    asmt.save_assessment(a, args.assessment_path)
    summary = ", ".join(
        f"{name}={pair[0].value}/{pair[1].value}" for name, pair in provided.items()
    )
    print(f"{args.requirement_id} methods: {summary} (revision {a.revision})")
    return EXIT_OK


def _score_table(score) -> str:
    rows = [["family", "points", "count", "percent", "verdict"]]
    for fs in score.family_scores:
        rows.append(
            [
                fs.family_code,
                _fmt_points(fs.points),
                str(fs.requirement_count),
                _fmt_percent(fs.fraction),
                score.family_verdicts[fs.family_code].value,
            ]
        )
    rows.append(
        [
            "TOTAL",
            _fmt_points(score.total_points),
            str(score.total_requirements),
            _fmt_percent(score.fraction),
            score.aggregate_verdict.value,
        ]
    )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = [
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def _fmt_points(points: float) -> str:
    from .report import format_points

    return format_points(points)


def _fmt_percent(fraction: float) -> str:
    from .report import format_percent

    return format_percent(fraction)


def cmd_score(args: argparse.Namespace) -> int:
    a, _ = _load_assessment(args.assessment_path, args)
    score = overall_compliance(a)
    if args.format == "csv":
        sys.stdout.write(compliance_table(score))
    else:
        sys.stdout.write(_score_table(score))
    if args.strict and score.aggregate_verdict is Verdict.FAIL:
        print(
            f"aggregate compliance {_fmt_percent(score.fraction)}% is below "
            f"threshold {_fmt_percent(score.threshold)}%",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    a, _ = _load_assessment(args.assessment_path, args)
    if args.kind == "snapshot":
        text = render_snapshot_text(snapshot(a))
    elif args.kind == "compliance":
        text = compliance_table(overall_compliance(a))
    elif args.kind == "effects":
        text = render_effects(effects_map(a)).table
    else:  # radar
        text = radar_svg(build_radar_spec(overall_compliance(a)))
    if args.out:
        _atomic_write_text(Path(args.out), text)
        print(f"wrote {args.kind} report to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_diff(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args)
    old = asmt.load_assessment(
        args.old_path, catalog, allow_digest_mismatch=args.allow_digest_mismatch
    )
    new = asmt.load_assessment(
        args.new_path, catalog, allow_digest_mismatch=args.allow_digest_mismatch
    )
    entries = asmt.diff_assessments(old, new)
    if args.format == "csv":
        import csv as csv_mod
        import io

        out = io.StringIO()
        writer = csv_mod.writer(out, lineterminator="\n")
        writer.writerow(["requirement", "field", "before", "after"])
        for entry in entries:
            writer.writerow(
                [
                    entry.requirement_id,
                    entry.field,
                    entry.before if entry.before is not None else "",
                    entry.after if entry.after is not None else "",
                ]
            )
        sys.stdout.write(out.getvalue())
    else:
        for entry in entries:
            before = entry.before if entry.before is not None else "-"
            after = entry.after if entry.after is not None else "-"
            print(f"{entry.requirement_id} {entry.field}: {before} -> {after}")
    return EXIT_OK


_COMMANDS = {
    ("catalog", "validate"): cmd_catalog_validate,
    ("init", None): cmd_init,
    ("answer", None): cmd_answer,
    ("methods", None): cmd_methods,
    ("score", None): cmd_score,
    ("report", None): cmd_report,
    ("diff", None): cmd_diff,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    handler = _COMMANDS[(args.command, getattr(args, "subcommand", None))]
    try:
        return handler(args)
    except DigestMismatchError as exc:
        print(
            f"error: {exc} (use --allow-digest-mismatch to load anyway)",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    except AssessmentFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CatalogError as exc:
        print(f"error: catalog: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssessmentError, ReportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
