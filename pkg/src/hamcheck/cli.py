"""``hamcheck`` command line.

Exit status is 0 on success, 1 for usage errors and 2 for data errors. Data
errors print one machine-readable line to stderr::

    error code=NoExtremumFound message="..."
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from pathlib import Path

from . import reports
from .analytics import DEFAULT_REFERENCE_LINE, Dimension, class_distribution, location_consistency
from .codec import (
    MultiLabel,
    build_index,
    decode,
    decoding_efficiency,
    decoding_efficiency_by_language,
    encode,
    validate,
)
from .corpus import ingest_corpus
from .errors import HamcheckError, LabelParseError, SchemaError, WriteFailed
from .inventory import load_inventory
from .kinematics import (
    Hand,
    Norm,
    TopologyConfig,
    config_for,
    detect_initial_frame,
    load_landmark_series,
    pairwise_distance,
)
from .parser import SourceForm, parse_label, serialize

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
INVENTORY_ENV = "HAMCHECK_INVENTORY"
DEFAULT_V_MIN = 0.5
DEFAULT_WINDOW = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--inventory", type=Path,
                   help=f"symbol manifest CSV (default: ${INVENTORY_ENV} or the bundled reference)")
    g.add_argument("--topology-config", type=Path, help="landmark role mapping JSON")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--strict", action="store_true", help="treat parser warnings as errors")
    g.add_argument("--per-language", action="store_true",
                   help="eta: also report each language separately")
    g.add_argument("--hand", choices=("right", "left", "both"), default=None)
    g.add_argument("--v-min", type=float, default=None, help=f"visibility threshold (default {DEFAULT_V_MIN})")
    g.add_argument("--window", type=int, default=None,
                   help=f"moving-average width, odd (default {DEFAULT_WINDOW})")
    g.add_argument("--out", type=Path, help="write the report here instead of stdout")
    g.add_argument("--corpus", type=Path, help="corpus TSV manifest")
    g.add_argument("--dimension", choices=("tb", "lr"), default=None)
    g.add_argument("--reference-line", default=None,
                   help=f"top/bottom class kept for left/right analysis (default {DEFAULT_REFERENCE_LINE})")
    g.add_argument("--frame", type=int, default=None, help="distance: frame number to measure at")
    g.add_argument("--histogram", type=Path, help="eta: also write the collision histogram CSV")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="hamcheck", description="Sign label parsing, encoding and consistency checks.")
    groups = parser.add_subparsers(dest="group", required=True, metavar="{label,pose,report}")

    label = groups.add_parser("label", help="parse, encode and decode labels")
    sub = label.add_subparsers(dest="command", required=True)
    p = sub.add_parser("parse", parents=[common], help="print diagnostics and the canonical form")
    p.add_argument("label")
    p = sub.add_parser("encode", parents=[common], help="print the multilabel of a label")
    p.add_argument("label")
    p = sub.add_parser("decode", parents=[common], help="list corpus glosses carrying a multilabel")
    p.add_argument("multilabel", help="10 comma-separated integers, -1 for absent "
                   "(put '--' before it when it starts with a minus sign)")
    sub.add_parser("eta", parents=[common], help="decoding efficiency of a corpus")

    pose = groups.add_parser("pose", help="landmark series tools")
    sub = pose.add_subparsers(dest="command", required=True)
    p = sub.add_parser("initial-frame", parents=[common], help="detect the initial frame")
    p.add_argument("series", type=Path)
    p = sub.add_parser("distance", parents=[common], help="L1 and L2 distance between two roles")
    p.add_argument("series", type=Path)
    p.add_argument("role_a")
    p.add_argument("role_b")

    report = groups.add_parser("report", help="corpus-level reports")
    sub = report.add_subparsers(dest="command", required=True)
    sub.add_parser("consistency", parents=[common], help="per-class nose-to-hand distances")
    sub.add_parser("distribution", parents=[common], help="per-block class counts")
    return parser


# flag -> commands accepting it
_FLAG_SCOPE = {
    "per_language": {"eta"},
    "histogram": {"eta"},
    "dimension": {"consistency"},
    "reference_line": {"consistency"},
    "frame": {"distance"},
    "out": {"eta", "consistency", "distribution"},
    "corpus": {"decode", "eta", "consistency", "distribution"},
    "strict": {"parse", "encode", "decode", "eta", "consistency", "distribution"},
    "hand": {"initial-frame", "distance", "consistency"},
    "v_min": {"initial-frame", "distance", "consistency"},
    "window": {"initial-frame", "distance", "consistency"},
    "topology_config": {"initial-frame", "distance", "consistency"},
}


def validate_args(args) -> None:
    """Reject invalid flag combinations before anything is read or written."""
    for flag, commands in _FLAG_SCOPE.items():
        value = getattr(args, flag)
        if value not in (None, False) and args.command not in commands:
            raise UsageError(f"--{flag.replace('_', '-')} does not apply to '{args.command}'")
    if args.command in {"decode", "eta", "consistency", "distribution"} and args.corpus is None:
        raise UsageError(f"'{args.command}' needs --corpus")
    if args.window is not None and (args.window < 1 or args.window % 2 == 0):
        raise UsageError("--window must be a positive odd integer")
    if args.v_min is not None and not 0.0 <= args.v_min <= 1.0:
        raise UsageError("--v-min must lie in [0, 1]")
    if args.hand == "both" and args.command != "initial-frame":
        raise UsageError("--hand both is only accepted by 'initial-frame'")
    if args.reference_line is not None and args.dimension != "lr":
        raise UsageError("--reference-line needs --dimension lr")
    if args.histogram is not None and args.out is not None and args.histogram == args.out:
        raise UsageError("--histogram and --out must differ")
    if args.command == "decode":
        try:
            args.multilabel = MultiLabel.from_text(args.multilabel)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# -- helpers -----------------------------------------------------------------

def _error_line(exc: HamcheckError) -> str:
    return f"error code={exc.code} message={json.dumps(str(exc), ensure_ascii=False)}"


def _inventory(args):
    path = args.inventory or os.environ.get(INVENTORY_ENV) or None
    return load_inventory(path)


def _topology(args) -> TopologyConfig:
    try:
        cfg = TopologyConfig.load(args.topology_config) if args.topology_config else TopologyConfig.default()
        return cfg.with_params(v_min=args.v_min, window=args.window)
    except (ValueError, TypeError, AttributeError) as exc:
        raise SchemaError(f"topology config: {exc}") from None


def _hand(args) -> Hand:
    return Hand(args.hand or "right")


def _emit(text: str, args, stdout) -> None:
    if args.out is None:
        stdout.write(text)
        return
    try:
        args.out.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise WriteFailed(f"{args.out}: {exc}") from None


def _summary_stream(args, stdout, stderr):
    return stdout if args.out is not None else stderr


# -- commands ----------------------------------------------------------------

def cmd_label(args, stdout, stderr) -> int:
    inv = _inventory(args)
    if args.command in ("parse", "encode"):
        sign, diags = parse_label(args.label, inv, strict=args.strict)
        stream = stdout if args.command == "parse" else stderr
        for d in diags:
            print(d, file=stream)
        if sign is None:
            raise LabelParseError(diags)
        if args.command == "parse":
            print(serialize(sign, inv, SourceForm.ALIAS), file=stdout)
        else:
            print(encode(sign, inv).to_text(), file=stdout)
        return EXIT_OK

    corpus = ingest_corpus(args.corpus, inv, strict=args.strict)
    if args.command == "decode":
        validate(args.multilabel, inv)
        texts = {r.gloss_id: r.gloss_text for r in corpus.records}
        matches = decode(args.multilabel, build_index(corpus), inv.version)
        for key in matches:
            print(f"{key.gloss_id}\t{key.language}\t{texts[key.gloss_id]}", file=stdout)
        if not matches:
            print("no matching gloss", file=stderr)
        return EXIT_OK

    overall = decoding_efficiency(corpus)
    if args.per_language:
        table = {"ALL": overall, **decoding_efficiency_by_language(corpus)}
        if args.format == "json":
            text = json.dumps({k: reports.to_dict(v) for k, v in table.items()},
                              indent=2, sort_keys=True) + "\n"
        else:
            text = reports.eta_table_csv(table)
    else:
        text = reports.to_json(overall) if args.format == "json" else reports.to_csv(overall)
    _emit(text, args, stdout)
    if args.histogram is not None:
        try:
            args.histogram.write_text(reports.histogram_csv(overall), encoding="utf-8", newline="")
        except OSError as exc:
            raise WriteFailed(f"{args.histogram}: {exc}") from None
    print(f"records={len(corpus.records)} parse_failures={len(corpus.failures)} "
          f"eta_percent={overall.eta_percent!r}", file=_summary_stream(args, stdout, stderr))
    return EXIT_OK


def cmd_pose(args, stdout, stderr) -> int:
    series = load_landmark_series(args.series)
    cfg = config_for(series, _topology(args))
    if args.command == "initial-frame":
        hands = (Hand.RIGHT, Hand.LEFT) if args.hand == "both" else (_hand(args),)
        failure = None
        for hand in hands:
            try:
                result = detect_initial_frame(series, cfg, hand)
            except HamcheckError as exc:
                print(f"{hand.value}: {_error_line(exc)}", file=stdout)
                failure = failure or exc
                continue
            frames = ",".join(str(f) for f in result.frames)
            print(f"{hand.value}: frame={result.chosen} candidates={len(result.candidates)} "
                  f"frames={frames}", file=stdout)
            for c in result.candidates:
                print(f"  {c.landmark} {c.axis} {c.kind} {c.frame}", file=stdout)
            for note in result.diagnostics:
                print(f"  note: {note}", file=stdout)
        if failure is not None:
            raise failure
        return EXIT_OK

    frame = args.frame
    source = "given"
    if frame is None:
        frame = detect_initial_frame(series, cfg, _hand(args)).chosen
        source = "detected"
    l1 = pairwise_distance(series, frame, args.role_a, args.role_b, Norm.L1, cfg)
    l2 = pairwise_distance(series, frame, args.role_a, args.role_b, Norm.L2, cfg)
    print(f"{args.role_a} {args.role_b} frame={frame} ({source}) L1={l1!r} L2={l2!r}", file=stdout)
    return EXIT_OK


def cmd_report(args, stdout, stderr) -> int:
    inv = _inventory(args)
    corpus = ingest_corpus(args.corpus, inv, strict=args.strict)
    summary = _summary_stream(args, stdout, stderr)
    if args.command == "consistency":
        cfg = _topology(args)
        dimension = Dimension(args.dimension or "tb")
        reference = args.reference_line or DEFAULT_REFERENCE_LINE
        print(f"# corpus={corpus.name} dimension={dimension.value} hand={_hand(args).value} "
              f"v_min={cfg.v_min!r} window={cfg.window} reference_line={reference}", file=summary)
        report = location_consistency(corpus, dimension, _hand(args), cfg, reference)
        frame_failures = len(report.excluded)
    else:
        report = class_distribution(corpus)
        frame_failures = 0
    text = reports.to_json(report) if args.format == "json" else reports.to_csv(report)
    _emit(text, args, stdout)
    print(f"records={len(corpus.records)} parse_failures={len(corpus.failures)} "
          f"frame_failures={frame_failures}", file=summary)
    if corpus.failures:
        codes = " ".join(f"{k}={v}" for k, v in corpus.failure_summary().items())
        print(f"parse_failure_codes {codes}", file=summary)
    if args.command == "consistency":
        for gid, code in report.excluded.items():
            print(f"excluded {gid} code={code}", file=summary)
    return EXIT_OK


_COMMANDS = {"label": cmd_label, "pose": cmd_pose, "report": cmd_report}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        validate_args(args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"hamcheck: error: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.group](args, stdout, stderr)
    except HamcheckError as exc:
        print(_error_line(exc), file=stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error code=FileUnreadable message={json.dumps(str(exc))}", file=stderr)
        return EXIT_DATA


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
