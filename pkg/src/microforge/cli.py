"""Command-line surface: run, review, score, export, fixtures record.

Exit codes: 0 success, 1 pipeline failure (generation or provider trouble),
2 usage, configuration, or input errors.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from microforge.config import Config, load_config
from microforge.elements import Kind
from microforge.errors import (
    AuthError,
    ConfigError,
    EmptyDeck,
    GenerationFailed,
    MalformedCue,
    MicroforgeError,
    UnrecognizedFormat,
)
from microforge.pipeline import run_pipeline
from microforge.readability import kind_mean_rows
from microforge.review_export import (
    ExportFormat,
    ReviewAction,
    apply_review,
    body_from_dict,
    export,
    load_package,
    save_package,
)

EXIT_OK = 0
EXIT_PIPELINE = 1
EXIT_USAGE = 2

_INPUT_ERRORS = (ConfigError, UnrecognizedFormat, MalformedCue, EmptyDeck, AuthError)


def _err(message: str) -> None:
    print(f"microforge: {message}", file=sys.stderr)


@contextmanager
def _package_lock(path: Path):
    # Advisory lock so two review sessions cannot clobber one package file.
    with open(path, "rb") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _load_config(path: str | None) -> Config:
    return load_config(path) if path else Config()


def cmd_run(args) -> int:
    config = _load_config(args.config)
    if args.mode:
        from dataclasses import replace

        config = replace(config, mode=args.mode)
    package, report = run_pipeline(
        args.transcript,
        args.slides,
        args.out,
        config,
        seed=args.seed,
    )
    print(f"package: {report.package_path}")
    print(f"chunks: {report.chunks}  gateway calls: {report.gateway_calls}")
    for kind, fre, band, n in report.mean_fre:
        print(f"  {kind:<12} mean FRE {fre:8.2f}  {band.value}  ({n} items)")
    for stage, secs in report.stage_seconds.items():
        print(f"  {stage:<8} {secs:.2f}s")
    return EXIT_OK


def cmd_review(args) -> int:
    path = Path(args.package)
    if not path.exists():
        raise ConfigError(f"package file not found: {path}")
    if args.subaction == "list":
        package = load_package(path)
        print(f"{'item_id':<26}  {'kind':<12} {'status':<10} band")
        for item in package.items:
            band = item.readability.band.value if item.readability else "-"
            print(f"{item.item_id:<26}  {item.kind.value:<12} {item.status.value:<10} {band}")
        return EXIT_OK

    edited_body = None
    with _package_lock(path):
        package = load_package(path)
        if args.subaction == "edit":
            if not args.body:
                raise ConfigError("edit requires --body FILE with the replacement body")
            item = package.get_item(args.item_id)
            if item is None:
                from microforge.errors import UnknownItem

                raise UnknownItem(f"no item {args.item_id} in package")
            payload = json.loads(Path(args.body).read_text(encoding="utf-8"))
            edited_body = body_from_dict(item.kind, payload)
        package = apply_review(
            package,
            args.item_id,
            ReviewAction(args.subaction),
            actor=args.actor,
            edited_body=edited_body,
        )
        save_package(package, path)
    print(f"{args.subaction}: {args.item_id}")
    return EXIT_OK


def cmd_score(args) -> int:
    path = Path(args.package)
    if not path.exists():
        raise ConfigError(f"package file not found: {path}")
    package = load_package(path)
    print(f"{'kind':<14} {'mean FRE':>10}  grade band")
    if args.per_item:
        for item in package.items:
            if item.readability:
                print(
                    f"{item.kind.value:<14} {item.readability.fre:>10.2f}  "
                    f"{item.readability.band.value}  [{item.item_id}]"
                )
        return EXIT_OK
    for kind, fre, band, _n in kind_mean_rows(package.items):
        print(f"{kind:<14} {fre:>10.2f}  {band.value}")
    return EXIT_OK


def cmd_export(args) -> int:
    path = Path(args.package)
    if not path.exists():
        raise ConfigError(f"package file not found: {path}")
    package = load_package(path)
    data = export(package, ExportFormat(args.format), allow_unreviewed=args.allow_unreviewed)
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_fixtures_record(args) -> int:
    from dataclasses import replace

    config = replace(_load_config(args.config), mode="record")
    _package, report = run_pipeline(args.transcript, args.slides, args.out, config)
    print(f"recorded fixtures for {report.gateway_calls} calls -> {config.fixtures_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microforge",
        description="Turn lecture transcripts and slides into reviewed microlearning packages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline on one lecture")
    run.add_argument("-t", "--transcript", required=True, help="transcript file (txt/srt/vtt)")
    run.add_argument("-s", "--slides", help="slide-deck text file")
    run.add_argument("-o", "--out", required=True, help="output directory")
    run.add_argument("-c", "--config", help="INI config file")
    run.add_argument("--mode", choices=["live", "record", "replay", "rules"],
                     help="override the configured mode")
    run.add_argument("--seed", type=int, help="seed item ids for reproducible output")
    run.set_defaults(func=cmd_run)

    review = sub.add_parser("review", help="list or review items in a package")
    review.add_argument("package", help="package file")
    review.add_argument("subaction", choices=["list", "approve", "reject", "edit"])
    review.add_argument("item_id", nargs="?", help="item to act on")
    review.add_argument("--actor", default="instructor", help="who is reviewing")
    review.add_argument("--body", help="JSON file with the replacement body (edit)")
    review.set_defaults(func=cmd_review)

    score = sub.add_parser("score", help="print the per-kind readability table")
    score.add_argument("package", help="package file")
    score.add_argument("--per-item", action="store_true", help="one row per item")
    score.set_defaults(func=cmd_score)

    exp = sub.add_parser("export", help="export a package to a derived format")
    exp.add_argument("package", help="package file")
    exp.add_argument("--format", default="package_file",
                     choices=[f.value for f in ExportFormat])
    exp.add_argument("-o", "--out", help="output file (default stdout)")
    exp.add_argument("--allow-unreviewed", action="store_true",
                     help="export even if items are not approved")
    exp.set_defaults(func=cmd_export)

    fixtures = sub.add_parser("fixtures", help="fixture store maintenance")
    fsub = fixtures.add_subparsers(dest="fixtures_command", required=True)
    record = fsub.add_parser("record", help="run the pipeline live and record fixtures")
    record.add_argument("-t", "--transcript", required=True)
    record.add_argument("-s", "--slides")
    record.add_argument("-o", "--out", required=True)
    record.add_argument("-c", "--config", required=True)
    record.set_defaults(func=cmd_fixtures_record)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        if getattr(args, "command", None) == "review" and args.subaction != "list" and not args.item_id:
            raise ConfigError(f"review {args.subaction} requires an item id")
        return args.func(args)
    except _INPUT_ERRORS as exc:
        _err(str(exc))
        return EXIT_USAGE
    except MicroforgeError as exc:
        _err(str(exc))
        if isinstance(exc, GenerationFailed):
            return EXIT_PIPELINE
        return _classify_exit(exc)
    except (OSError, json.JSONDecodeError) as exc:
        _err(str(exc))
        return EXIT_USAGE


def _classify_exit(exc: MicroforgeError) -> int:
    from microforge.errors import (
        DecodeError,
        IllegalTransition,
        InvalidBody,
        MockMiss,
        ProviderError,
        RateLimited,
        SchemaVersionMismatch,
        Timeout,
        UnknownItem,
        UnreviewedContent,
    )

    if isinstance(exc, (RateLimited, ProviderError, Timeout, MockMiss)):
        return EXIT_PIPELINE
    if isinstance(
        exc,
        (DecodeError, SchemaVersionMismatch, UnknownItem, InvalidBody,
         IllegalTransition, UnreviewedContent),
    ):
        return EXIT_USAGE
    return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
