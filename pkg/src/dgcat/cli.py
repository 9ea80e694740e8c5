"""Command-line entry point: ``dgcat <command> --input <file> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from .commands import COMMANDS, EXIT_INPUT, RunReport, run
from .workspace import WorkspaceError, load_workspace, parse_workspace


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dgcat", description="Exact computations with dg categories.")
    ap.add_argument("command", choices=sorted(COMMANDS) + ["run"],
                    help="run executes every command of the workspace; others run only the matching ones")
    ap.add_argument("--input", "-i", help="workspace file (YAML)")
    ap.add_argument("--max-length", type=int, help="truncation length N for quotient commands")
    ap.add_argument("--depth", type=int, help="p_max for gamma, tor-oracle and stratifying")
    ap.add_argument("--degree", type=int, help="cohomological degree")
    ap.add_argument("--window", type=int, help="stabilization window")
    ap.add_argument("--output", "-o", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("text", "structured"), default="text")
    return ap


def _emit(report: RunReport, fmt: str, out):
    if fmt == "structured":
        out.write(json.dumps(report.to_dict(), indent=2, sort_keys=False, default=str) + "\n")
    else:
        out.write(report.text() + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = RunReport()
    if args.command == "corpus" and not args.input:
        ws = parse_workspace("commands: [{cmd: corpus}]")
    elif not args.input:
        report.input_error = "--input is required for %s" % args.command
        ws = None
    else:
        try:
            ws = load_workspace(args.input)
        except (OSError, WorkspaceError) as exc:
            report.input_error = str(exc)
            ws = None
    if ws is not None:
        only = None if args.command == "run" else args.command
        if only and not any(c["cmd"] == only for c in ws.commands):
            report.input_error = "the workspace has no %r command" % only
        else:
            overrides = {"max_length": args.max_length, "depth": args.depth,
                         "degree": args.degree, "window": args.window}
            report = run(ws, only, overrides)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            _emit(report, args.format, fh)
    else:
        _emit(report, args.format, sys.stdout)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
