"""Command-line entry point: polmet-parse.

Converts a post corpus into CoNLL-U parses for the polmet pipeline:

    polmet-parse --corpus posts.csv --out parses.conllu

Exit codes: 0 success, 1 bad input or configuration, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from parse_adapter.adapter import (AdapterConfig, AdapterError,
                                   available_parsers, text_to_conllu)
from parse_adapter.rules import RuleParser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polmet-parse",
        description="parse a post corpus (CSV/JSONL) into CoNLL-U")
    parser.add_argument("--corpus", required=True,
                        help="input corpus with post_id and text columns")
    parser.add_argument("--out", required=True,
                        help="output CoNLL-U path; warning log and manifest "
                             "are written next to it")
    parser.add_argument("--parser", default=RuleParser.identifier,
                        choices=sorted(available_parsers()),
                        help="parser backend identifier")
    parser.add_argument("--batch-size", type=int, default=64,
                        help="posts per parser batch (does not affect output)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = AdapterConfig(corpus=Path(args.corpus), output=Path(args.out),
                           parser_model=args.parser,
                           batch_size=args.batch_size)
    try:
        summary = text_to_conllu(config)
    except (AdapterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"parsed {summary['posts']} posts into {summary['sentences']} "
          f"sentences ({summary['warnings']} warnings)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
