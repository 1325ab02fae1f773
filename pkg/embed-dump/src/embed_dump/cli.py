"""Command line entry: embed-dump INPUT -o OUTPUT [options].

Exit codes: 0 success; 1 encoder load/encode failure; 2 unreadable or
non-UTF-8 input (or unparseable command line, via argparse); 3 invalid
option values.
"""

import argparse
import json
import sys

from .dump import DumpConfig, dump
from .encoders import DEFAULT_MODEL
from .errors import ModelError, OptionsError
from .split import SPLITTERS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="embed-dump",
        description="split text into sentence units and write their "
                    "embeddings as JSONL",
    )
    ap.add_argument("input", help="UTF-8 text file")
    ap.add_argument("-o", "--output", required=True,
                    help="JSONL output path")
    ap.add_argument("--splitter", choices=SPLITTERS, default="none",
                    help="none: one unit per line; rules: regex sentence "
                         "splitting (default: none)")
    ap.add_argument("--model", default=DEFAULT_MODEL,
                    help="sentence-transformers identifier, or hashing:<d> "
                         "for the offline hashing encoder "
                         f"(default: {DEFAULT_MODEL})")
    ap.add_argument("--normalize", default=True,
                    action=argparse.BooleanOptionalAction,
                    help="unit-normalize embeddings (default: on)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = DumpConfig(
            input=args.input,
            output=args.output,
            splitter=args.splitter,
            model=args.model,
            normalize=args.normalize,
        )
        n = dump(config)
    except OptionsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"rows": n, "out": args.output}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
