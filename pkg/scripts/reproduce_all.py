#!/usr/bin/env python3
"""Regenerate every figure preset plus the verification report.

Usage:
    python3 scripts/reproduce_all.py --out results/
    python3 scripts/reproduce_all.py --out results/ --tags fig2 fig5

Each preset writes its CSV data and a JSON summary holding the exact
parameters used, so any plotting tool can consume the output directly.
"""

import argparse
import logging
import sys
from pathlib import Path
from time import perf_counter

from biphoton.experiments import FIGURE_TAGS, reproduce_figure, run_verification

log = logging.getLogger("reproduce_all")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument(
        "--tags",
        nargs="*",
        default=list(FIGURE_TAGS),
        choices=list(FIGURE_TAGS),
        help="subset of presets to run (default: all)",
    )
    parser.add_argument(
        "--skip-verify",
        action="store_true",
        help="skip the closed-form-vs-quadrature comparison grid",
    )
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for tag in args.tags:
        start = perf_counter()
        paths = reproduce_figure(tag, out)
        log.info("%s: %d files in %.1f s", tag, len(paths), perf_counter() - start)
        for path in paths:
            print(path)

    if not args.skip_verify:
        start = perf_counter()
        report = run_verification(out_dir=out)
        summary = report["summary"]
        log.info(
            "verify in %.1f s: worst local %.2e, nonlocal %.2e, schmidt %.2e",
            perf_counter() - start,
            summary["worst_local_relative_error"],
            summary["worst_nonlocal_full_relative_error"],
            summary["worst_schmidt_relative_error"],
        )
        print(out / "verify_report.json")
        if not summary["all_within_tolerance"]:
            log.error("verification outside tolerance; see the report")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
