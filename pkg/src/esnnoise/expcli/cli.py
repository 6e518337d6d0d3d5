"""Command line entry point: ``esnnoise --scenario NAME [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import parse_lines
from .scenarios import RUNNERS, Scenario, replay, run_scenario


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="esnnoise",
        description="Reproduce noise dispersion/SNR experiments on a linear echo state network.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", choices=sorted(RUNNERS))
    src.add_argument("--replay", metavar="MANIFEST",
                     help="re-run the scenario recorded in a manifest CSV")
    p.add_argument("--config", help="flat 'key = value' parameter file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="ensemble size K (default 1000)")
    p.add_argument("--workers", type=int, help="threads per ensemble; results do not depend on it")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--kernel", choices=["symmetric", "literal"])
    p.add_argument("--emit", choices=["csv", "svg", "both"], default="both")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    flags = {k: v for k, v in (("trials", args.trials), ("workers", args.workers),
                               ("kernel", args.kernel)) if v is not None}
    try:
        if args.replay:
            if args.seed is not None:
                flags["seed"] = args.seed
            paths = replay(args.replay, args.out_dir, args.emit, flags)
        else:
            overrides = {}
            if args.config:
                with open(args.config) as fh:
                    overrides.update(parse_lines(fh.read()))
            overrides.update(flags)
            seed = args.seed if args.seed is not None else int(overrides.pop("seed", 0))
            overrides.pop("seed", None)
            paths = run_scenario(Scenario(args.scenario, overrides), seed, args.out_dir,
                                 args.emit)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"esnnoise: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
