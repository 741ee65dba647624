"""Command-line entry point: ``nlsasym <command> [--config F] [--out D] [--tol X] [--threads N]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad input or a numerical error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .grid import DecayError
from .harness import RUNNERS, ConfigError, ExperimentConfig

log = logging.getLogger("nlsasym")

HELP = {
    "scatter": "reflection coefficient on the configured z-grid",
    "alpha": "alpha coefficients and their pairwise cancellation",
    "predict": "leading-order prediction with the alpha_1 correction",
    "evolve": "split-step evolution with mass and momentum bookkeeping",
    "rates-nls": "error-decay rate of the leading-order formula against the PDE",
    "rates-linear": "error-decay rates of the linear expansion",
    "rates-appendix-a": "decay rates of the remainder integrals",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nlsasym", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in HELP.items():
        s = sub.add_parser(name, help=text, description=text)
        s.add_argument("--config", help="JSON config file (validated against the bundled schema)")
        s.add_argument("--out", default="nlsasym_out", help="output directory for CSV and JSON")
        s.add_argument("--tol", type=float, help="quadrature and scattering tolerance override")
        s.add_argument("--threads", type=int, default=1, help="worker threads for independent z0 values")
        if name == "rates-linear":
            s.add_argument("--also", action="append", default=[], choices=["literal", "stationary_phase"],
                           help="extra coefficient set to report (not checked)")
        if name == "alpha":
            s.add_argument("--discriminate", type=float, nargs="*", default=[], metavar="T",
                           help="times at which to compare the Omega6 region integral with both alpha_63 forms")
    return p


def load_config(args) -> ExperimentConfig:
    cfg = (ExperimentConfig.from_file(args.config, args.command) if args.config
           else ExperimentConfig.from_dict(None, args.command))
    if args.tol is not None:
        if not args.tol > 0:
            raise ConfigError("--tol must be positive")
        cfg = cfg.override(quad_tol=args.tol, scattering={"tol": args.tol})
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args)
        kw = {"threads": args.threads}
        if args.command == "rates-linear":
            kw["coefficient_sets"] = args.also
        if args.command == "alpha":
            kw["discriminate_t"] = args.discriminate
        result = RUNNERS[args.command](cfg, **kw)
    except (ConfigError, DecayError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    paths = result.write(args.out)
    for c in result.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  value={c.value!r}  threshold={c.threshold!r}")
    for p in paths:
        log.info("wrote %s", p)
    print(f"{args.command}: {'PASSED' if result.passed else 'FAILED'} ({result.elapsed:.1f} s) -> {args.out}")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
