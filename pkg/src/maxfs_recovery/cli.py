"""Command line entry point.

Subcommands: sweep (critical-sparsity experiment, CSV output), recover
(WAV compress/recover roundtrip), compress (emit measurement vectors
plus the matrix recipe), oracle (exact minimum support of a small
system).  Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

import argparse
import sys

from . import experiments, oracle
from .experiments import (
    CONFIG_KEY_NAMES,
    DEFAULT_METHODS,
    config_from_mapping,
    read_matrix_file,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="maxfs-recovery", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", help="key=value configuration file")
        for key in CONFIG_KEY_NAMES:
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None)

    sweep = sub.add_parser("sweep", help="run a critical-sparsity sweep")
    add_config_flags(sweep)
    sweep.add_argument("--out", help="CSV output path")

    recover = sub.add_parser("recover", help="compress and recover a WAV file")
    add_config_flags(recover)
    recover.add_argument("--in", dest="in_path", required=True, help="input WAV")
    recover.add_argument("--out", required=True, help="output WAV")
    recover.add_argument(
        "--method", default=None, help=f"one of {', '.join(DEFAULT_METHODS)}"
    )
    recover.add_argument("--report", help="per-segment CSV path")

    compress = sub.add_parser("compress", help="emit y vectors and the matrix seed")
    add_config_flags(compress)
    compress.add_argument("--in", dest="in_path", required=True, help="input WAV")
    compress.add_argument("--out", required=True, help="output file prefix")

    orc = sub.add_parser("oracle", help="exact minimum support by enumeration")
    orc.add_argument("--phi", required=True, help="matrix file ('rows cols' header)")
    orc.add_argument("--y", required=True, help="vector file (same format)")
    orc.add_argument("--max-card", type=int, default=oracle.MAX_CARD)
    return parser


def _load_config(args):
    mapping = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, 1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                if "=" not in text:
                    raise _UsageError(
                        f"{args.config}:{line_no}: expected key=value, got {text!r}"
                    )
                key, value = text.split("=", 1)
                mapping[key.strip()] = value.strip()
    for key in CONFIG_KEY_NAMES:
        override = getattr(args, key, None)
        if override is not None:
            mapping[key] = override
    try:
        return config_from_mapping(mapping)
    except ValueError as err:
        raise _UsageError(str(err)) from err


def _cmd_sweep(args):
    cfg = _load_config(args)
    result = experiments.run_sweep(cfg)
    csv_text = experiments.sweep_csv(result)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(csv_text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv_text)
    print(f"m = {cfg.m}, matrix = {cfg.matrix_kind}, seed = {cfg.seed}")
    for name in cfg.methods:
        s = result.summary[name]
        ratio = f"{s.min_m_ratio:.3g}S" if s.min_m_ratio is not None else "FAIL"
        print(
            f"{name}: successes {s.tot_succ}, min m {ratio}, "
            f"GM {s.gm:.4g}, LP solves {s.lp_solves}"
        )
    return 0


def _cmd_recover(args):
    cfg = _load_config(args)
    report = experiments.run_recover_wav(args.in_path, args.out, cfg, args.method)
    csv_text = experiments.segment_csv(report)
    report_path = args.report or f"{args.out}.segments.csv"
    with open(report_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(csv_text)
    print(f"segments: {len(report.segments)}")
    print(f"total S: {report.total_s}, total T: {report.total_t}")
    print(f"RSE: {report.rse:.6g}")
    print(f"runtime: {report.runtime:.2f}s")
    print(f"wrote {args.out} and {report_path}")
    return 0


def _cmd_compress(args):
    cfg = _load_config(args)
    paths = experiments.run_compress_wav(args.in_path, args.out, cfg)
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_oracle(args):
    phi = read_matrix_file(args.phi)
    y = read_matrix_file(args.y).ravel()
    result = oracle.min_support_exact(phi, y, max_card=args.max_card)
    print(f"min cardinality: {result.min_cardinality}")
    support = " ".join(str(i) for i in result.witness_support)
    print(f"witness support: [{support}]")
    print(f"unique: {'yes' if result.unique else 'no'}")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "recover": _cmd_recover,
    "compress": _cmd_compress,
    "oracle": _cmd_oracle,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    except Exception as err:  # noqa: BLE001 - CLI boundary
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
