"""Command-line entry point.

Subcommands:
  run        — run an experiment described by a JSON config file;
  fig1/fig2/fig3 — run the built-in presets;
  summarize  — aggregate a run directory into summary.csv.
"""

import argparse
import logging

from . import runner, summarize
from .config import PRESETS, SimConfig


def _add_run_options(p):
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the master seed")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel drop workers (never changes output bytes)")
    p.add_argument("--drops", type=int, default=None, help="override n_drops")
    p.add_argument("--blocks", type=int, default=None, help="override n_blocks")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cfcoex",
        description="Monte-Carlo downlink simulator for a cell-free massive "
                    "MIMO network where eMBB and URLLC users coexist.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a JSON config")
    p_run.add_argument("--config", required=True, help="JSON config path")
    _add_run_options(p_run)

    for name, fn in PRESETS.items():
        p_fig = sub.add_parser(name, help=fn.__doc__.splitlines()[0])
        _add_run_options(p_fig)

    p_sum = sub.add_parser("summarize", help="aggregate a run directory")
    p_sum.add_argument("--in", dest="in_dir", required=True, help="run directory")
    p_sum.add_argument("--out", default=None, help="output CSV (default <in>/summary.csv)")
    p_sum.add_argument("--eps-target", type=float, default=None,
                       help="availability threshold (default: run config's)")
    return ap


def main(argv=None):
    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)

    if args.cmd == "summarize":
        print(summarize.summarize_dir(args.in_dir, args.out, args.eps_target))
        return 0

    if args.cmd == "run":
        cfg = SimConfig.from_json(args.config)
    else:
        cfg = PRESETS[args.cmd]()
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.drops is not None:
        cfg.n_drops = args.drops
    if args.blocks is not None:
        cfg.n_blocks = args.blocks
    cfg.validate()
    paths = runner.run_experiment(cfg, args.out, workers=args.workers)
    print(paths["results"])
    return 0
