"""Command-line entry point: ``acwi {train,eval,analyze,sweep,list-envs}``.

Exit status is 0 on success, 2 for configuration problems and 1 for
runtime failures. Failures print one line, ``error: <Class>: <message>``,
on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from acwi.config import SWEEP_BETAS, load_config
from acwi.errors import AcwiError, ConfigError

OUTPUT_ROOT_VAR = "ACWI_OUTPUT_ROOT"

log = logging.getLogger("acwi")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="acwi", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0, help="repeat for more detail")
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS, help="repeat for more detail")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = sub.add_parser

    def sub_add(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = sub_add

    def run_opts(sp):
        sp.add_argument("--config", type=Path, help="TOML config file")
        sp.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
        sp.add_argument("--print-config", action="store_true", help="print the resolved config and exit")
        sp.add_argument("overrides", nargs="*", metavar="key=value")

    run_opts(sub.add_parser("train", help="train one method over the configured seeds"))
    sw = sub.add_parser("sweep", help="fixed-beta sweep plus acwi and plain PPO")
    run_opts(sw)
    sw.add_argument("--dry-run", action="store_true", help="list the configurations without training")

    ev = sub.add_parser("eval", help="greedy evaluation of a checkpoint")
    ev.add_argument("checkpoint", type=Path)
    ev.add_argument("--env", required=True)
    ev.add_argument("--episodes", type=int, default=10)
    ev.add_argument("--seed", type=int, default=0)

    an = sub.add_parser("analyze", help="curves, beta histograms, heatmaps and PCA from run directories")
    an.add_argument("runs", nargs="+", type=Path)
    an.add_argument("--out", type=Path, default=Path("analysis"))
    an.add_argument("--stages", type=int, default=4)
    an.add_argument("--window", type=int, default=1)
    an.add_argument("--pca-source", choices=("beta", "icm"))
    an.add_argument("--heatmap-steps", type=int, help="only count trace steps below this")
    an.add_argument("--no-images", action="store_true")

    sub.add_parser("list-envs", help="list environment ids")
    return p


def _resolve(args):
    cfg = load_config(args.config, args.overrides)
    if args.out is not None:
        cfg = cfg.replace(output_dir=str(args.out))
    else:
        root = os.environ.get(OUTPUT_ROOT_VAR)
        if root and not Path(cfg.output_dir).is_absolute():
            cfg = cfg.replace(output_dir=str(Path(root) / cfg.output_dir))
    return cfg


def sweep_configs(cfg):
    """The seven comparison configurations sharing ``cfg``'s seeds and hyperparameters."""
    base = Path(cfg.output_dir)
    out = [cfg.replace(method="icm_fixed", fixed_beta=b) for b in SWEEP_BETAS]
    out += [cfg.replace(method="acwi"), cfg.replace(method="ppo")]
    return [c.replace(output_dir=str(base / c.method_label)) for c in out]


def _progress(seed, rec):
    log.info("seed %d iter %d steps %d return %.3f beta %.3f", seed, rec.iteration, rec.env_steps,
             rec.ep_return_mean, rec.beta_mean)


def cmd_train(args):
    from acwi.config import save_config
    from acwi.trainer import run_experiment

    cfg = _resolve(args)
    if args.print_config:
        print(cfg.to_toml())
        return 0
    man = run_experiment(cfg, progress=_progress)
    save_config(cfg, Path(cfg.output_dir) / "config.toml")
    print(Path(cfg.output_dir) / "manifest.json")
    log.debug("config hash %s", man["config_hash"])
    return 0


def cmd_sweep(args):
    from acwi.config import save_config
    from acwi.trainer import run_experiment

    cfg = _resolve(args)
    if args.print_config:
        print(cfg.to_toml())
        return 0
    configs = sweep_configs(cfg)
    for c in configs:
        print(f"{c.method_label}\t{c.hash()}\t{c.output_dir}")
    if args.dry_run:
        return 0
    for c in configs:
        run_experiment(c, progress=_progress)
        save_config(c, Path(c.output_dir) / "config.toml")
    return 0


def cmd_eval(args):
    from acwi.trainer import evaluate_policy

    if args.episodes < 1:
        raise ConfigError("--episodes must be >= 1")
    res = evaluate_policy(args.checkpoint, args.env, args.episodes, args.seed)
    print(json.dumps(res, sort_keys=True))
    return 0


def cmd_analyze(args):
    from acwi.analysis import analyze_runs

    if args.stages < 1 or args.window < 1:
        raise ConfigError("--stages and --window must be >= 1")
    paths, _ = analyze_runs(args.runs, args.out, args.stages, args.window, args.pca_source,
                            args.heatmap_steps, images=not args.no_images)
    for p in paths:
        print(p)
    return 0


def cmd_list_envs(args):
    from acwi.envs import list_envs

    for env_id, desk in list_envs():
        print(f"{env_id}\t{'desk' if desk else 'full'}")
    return 0


COMMANDS = {
    "train": cmd_train,
    "sweep": cmd_sweep,
    "eval": cmd_eval,
    "analyze": cmd_analyze,
    "list-envs": cmd_list_envs,
}


def parse_args(argv=None):
    """Parse ``argv``; ``key=value`` overrides may appear between options."""
    parser = build_parser()
    args, rest = parser.parse_known_args(argv)
    extra = [r for r in rest if "=" in r and not r.startswith("-")]
    unknown = [r for r in rest if r not in extra]
    if unknown or (extra and not hasattr(args, "overrides")):
        raise ConfigError(f"unrecognized arguments: {' '.join(unknown or extra)}")
    if extra:
        args.overrides = list(args.overrides) + extra
    return args


def _one_line(e):
    return " ".join(str(e).split())


def main(argv=None):
    try:
        args = parse_args(argv)
        level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"error: ConfigError: {_one_line(e)}", file=sys.stderr)
        return 2
    except (AcwiError, OSError, ArithmeticError, ValueError) as e:
        print(f"error: {type(e).__name__}: {_one_line(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
