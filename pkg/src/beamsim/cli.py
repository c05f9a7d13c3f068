"""Command-line front-end.

Subcommands:

* ``drop``        -- sample one user drop, dump positions and path loss
* ``power-sweep`` -- consumption model over an antenna grid, with crossovers
* ``frontier``    -- Monte-Carlo throughput / consumed-power / EE frontier

Exit codes: 0 success, 2 configuration problem, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__, outputs
from .channel import drop_users, los_departure, path_loss_db
from .config import (ConfigError, build_experiment, build_power_sweep,
                     build_scenario, resolve)
from .experiment import run_frontier, run_power_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SEED_ENV_VAR = "BEAMSIM_SEED"


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help="named configuration preset "
                   "(fwa-fig5, v2i-fig6, power-fig3)")
    p.add_argument("--config", metavar="PATH", help="config file, key = value lines")
    p.add_argument("--set", metavar="K=V", action="append", default=[],
                   dest="overrides", help="override one config key (repeatable)")
    p.add_argument("--seed", type=int, help=f"master seed (falls back to "
                   f"${SEED_ENV_VAR}, then the config key)")
    p.add_argument("--drops", type=int, help="Monte-Carlo drops per sweep point")
    p.add_argument("--out", metavar="DIR", default=".", help="output directory")
    p.add_argument("--svg", action="store_true", help="also render SVG charts")
    p.add_argument("--threads", type=int, default=1, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="beamsim",
        description="mmWave massive-MIMO downlink simulator: analog vs hybrid "
                    "vs digital beamforming in throughput, consumed power, and "
                    "energy efficiency.",
    )
    ap.add_argument("--version", action="version", version=f"beamsim {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name, desc in (
        ("drop", "sample one user drop and dump positions + path loss"),
        ("power-sweep", "transceiver consumption vs antenna count"),
        ("frontier", "throughput / consumed power / EE frontier"),
    ):
        _common_flags(sub.add_parser(name, help=desc, description=desc))
    return ap


def _master_seed(args, cfg) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"${SEED_ENV_VAR} must be an integer, got {env!r}")
    return cfg["experiment.master_seed"]


def _prepare_out_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise RuntimeError(f"output directory {path!r} is not writable: {exc}")


def _cmd_drop(args, cfg) -> list[str]:
    scenario = build_scenario(cfg)
    seed = cfg["experiment.master_seed"]
    positions = drop_users(scenario, np.random.SeedSequence(entropy=(seed, 0)))
    dists = np.empty(scenario.n_users)
    pls = np.empty(scenario.n_users)
    for k in range(scenario.n_users):
        _, dists[k] = los_departure(scenario, positions[k])
        pls[k] = path_loss_db(dists[k], scenario.carrier_frequency_hz,
                              cfg["channel.pathloss_exponent"])
    path = os.path.join(args.out, "drop.csv")
    outputs.write_drop_csv(path, positions, dists, pls)
    print(f"{scenario.kind} drop: {scenario.n_users} users, "
          f"distance {dists.min():.1f}-{dists.max():.1f} m, "
          f"path loss {pls.min():.1f}-{pls.max():.1f} dB -> {path}")
    return [path]


def _cmd_power_sweep(args, cfg) -> tuple[list[str], dict]:
    job = build_power_sweep(cfg)
    result = run_power_sweep(job)
    path = os.path.join(args.out, "power_sweep.csv")
    outputs.write_power_sweep_csv(path, result)
    written = [path]
    for (kind, device), n in sorted(result.crossovers.items()):
        where = f"N = {n}" if n else "none up to N = 1024"
        print(f"rx > tx crossover, {kind:7s} {device.upper()}: {where}")
    if args.svg:
        for device in job.devices:
            svg = os.path.join(args.out, f"power_{device}.svg")
            outputs.render_power_svg(svg, result, device)
            written.append(svg)
    print(f"{len(result.breakdowns)} breakdowns -> {path}")
    crossings = {f"{kind}/{device}": n
                 for (kind, device), n in sorted(result.crossovers.items())}
    return written, {"rx_tx_crossovers": crossings}


def _cmd_frontier(args, cfg) -> tuple[list[str], dict]:
    exp = build_experiment(cfg)
    result = run_frontier(exp, threads=args.threads)
    path = os.path.join(args.out, "frontier.csv")
    outputs.write_frontier_csv(path, result, exp.streams_per_user)
    written = [path]
    if args.svg:
        svg = os.path.join(args.out, "frontier.svg")
        outputs.render_frontier_svg(svg, result, exp.streams_per_user)
        written.append(svg)
    for label, curve in result.points.items():
        peak = max(pt.ee_bits_per_joule for pt in curve)
        top = max(pt.mean_throughput_bps for pt in curve)
        print(f"{label:7s}: peak {top / 1e9:7.2f} Gbit/s, "
              f"best EE {peak / 1e9:6.3f} Gbit/J, "
              f"{result.n_drops - result.failed_drops[label]}/{result.n_drops} drops ok")
    print(f"frontier ({exp.n_drops} drops, {len(exp.sweep_dbm)} power points) -> {path}")
    return written, {"failed_drops": result.failed_drops}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        cfg = resolve(args.preset, args.config, args.overrides)
        cfg["experiment.master_seed"] = _master_seed(args, cfg)
        if args.drops is not None:
            if args.drops < 1:
                raise ConfigError("--drops must be >= 1")
            cfg["experiment.n_drops"] = args.drops
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        _prepare_out_dir(args.out)
        extra = None
        if args.subcommand == "drop":
            written = _cmd_drop(args, cfg)
        elif args.subcommand == "power-sweep":
            written, extra = _cmd_power_sweep(args, cfg)
        else:
            written, extra = _cmd_frontier(args, cfg)
        manifest = outputs.write_manifest(
            args.out, args.subcommand, cfg, cfg["experiment.master_seed"],
            written, duration_s=time.monotonic() - t0, extra=extra)
        print(f"manifest -> {manifest}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
