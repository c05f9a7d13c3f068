"""Run artifacts: CSV emission, the run manifest, and optional SVG charts.

CSV numbers are written with ``repr(float(...))`` (shortest exact
round-trip), so parsing the text back recovers the binary value and reruns
with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import os
from typing import Any

import numpy as np

from . import __version__
from .experiment import FrontierResult, PowerSweepResult

FRONTIER_HEADER = ["arch", "strategy", "streams", "radiated_dbm",
                   "mean_tput_bps", "consumed_w", "ee_bits_per_joule",
                   "n_drops_ok"]
POWER_SWEEP_HEADER = ["arch", "device", "n_antennas", "n_rf", "component", "mw"]
DROP_HEADER = ["user_id", "x", "y", "z", "distance_m", "pathloss_db"]


def fnum(x) -> str:
    """Exact decimal text for a float (well past 12 significant digits)."""
    return repr(float(x))


def _label_parts(label: str, streams: int) -> tuple[str, str, str]:
    if label == "abf":
        return "ABF", "steering", str(streams)
    kind, strategy = label.split("-")
    return kind.upper(), strategy, str(streams)


def write_frontier_csv(path: str, result: FrontierResult, streams: int) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FRONTIER_HEADER)
        for label, curve in result.points.items():
            arch, strategy, s = _label_parts(label, streams)
            for pt in curve:
                w.writerow([arch, strategy, s, fnum(pt.radiated_dbm),
                            fnum(pt.mean_throughput_bps), fnum(pt.consumed_w),
                            fnum(pt.ee_bits_per_joule), str(pt.n_drops_ok)])


def write_power_sweep_csv(path: str, result: PowerSweepResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(POWER_SWEEP_HEADER)
        for b in result.breakdowns:
            base = [b.spec.kind, b.spec.device, str(b.spec.n_antennas),
                    str(b.spec.n_rf)]
            for component, mw in b.tx_items.items():
                w.writerow(base + [component, fnum(mw)])
            for component, mw in b.rx_items.items():
                w.writerow(base + [component, fnum(mw)])
            w.writerow(base + ["tx_total", fnum(b.tx_total_mw)])
            w.writerow(base + ["rx_total", fnum(b.rx_total_mw)])
            w.writerow(base + ["total", fnum(b.total_mw)])


def write_drop_csv(path: str, positions: np.ndarray, distances: np.ndarray,
                   pathlosses: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DROP_HEADER)
        for k in range(positions.shape[0]):
            w.writerow([str(k), fnum(positions[k, 0]), fnum(positions[k, 1]),
                        fnum(positions[k, 2]), fnum(distances[k]),
                        fnum(pathlosses[k])])


def write_manifest(out_dir: str, subcommand: str, resolved_config: dict[str, Any],
                   master_seed: int, outputs: list[str], duration_s: float,
                   extra: dict[str, Any] | None = None) -> str:
    """Record what produced the artifacts next to them."""
    doc = {
        "tool": "beamsim",
        "version": __version__,
        "subcommand": subcommand,
        "master_seed": master_seed,
        "resolved_config": {k: _json_value(v)
                            for k, v in sorted(resolved_config.items())},
        "outputs": [os.path.basename(p) for p in outputs],
        "duration_s": duration_s,
    }
    if extra:
        doc.update(extra)
    path = os.path.join(out_dir, "run_manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")
    return path


def _json_value(v):
    if isinstance(v, tuple):
        return list(v)
    return v


def render_frontier_svg(path: str, result: FrontierResult, streams: int) -> None:
    """Energy efficiency vs mean throughput, one log-log line per curve."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, curve in result.points.items():
        arch, strategy, s = _label_parts(label, streams)
        name = arch if arch == "ABF" else f"{arch}-{strategy.upper()}"
        tput = [pt.mean_throughput_bps for pt in curve]
        ee = [pt.ee_bits_per_joule for pt in curve]
        ax.plot(tput, ee, marker="o", markersize=3, label=f"{name} ({s} stream)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("mean sum throughput [bit/s]")
    ax.set_ylabel("energy efficiency [bit/J]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def render_power_svg(path: str, result: PowerSweepResult, device: str) -> None:
    """Consumption vs antenna count for one device, TX solid / RX dashed."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 5))
    kinds = sorted({b.spec.kind for b in result.breakdowns
                    if b.spec.device == device})
    for kind in kinds:
        rows = [b for b in result.breakdowns
                if b.spec.device == device and b.spec.kind == kind]
        rows.sort(key=lambda b: b.spec.n_antennas)
        n = [b.spec.n_antennas for b in rows]
        ax.plot(n, [b.tx_total_mw for b in rows], "-", label=f"{kind} TX")
        ax.plot(n, [b.rx_total_mw for b in rows], "--", label=f"{kind} RX")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("antennas")
    ax.set_ylabel("consumed power [mW]")
    ax.set_title(device.upper())
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _pyplot():
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt
    return plt
