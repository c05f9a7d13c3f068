"""End-to-end command-line checks via subprocess."""

import csv
import json
import os
import subprocess
import sys
import xml.dom.minidom

import pytest

TINY_FRONTIER = [
    "--set", "scenario.n_users=4",
    "--set", "arrays.bs_antennas=16",
    "--set", "arrays.ue_antennas=16",
    "--set", "experiment.n_drops=3",
    "--set", "experiment.sweep_dbm=0:30:15",
    "--set", "experiment.architectures=dbf-zf,abf",
]


def run_cli(out_dir, *args, env_extra=None):
    env = dict(os.environ)
    env.pop("BEAMSIM_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "beamsim", *args, "--out", str(out_dir)],
        capture_output=True, text=True, env=env)


def read_rows(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_drop_output_and_manifest(tmp_path):
    proc = run_cli(tmp_path, "drop", "--seed", "11")
    assert proc.returncode == 0, proc.stderr
    header, rows = read_rows(tmp_path / "drop.csv")
    assert header == ["user_id", "x", "y", "z", "distance_m", "pathloss_db"]
    assert len(rows) == 10
    for row in rows:
        assert float(row[4]) > 0 and float(row[5]) > 0

    manifest = json.loads((tmp_path / "run_manifest.json").read_text())
    assert manifest["tool"] == "beamsim"
    assert manifest["subcommand"] == "drop"
    assert manifest["master_seed"] == 11
    assert manifest["outputs"] == ["drop.csv"]
    cfg = manifest["resolved_config"]
    assert cfg["scenario.kind"] == "fwa"
    assert cfg["experiment.master_seed"] == 11
    assert "power.pa_efficiency" in cfg
    assert "link.bandwidth_hz" in cfg


def test_drop_byte_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run_cli(d, "drop", "--seed", "3").returncode == 0
    assert (a / "drop.csv").read_bytes() == (b / "drop.csv").read_bytes()


def test_seed_env_var_equivalent_to_flag(tmp_path):
    a, b = tmp_path / "flag", tmp_path / "env"
    assert run_cli(a, "drop", "--seed", "42").returncode == 0
    assert run_cli(b, "drop", env_extra={"BEAMSIM_SEED": "42"}).returncode == 0
    assert (a / "drop.csv").read_bytes() == (b / "drop.csv").read_bytes()


def test_seed_flag_beats_env_var(tmp_path):
    a, b = tmp_path / "flag", tmp_path / "both"
    assert run_cli(a, "drop", "--seed", "42").returncode == 0
    assert run_cli(b, "drop", "--seed", "42",
                   env_extra={"BEAMSIM_SEED": "9"}).returncode == 0
    assert (a / "drop.csv").read_bytes() == (b / "drop.csv").read_bytes()


def test_power_sweep_csv_consistency(tmp_path):
    proc = run_cli(tmp_path, "power-sweep", "--preset", "power-fig3")
    assert proc.returncode == 0, proc.stderr
    assert "rx > tx crossover" in proc.stdout
    header, rows = read_rows(tmp_path / "power_sweep.csv")
    assert header == ["arch", "device", "n_antennas", "n_rf", "component", "mw"]

    groups = {}
    for arch, device, n, n_rf, component, mw in rows:
        groups.setdefault((arch, device, int(n)), {})[component] = float(mw)
    tx_parts = {"dac", "lpf_tx", "lo_tx", "pa", "driver"}
    rx_parts = {"lpf_rx", "vga", "adc", "lo_rx", "lna"}
    for key, items in groups.items():
        tx_sum = sum(v for c, v in items.items() if c in tx_parts)
        rx_sum = sum(v for c, v in items.items() if c in rx_parts)
        assert items["tx_total"] == pytest.approx(tx_sum, rel=1e-9), key
        assert items["rx_total"] == pytest.approx(rx_sum, rel=1e-9), key
        assert items["total"] == pytest.approx(tx_sum + rx_sum, rel=1e-9), key
    # hybrid front-ends need more antennas than chains
    assert not any(a == "hybrid" and n <= 3 for a, _, n in groups)
    assert any(a == "hybrid" and n == 4 for a, _, n in groups)

    manifest = json.loads((tmp_path / "run_manifest.json").read_text())
    assert manifest["rx_tx_crossovers"]["digital/mt"] == 47
    assert manifest["rx_tx_crossovers"]["analog/bs"] == 184


def test_frontier_csv_shape_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        proc = run_cli(d, "frontier", *TINY_FRONTIER, "--seed", "5")
        assert proc.returncode == 0, proc.stderr
    assert (a / "frontier.csv").read_bytes() == (b / "frontier.csv").read_bytes()

    header, rows = read_rows(a / "frontier.csv")
    assert header == ["arch", "strategy", "streams", "radiated_dbm",
                      "mean_tput_bps", "consumed_w", "ee_bits_per_joule",
                      "n_drops_ok"]
    assert len(rows) == 2 * 3  # two architectures, three sweep points
    for row in rows:
        assert row[7] == "3"
        assert float(row[5]) > 0
        assert float(row[6]) == pytest.approx(
            float(row[4]) / float(row[5]), rel=1e-12)


def test_frontier_threads_do_not_change_output(tmp_path):
    a, b = tmp_path / "t1", tmp_path / "t8"
    for d, threads in ((a, "1"), (b, "8")):
        proc = run_cli(d, "frontier", *TINY_FRONTIER, "--seed", "5",
                       "--threads", threads)
        assert proc.returncode == 0, proc.stderr
    assert (a / "frontier.csv").read_bytes() == (b / "frontier.csv").read_bytes()


def test_svg_outputs_are_wellformed(tmp_path):
    proc = run_cli(tmp_path, "frontier", *TINY_FRONTIER, "--seed", "5", "--svg")
    assert proc.returncode == 0, proc.stderr
    svg = tmp_path / "frontier.svg"
    assert svg.exists()
    doc = xml.dom.minidom.parse(str(svg))
    assert doc.documentElement.tagName == "svg"
    manifest = json.loads((tmp_path / "run_manifest.json").read_text())
    assert "frontier.svg" in manifest["outputs"]


def test_unknown_set_key_exits_2(tmp_path):
    proc = run_cli(tmp_path, "drop", "--set", "bogus.key=1")
    assert proc.returncode == 2
    assert "bogus.key" in proc.stderr


def test_unknown_preset_exits_2(tmp_path):
    proc = run_cli(tmp_path, "drop", "--preset", "nope")
    assert proc.returncode == 2
    assert "nope" in proc.stderr


def test_bad_value_type_exits_2(tmp_path):
    proc = run_cli(tmp_path, "drop", "--set", "scenario.n_users=many")
    assert proc.returncode == 2


def test_config_file_error_names_key_and_line(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nbogus.key = 3\n")
    proc = run_cli(tmp_path, "drop", "--config", str(cfg))
    assert proc.returncode == 2
    assert "bogus.key" in proc.stderr
    assert ":2" in proc.stderr


def test_unwritable_out_dir_exits_3(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    proc = run_cli(blocker / "sub", "drop")
    assert proc.returncode == 3
    assert "not writable" in proc.stderr


def test_config_layering(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("scenario.n_users = 7\n")

    file_run = tmp_path / "file_wins"
    proc = run_cli(file_run, "drop", "--preset", "fwa-fig5",
                   "--config", str(cfg), "--seed", "1")
    assert proc.returncode == 0, proc.stderr
    _, rows = read_rows(file_run / "drop.csv")
    assert len(rows) == 7  # file overrides the preset

    set_run = tmp_path / "set_wins"
    proc = run_cli(set_run, "drop", "--preset", "fwa-fig5",
                   "--config", str(cfg), "--set", "scenario.n_users=5",
                   "--seed", "1")
    assert proc.returncode == 0, proc.stderr
    _, rows = read_rows(set_run / "drop.csv")
    assert len(rows) == 5  # --set overrides the file


def test_version_flag():
    proc = subprocess.run([sys.executable, "-m", "beamsim", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "beamsim" in proc.stdout
