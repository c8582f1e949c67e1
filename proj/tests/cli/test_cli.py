"""End-to-end checks of the lri command-line tool.

The binary path comes from the LRI_CLI environment variable (set by ctest).
"""

import json
import os
import struct
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("LRI_CLI", "build/tools/lri")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def test_bounds_double_well():
    r = run("bounds", "--potential", "double-well")
    assert r.returncode == 0
    assert "dt_max_first=0.5" in r.stdout
    assert "dt_max_second=0.6" in r.stdout  # 0.6026...
    kv = dict(
        line.split("=", 1) for line in r.stdout.splitlines() if "=" in line and " " not in line
    )
    assert abs(float(kv["omega0"]) - 0.5) < 1e-12
    assert abs(float(kv["omega1"]) - 1.5) < 1e-10
    assert abs(float(kv["dt_max_second"]) - 0.6026288509773181) < 1e-10
    assert kv["remark_enlarged"] == "1"
    assert float(kv["dt_max_lri1a"]) == 0.5
    assert abs(float(kv["dt_max_lri2"]) - 0.6026288509773181) < 1e-10
    assert float(kv["dt_max_etdrk2"]) == 0.5  # baselines report the order-1 ceiling


def test_bounds_flory_huggins():
    r = run("bounds", "--potential", "flory-huggins", "--theta", "0.8", "--theta-c", "1.6")
    assert r.returncode == 0
    kv = dict(
        line.split("=", 1) for line in r.stdout.splitlines() if "=" in line and " " not in line
    )
    assert abs(float(kv["beta"]) - 0.9575) < 1e-4
    assert abs(float(kv["dt_max_first"]) - 0.1247) < 1e-3
    assert abs(float(kv["dt_max_second"]) - 0.1705) < 1e-3


def test_bounds_bad_theta_ordering():
    r = run("bounds", "--potential", "flory-huggins", "--theta", "1.6", "--theta-c", "0.8")
    assert r.returncode == 2


def test_check_operator():
    for bc, dim in [("neumann", 2), ("periodic", 1)]:
        r = run("check-operator", "--n", "8", "--bc", bc, "--dim", str(dim))
        assert r.returncode == 0, r.stdout + r.stderr
        assert "all operator checks passed" in r.stdout


def test_check_operator_cap():
    r = run("check-operator", "--n", "64")
    assert r.returncode == 2


def test_converge_smoke_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = [
        "converge",
        "--eps", "0.02",
        "--h-denom", "32",
        "--schemes", "lri1a,lri2",
        "--dt-divisors", "16,32,64",  # T/16 = 0.37 stays under both ceilings
    ]
    r1 = run(*args, "--out", str(out1))
    assert r1.returncode == 0, r1.stderr
    r2 = run(*args, "--out", str(out2), "--jobs", "2")
    assert r2.returncode == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2  # byte-identical at any thread count
    lines = b1.decode().splitlines()
    assert lines[0] == "scheme,dt,l2_error,l2_rate,linf_error,linf_rate"
    first = lines[1].split(",")
    assert first[0] == "lri1a"
    assert first[3] == ""  # no rate on the first row
    assert b"\r" not in b1


def test_converge_uncertified_warning(tmp_path):
    out = tmp_path / "warn.csv"
    r = run(
        "converge", "--eps", "0.02", "--h-denom", "32",
        "--schemes", "lri1a", "--dt-divisors", "4,8",
        "--out", str(out),
    )
    assert r.returncode == 0
    text = out.read_text()
    # T = 5.89, T/4 = 1.47 > 0.5 ceiling
    assert "# WARNING uncertified dt" in text


def test_converge_unwritable_out():
    r = run("converge", "--h-denom", "32", "--schemes", "lri1a",
            "--dt-divisors", "8,16", "--out", "/nonexistent-dir/x.csv")
    assert r.returncode == 2


def test_converge_dump_config_roundtrip(tmp_path):
    args = ["converge", "--eps", "0.01", "--h-denom", "64",
            "--schemes", "lri1b,etd1", "--dt-divisors", "8,16"]
    r = run(*args, "--dump-config")
    assert r.returncode == 0
    cfg = tmp_path / "cfg.json"
    cfg.write_text(r.stdout)
    r2 = run("converge", "--config", str(cfg), "--dump-config")
    assert r2.returncode == 0
    assert json.loads(r.stdout) == json.loads(r2.stdout)


def test_coarsen_clean_run(tmp_path):
    out = tmp_path / "run"
    r = run(
        "coarsen", "--potential", "double-well", "--scheme", "lri2",
        "--dt", "0.6", "--T", "6", "--h-denom", "32", "--eps", "0.02",
        "--seed", "7", "--snapshot-times", "0,3,6", "--out-dir", str(out),
    )
    assert r.returncode == 0, r.stdout + r.stderr
    series = (out / "series.csv").read_text().splitlines()
    assert series[0] == "step,time,sup_norm,energy"
    assert len(series) == 12  # header + 11 states (10 steps)
    for line in series[1:]:
        assert float(line.split(",")[2]) <= 1.0 + 1e-12

    # snapshot at t=0 equals the serialized initial field
    raw = (out / "snapshot_0000.f64").read_bytes()
    meta = json.loads((out / "snapshot_0000.json").read_text())
    assert meta["nx"] == 32 and meta["ny"] == 32
    assert meta["t"] == 0.0
    vals = struct.unpack("<" + "d" * (len(raw) // 8), raw)
    assert len(vals) == 32 * 32
    assert all(-1.0 <= v <= 1.0 for v in vals)
    r2 = run(
        "coarsen", "--potential", "double-well", "--scheme", "lri2",
        "--dt", "0.6", "--T", "6", "--h-denom", "32", "--eps", "0.02",
        "--seed", "7", "--snapshot-times", "0", "--out-dir", str(tmp_path / "run2"),
    )
    assert r2.returncode == 0
    raw2 = (tmp_path / "run2" / "snapshot_0000.f64").read_bytes()
    assert raw == raw2


def test_coarsen_oversized_dt_flory_huggins(tmp_path):
    r = run(
        "coarsen", "--potential", "flory-huggins", "--scheme", "lri1a",
        "--dt", "0.5", "--T", "20", "--h-denom", "32", "--eps", "0.01",
        "--seed", "3", "--init-lo", "-0.9", "--init-hi", "0.9",
        "--out-dir", str(tmp_path / "bad"),
    )
    # dynamics anomaly contract: divergence or MBP breach -> exit 3,
    # report still written
    assert r.returncode == 3, r.stdout + r.stderr
    assert (tmp_path / "bad" / "series.csv").exists()


def test_coarsen_snapshot_beyond_T(tmp_path):
    r = run(
        "coarsen", "--T", "5", "--dt", "0.5", "--h-denom", "32",
        "--snapshot-times", "10", "--out-dir", str(tmp_path / "x"),
    )
    assert r.returncode == 2


def test_usage_errors():
    assert run().returncode == 2
    assert run("unknown-subcommand").returncode == 2
    assert run("bounds", "--potential", "nonexistent").returncode == 2
