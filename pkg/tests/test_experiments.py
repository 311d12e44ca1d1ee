import json

import numpy as np
import pytest

from hyperlab import io
from hyperlab.cli import main
from hyperlab.experiments import (
    ConfigError, ConvergenceResult, RESULT_TYPES, build_grid, build_initial, build_partition,
    config_for, load_config, run_converge, run_evolve, run_inequalities, run_regularity,
    validate_config,
)
from hyperlab.hypercross import enumerate_cross, project
from hyperlab.lattice import l2_norm, make_grid, random_band_limited
from hyperlab.spin import SpinPartition, antisymmetrize

ZERO_POTENTIAL = {"nuclei": [], "pair_interaction": False}
SMALL = {"grid": {"n": 32}, "time": {"T": 0.02, "dt": 1e-3, "snapshot_stride": 10}}


def test_schema_rejections():
    with pytest.raises(ConfigError):
        validate_config({})
    with pytest.raises(ConfigError, match="grid/n"):
        validate_config({"kind": "evolve", "grid": {"n": "many"}})
    with pytest.raises(ConfigError, match="one label per particle"):
        validate_config({"kind": "evolve", "partition": {"sigma": [1]}})
    with pytest.raises(ConfigError, match="increasing"):
        validate_config({"kind": "converge", "R": [4, 8]})
    with pytest.raises(ConfigError):
        validate_config({"kind": "evolve", "unknown_block": 1})


def test_load_config_yaml(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("kind: evolve\nseed: 7\ngrid:\n  n: 32\n")
    cfg = load_config(p)
    assert cfg["seed"] == 7 and cfg["grid"]["n"] == 32 and cfg["grid"]["L"] == 4.0
    p.write_text("- not a mapping\n")
    with pytest.raises(ConfigError):
        load_config(p)


def _zero_potential_exact_config(tmp_path):
    cfg = config_for("converge", potential=ZERO_POTENTIAL, **SMALL, R=[6, 12, 24])
    grid, part = build_grid(cfg), build_partition(cfg)
    u = antisymmetrize(random_band_limited(grid, np.random.default_rng(1)), part)
    u = project(u, enumerate_cross(grid, part, 6))
    u = u * (1 / l2_norm(u))
    io.save_checkpoint(tmp_path / "u0.ckpt", u)
    cfg["initial"]["checkpoint"] = str(tmp_path / "u0.ckpt")
    return cfg


def test_converge_exact_case(tmp_path):
    res = run_converge(_zero_potential_exact_config(tmp_path))
    assert res.exact and res.slope is None
    assert max(res.error_l2) < 1e-10


def test_converge_short_horizon_is_projection_error():
    cfg = config_for("converge", grid={"n": 64}, time={"T": 0.002, "dt": 1e-3, "snapshot_stride": 1})
    res = run_converge(cfg)
    for R, e, e0 in zip(res.R, res.error_l2, res.error_t0):
        assert e0 <= res.k_norm / R
        assert e == pytest.approx(e0, rel=0.05)
    assert res.error_l2 == sorted(res.error_l2, reverse=True)


def test_regularity_zero_potential_K_constant():
    cfg = config_for("regularity", potential=ZERO_POTENTIAL, **SMALL)
    res = run_regularity(cfg, override=True)
    for series in res.k_norms.values():
        assert max(series) - min(series) < 1e-12 * series[0]


def test_regularity_window_and_precondition(tmp_path):
    cfg = config_for("regularity", **SMALL)
    with pytest.raises(ConfigError, match="contraction window"):
        run_regularity(cfg)
    grid = build_grid(cfg)
    sym = random_band_limited(grid, np.random.default_rng(0))
    sym = sym + sym.replace(coeffs=sym.coeffs.T)
    io.save_checkpoint(tmp_path / "sym.ckpt", sym)
    cfg["initial"]["checkpoint"] = str(tmp_path / "sym.ckpt")
    with pytest.raises(ConfigError, match="antisymmetric"):
        run_regularity(cfg, override=True)
    bad = config_for("regularity", exponents={"alpha": 0.25}, **SMALL)
    with pytest.raises(ConfigError, match="windows"):
        run_regularity(bad, override=True)


def test_inequalities_collects_errors():
    cfg = config_for("inequalities", checks={"select": ["projection_bound", "no_such_check"],
                                             "projection_states": 20})
    rep = run_inequalities(cfg)
    assert rep["checks"][0]["pass"] is True
    assert rep["checks"][1]["status"] == "error"
    assert rep["failed"] == ["no_such_check"]


def test_inequalities_inconclusive_is_not_failure():
    cfg = config_for("inequalities", checks={"select": ["pair_hardy"], "pair_hardy_samples": 100})
    rep = run_inequalities(cfg)
    assert rep["checks"][0]["status"].startswith("inconclusive") and rep["all_pass"]


def _result():
    return ConvergenceResult([8, 16, 32], [0.2, 0.1, 0.05], [0.3, 0.15, 0.07], [0.1, 0.05, 0.02],
                             [41, 125, 321], 3.7, -1.0, 1e-3, -1.05, 0.43, False,
                             {"norm_drift": 1e-15, "grid": {"d": 1, "N": 2, "L": 4.0, "n": 128}})


def test_persist_round_trip(tmp_path):
    res = _result()
    io.persist(res, tmp_path / "r.json")
    assert io.load(tmp_path / "r.json") == res
    assert RESULT_TYPES["converge"] is ConvergenceResult


def test_version_mismatch(tmp_path):
    path = io.persist(_result(), tmp_path / "r.json")
    doc = json.loads(path.read_text())
    doc["schema_version"] = io.SCHEMA_VERSION + 1
    path.write_text(json.dumps(doc))
    with pytest.raises(io.VersionMismatch, match="migration"):
        io.load(path)
    path.write_text("{not json")
    with pytest.raises(io.PersistError):
        io.load(path)


def test_csv_columns_stable(tmp_path):
    io.persist(_result(), tmp_path / "r.csv")
    header, rows = io.read_csv(tmp_path / "r.csv")
    assert header == ["R", "cross_size", "error_l2", "error_x", "error_t0", "bound_1_over_R_K"]
    assert len(rows) == 3 and float(rows[2][2]) == 0.05


def test_checkpoint_bit_exact_and_corruption(tmp_path, rng):
    u = random_band_limited(make_grid(1, 2, 4.0, 16), rng).replace(t=0.25)
    path = io.save_checkpoint(tmp_path / "s.ckpt", u, note="x")
    back, head = io.load_checkpoint(path)
    assert np.array_equal(back.coeffs, u.coeffs) and back.t == 0.25 and head["note"] == "x"
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(io.PersistError, match="bytes"):
        io.load_checkpoint(path)
    path.write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(io.PersistError, match="not a checkpoint"):
        io.load_checkpoint(path)


def test_evolve_checkpoint_resume(tmp_path):
    cfg = config_for("evolve", **SMALL)
    rep = run_evolve(cfg, tmp_path)
    assert rep["max_norm_drift"] < 1e-12 and rep["max_pauli_residual"] < 1e-12
    state, head = io.load_checkpoint(rep["checkpoint"])
    assert head["t"] == pytest.approx(0.02)
    resumed = config_for("evolve", **SMALL)
    resumed["initial"]["checkpoint"] = rep["checkpoint"]
    u = build_initial(resumed, build_grid(resumed), build_partition(resumed))
    assert u.t == pytest.approx(0.02)
    rep2 = run_evolve(resumed)
    assert rep2["rows"][0][0] == pytest.approx(0.02)


def test_deterministic_outputs(tmp_path):
    cfg = config_for("converge", grid={"n": 32}, time={"T": 0.01, "dt": 1e-3, "snapshot_stride": 5})
    a = io.persist(run_converge(cfg), tmp_path / "a.json").read_bytes()
    b = io.persist(run_converge(cfg), tmp_path / "b.json").read_bytes()
    assert a == b


def test_cli_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.yaml"
    good.write_text("kind: inequalities\nchecks:\n  select: [projection_bound, magnetic_hardy]\n"
                    "  projection_states: 10\n")
    assert main(["inequalities", "--config", str(good), "--out", str(tmp_path / "o1")]) == 0
    assert main(["report", "--out", str(tmp_path / "o1")]) == 0
    failing = tmp_path / "fail.yaml"
    failing.write_text("kind: inequalities\nchecks:\n  select: [bogus]\n")
    assert main(["inequalities", "--config", str(failing), "--out", str(tmp_path / "o2")]) == 1
    assert main(["report", "--out", str(tmp_path / "o2")]) == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: converge\nR: [8, 4, 16]\n")
    assert main(["converge", "--config", str(bad)]) == 2
    assert main(["evolve", "--config", str(good)]) == 2
    reg = tmp_path / "reg.yaml"
    reg.write_text("kind: regularity\ngrid: {n: 32}\ntime: {T: 0.02, dt: 0.001, snapshot_stride: 10}\n")
    assert main(["regularity", "--config", str(reg), "--out", str(tmp_path / "o3")]) == 2
    assert main(["regularity", "--config", str(reg), "--out", str(tmp_path / "o3"),
                 "--override-contraction"]) == 0
    assert main(["evolve", "--seed", str(2**64), "--out", str(tmp_path / "o4")]) == 2
