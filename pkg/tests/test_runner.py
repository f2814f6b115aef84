import os

import numpy as np
import pytest

from casimir_lab import runner
from casimir_lab.config import load_config, parse_config
from casimir_lab.dynamics import IntegratorConfig
from casimir_lab.errors import ConfigError
from casimir_lab.hamiltonians import ReducedDCEParams, SystemSpec

FAST_CFG = IntegratorConfig(rtol=1e-7, atol=1e-9, method="adaptive-embedded-RK853",
                            norm_guard=1e-3)

REDUCED_YAML = """\
kind: reduced-dce
label: demo
output_dir: {out}
grid: {{t_max: 2.0, n_points: 41}}
integrator: {{rtol: 1.0e-8, atol: 1.0e-10, method: adaptive-embedded-RK853, norm_guard: 1.0e-4}}
reduced: {{q_r: 3.0, alpha_r: 1.0, omega_r: -10.0}}
"""


def test_parse_config_reduced(tmp_path):
    cfg = parse_config(REDUCED_YAML.format(out=tmp_path), base_dir=tmp_path)
    assert cfg.kind == "reduced-dce"
    assert cfg.reduced.q_r == 3.0
    assert cfg.grid.t_max == 2.0
    assert len(cfg.config_hash) == 64


def test_parse_config_rejects_unknown_kind(tmp_path):
    with pytest.raises(ConfigError):
        parse_config("kind: bogus\n")


def test_parse_config_auto_tone(tmp_path):
    text = """\
kind: full-qubit
label: auto
grid: {t_max: 10.0, n_points: 11}
system:
  omega0: 1.0
  Omega0: 1.2
  g0: 0.02
  dim_cavity: 16
  tones:
    - {parameter: g, depth: 0.004, effect: g-DCE, zeta: 0.0}
"""
    cfg = parse_config(text)
    law = cfg.system.law("g")
    assert law.components[0].eta == pytest.approx(1.9956364, abs=1e-6)


def test_run_config_writes_artifacts_and_manifest(tmp_path):
    path = tmp_path / "demo.yaml"
    path.write_text(REDUCED_YAML.format(out=tmp_path / "out"))
    outputs = runner.run(path)
    csv = outputs[0]
    manifest = outputs[-1]
    assert csv.exists() and manifest.exists()
    header = csv.read_text().splitlines()[0]
    assert header == "qr_t,mean_n,mandel_q,var_p"


def test_rerun_is_bit_identical(tmp_path):
    path = tmp_path / "demo.yaml"
    path.write_text(REDUCED_YAML.format(out=tmp_path / "out"))
    first = runner.run(path)[0].read_bytes()
    second = runner.run(path)[0].read_bytes()
    assert first == second


def test_sweep_parallel_matches_serial(tmp_path, monkeypatch):
    omegas = np.linspace(-12.0, 0.0, 10)
    monkeypatch.delenv(runner.ENV_THREADS, raising=False)
    serial = runner.sweep_omega_r(3.0, 1.0, omegas, t_max_qr=2.0, n_points=101,
                                  cfg=FAST_CFG)
    monkeypatch.setenv(runner.ENV_THREADS, "2")
    parallel = runner.sweep_omega_r(3.0, 1.0, omegas, t_max_qr=2.0, n_points=101,
                                    cfg=FAST_CFG)
    assert np.array_equal(serial.n_max, parallel.n_max)
    assert np.array_equal(serial.varp_min, parallel.varp_min)


def test_sweep_summaries_from_same_trajectory():
    res = runner.sweep_omega_r(3.0, 1.0, np.array([-10.0]), t_max_qr=5.0,
                               n_points=501, cfg=FAST_CFG)
    assert res.n_max[0] > 1.0
    assert 0.0 < res.t_at_n_max[0] <= 5.0
    assert res.varp_min[0] < 0.25
    assert res.classification[0] in ("super-Poissonian", "squeezed-vacuum-like",
                                     "hyper-Poissonian", "sub-Poissonian",
                                     "Poissonian-like")


def test_optimize_detuning_small_drive_two_photon_resonance():
    w_max, n_max, coarse, fine = runner.optimize_detuning(0.05, cfg=FAST_CFG)
    assert w_max == pytest.approx(-2.0, abs=0.05)
    assert n_max == pytest.approx(2.0, abs=0.1)
    # optimizer dominance: best is at least the omega_r = 0 value
    dce = runner.sweep_omega_r(0.05, 1.0, np.array([0.0]), cfg=FAST_CFG)
    assert n_max >= dce.n_max[0]


def test_zeta_scan_reduced_self_consistency():
    params = ReducedDCEParams(omega_r=-2.0, alpha_r=1.0, q_r=0.05)
    out = runner.zeta_scan(params, "DCE", window=0.2, points=5, cfg=FAST_CFG,
                           t_max_qr=5.0, n_points=301)
    assert out["best_zeta"] == pytest.approx(0.0, abs=1e-12)
    single = runner.zeta_scan(params, "DCE", window=0.0, points=1, cfg=FAST_CFG,
                              t_max_qr=1.0, n_points=51)
    assert single["zetas"].tolist() == [0.0]


def test_auto_dim_rules():
    assert runner.auto_dim(0.05, 1.0) == 32
    assert runner.auto_dim(100.0, 1.0) == 1200
    assert runner.scan_dim(650.0, 1.0, -710.0) >= 2500
    with pytest.raises(ConfigError):
        runner.auto_dim(1.0, 0.0)


def test_reproduce_fig2_artifacts(tmp_path):
    cfg = IntegratorConfig(rtol=1e-6, atol=1e-8, method="adaptive-embedded-RK853",
                           norm_guard=1e-2)
    paths = runner.reproduce_figure("fig2", tmp_path, cfg=cfg)
    names = sorted(p.name for p in paths)
    assert "fig2_curve1_w0.csv" in names
    assert "fig2_line5_kappa.csv" in names
    assert "fig2_dashed_thermal.csv" in names
    body = (tmp_path / "fig2_curve3_w-10.csv").read_text().splitlines()
    assert body[0] == "qr_t,mean_n,mandel_q,var_p"
    assert len(body) == 1002


def test_run_full_qubit_smoke():
    spec = SystemSpec(omega0=1.0, Omega0=1.2, g0=0.02)
    traj = runner.run_full_qubit(spec, t_max=20.0, n_points=21, dim_cavity=8,
                                 cfg=IntegratorConfig(rtol=1e-8, atol=1e-11,
                                                      norm_guard=1e-5))
    assert traj.records["mean_n"].max() < 0.01  # unmodulated: nothing happens
    assert "atom_excitation" in traj.records
