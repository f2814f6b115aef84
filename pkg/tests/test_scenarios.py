"""End-to-end coverage of the remaining scenario kinds and CLI surfaces."""

import json

import numpy as np
import pytest

from casimir_lab.cli import main
from casimir_lab import runner
from casimir_lab.dynamics import IntegratorConfig
from casimir_lab.effective import resonance_frequency
from casimir_lab.errors import NearResonanceError
from casimir_lab.hamiltonians import SystemSpec
from casimir_lab import modulation as mod


def run_cli_config(tmp_path, text, command="simulate"):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(text)
    assert main([command, str(cfg)]) == 0


def test_hp_slab_scenario(tmp_path, capsys):
    run_cli_config(tmp_path, f"""\
kind: hp-slab
label: hp-demo
output_dir: {tmp_path}/out
grid: {{t_max: 5.0, n_points: 11}}
integrator: {{rtol: 1.0e-8, atol: 1.0e-11, norm_guard: 1.0e-5}}
system:
  omega0: 1.0
  Omega0: 0.9
  g0: 0.01
  N: 100
  dim_cavity: 8
  dim_atom: 8
""")
    out = capsys.readouterr().out
    csv = [l for l in out.splitlines() if l.endswith("hp-demo.csv")][0]
    header = open(csv).read().splitlines()[0]
    assert header == "t,mean_n_a,mean_n_b"


def test_sideband_scenario(tmp_path, capsys):
    run_cli_config(tmp_path, f"""\
kind: sideband
label: adce-demo
output_dir: {tmp_path}/out
grid: {{t_max: 1.0, n_points: 11}}
system:
  omega0: 1.0
  Omega0: 1.3
  g0: 0.04
  tones:
    - {{parameter: g, depth: 0.016, frequency: 1.7}}
sideband: {{effect: Anti-DCE, M: 1}}
""")
    out = capsys.readouterr().out
    csv = [l for l in out.splitlines() if l.endswith("adce-demo.csv")][0]
    rows = open(csv).read().splitlines()
    assert rows[0] == "t,start_population,target_population"
    data = [[float(v) for v in r.split(",")] for r in rows[1:]]
    assert data[0][1] == pytest.approx(1.0, abs=1e-9)
    # default grid spans a full Rabi period: full transfer mid-way
    assert max(row[2] for row in data) > 0.95


def test_pump_scenario(tmp_path, capsys):
    run_cli_config(tmp_path, f"""\
kind: pump
label: pump-demo
output_dir: {tmp_path}/out
grid: {{t_max: 1.0, n_points: 11}}
integrator: {{rtol: 1.0e-9, atol: 1.0e-12, norm_guard: 1.0e-6}}
pump:
  rho: {{amplitude: 0.5, phase: 0.0}}
  xi: 0.5
  dim: 64
""")
    out = capsys.readouterr().out
    csv = [l for l in out.splitlines() if l.endswith("pump-demo.csv")][0]
    rows = open(csv).read().splitlines()
    n_final = float(rows[-1].split(",")[1])
    from casimir_lab.dynamics import pumped_analytic
    assert n_final == pytest.approx(pumped_analytic(0.5, 0.5, 1.0).mean_n, rel=1e-5)


def test_spectrum_scenario(tmp_path, capsys):
    run_cli_config(tmp_path, f"""\
kind: spectrum
label: spec-demo
output_dir: {tmp_path}/out
system:
  omega0: 1.0
  Omega0: 0.8
  g0: 0.05
  dim_cavity: 10
  rwa: true
""")
    out = capsys.readouterr().out
    csv = [l for l in out.splitlines() if l.endswith("spec-demo.csv")][0]
    rows = open(csv).read().splitlines()
    eigs = np.array([float(r.split(",")[1]) for r in rows[1:]])
    assert eigs[0] == pytest.approx(0.0, abs=1e-12)  # dressed vacuum
    assert np.all(np.diff(eigs) >= -1e-12)


def test_validate_cli_filtered(capsys):
    assert main(["validate", "--criterion", "appendix"]) == 0
    out = capsys.readouterr().out
    assert "PASS  appendix-b-spectrum" in out


def test_manifest_records_version(tmp_path):
    from casimir_lab import __version__
    cfg = tmp_path / "r.yaml"
    cfg.write_text(f"""\
kind: reduced-dce
label: v-demo
output_dir: {tmp_path}/out
grid: {{t_max: 0.5, n_points: 6}}
integrator: {{rtol: 1.0e-7, atol: 1.0e-9, norm_guard: 1.0e-3}}
reduced: {{q_r: 1.0, alpha_r: 1.0, omega_r: -2.0}}
""")
    outputs = runner.run(cfg)
    manifest = json.loads(outputs[-1].read_text())
    assert manifest["library_version"] == __version__


def test_zeta_scan_full_qubit_short_horizon():
    g0 = 0.02
    spec = SystemSpec(omega0=1.0, Omega0=1.2, g0=g0,
                      laws={"g": mod.single_tone(g0, 0.2 * g0, eta=2.0)})
    out = runner.zeta_scan(spec, "g-DCE", window=2.4e-4, points=3,
                           cfg=IntegratorConfig(rtol=1e-7, atol=1e-9,
                                                norm_guard=1e-3,
                                                method="adaptive-embedded-RK853"),
                           t_max_qr=0.5, n_points=101)
    assert len(out["peaks"]) == 3
    assert out["best_peak"] > 0.0
    assert abs(out["best_zeta"]) <= 2.4e-4


def test_frame_functions_near_resonance_guard():
    from casimir_lab.effective import frame_functions
    # strong collective coupling puts beta in the fast-tone range
    spec = SystemSpec(omega0=1.0, Omega0=0.8, g0=0.08, N=100,
                      laws={"Omega": mod.single_tone(0.8, 0.01, eta=1.6124515)})
    from casimir_lab.effective import derived_scales
    beta = derived_scales(spec).beta
    assert abs(1.6124515 - beta) < 1e-6
    with pytest.raises(NearResonanceError):
        frame_functions(spec, 1.0)


def test_idce_catalog_value():
    spec = SystemSpec(omega0=1.0, Omega0=0.8, g0=0.0)
    assert resonance_frequency(spec, "IDCE")[0] == pytest.approx(1.6)
    spec2 = SystemSpec(omega0=1.0, Omega0=0.8, g0=0.05, N=4)
    from casimir_lab.effective import derived_scales
    sc = derived_scales(spec2)
    expected = 2 * (0.8 - sc.delta_minus_tilde - sc.delta_plus_tilde)
    assert resonance_frequency(spec2, "IDCE")[0] == pytest.approx(expected, rel=1e-12)
