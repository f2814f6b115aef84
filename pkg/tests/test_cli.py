import json

from casimir_lab.cli import main

GOOD = """\
kind: reduced-dce
label: cli-demo
output_dir: {out}
grid: {{t_max: 1.0, n_points: 11}}
integrator: {{rtol: 1.0e-8, atol: 1.0e-10, method: adaptive-embedded-RK853, norm_guard: 1.0e-4}}
reduced: {{q_r: 3.0, alpha_r: 1.0, omega_r: -10.0}}
"""

BAD_KIND = """\
kind: nonsense
label: broken
"""

COEFFS = """\
kind: coeff-table
label: table-demo
output_dir: {out}
system:
  omega0: 1.0
  Omega0: 0.8
  g0: 0.02
  tones:
    - {{parameter: g, depth: 0.004, frequency: 2.0}}
coeffs: {{m_max: 3}}
"""


def test_version_command(capsys):
    assert main(["version"]) == 0
    assert "casimir-lab" in capsys.readouterr().out


def test_simulate_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "run.yaml"
    cfg.write_text(GOOD.format(out=tmp_path / "out"))
    assert main(["simulate", str(cfg)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert any(line.endswith(".csv") for line in out)
    manifest_path = [l for l in out if l.endswith(".manifest.json")][0]
    manifest = json.loads(open(manifest_path).read())
    assert manifest["label"] == "cli-demo"
    assert manifest["tolerances"]["rtol"] == 1e-8
    assert len(manifest["config_sha256"]) == 64


def test_parse_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text(BAD_KIND)
    assert main(["simulate", str(cfg)]) == 2


def test_missing_file_exit_code(tmp_path):
    assert main(["simulate", str(tmp_path / "nope.yaml")]) == 2


def test_truncation_exit_code(tmp_path):
    cfg = tmp_path / "trunc.yaml"
    cfg.write_text("""\
kind: reduced-dce
label: too-small
output_dir: {out}
grid: {{t_max: 3.0, n_points: 11}}
reduced: {{q_r: 1.0, alpha_r: 0.0, omega_r: 0.0, dim: 24}}
""".format(out=tmp_path / "out"))
    assert main(["simulate", str(cfg)]) == 4


def test_coeffs_command(tmp_path, capsys):
    cfg = tmp_path / "coeffs.yaml"
    cfg.write_text(COEFFS.format(out=tmp_path / "out"))
    assert main(["coeffs", str(cfg)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert any(line.endswith("table-demo_levels.csv") for line in lines)
    assert any(line.endswith("table-demo_theta.csv") for line in lines)


def test_sweep_command(tmp_path, capsys):
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text("""\
kind: reduced-dce
label: sweep-demo
output_dir: {out}
grid: {{t_max: 2.0, n_points: 101}}
integrator: {{rtol: 1.0e-7, atol: 1.0e-9, method: adaptive-embedded-RK853, norm_guard: 1.0e-3}}
reduced: {{q_r: 3.0, alpha_r: 1.0, omega_r: 0.0}}
sweep: {{parameter: omega_r, values: [-12.0, -10.0, 0.0]}}
""".format(out=tmp_path / "out"))
    assert main(["sweep", str(cfg)]) == 0
    out_lines = capsys.readouterr().out.strip().splitlines()
    sweep_csv = [l for l in out_lines if l.endswith("_sweep.csv")][0]
    rows = open(sweep_csv).read().splitlines()
    assert rows[0].startswith("omega_r_over_alpha,n_max")
    assert len(rows) == 4
