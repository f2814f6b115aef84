import numpy as np
import pytest

from plotkit.cli import main
from plotkit.render import read_columns, render
from plotkit.spec import FigureSpecError, load_figure_spec, parse_figure_spec


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format(v, ".12g") for v in row) + "\n")


@pytest.fixture
def timeseries_dir(tmp_path):
    t = np.linspace(0.0, 10.0, 101)
    for name, scale in (("curve1.csv", 1.0), ("curve2.csv", 2.5)):
        rows = np.column_stack([t, scale * np.sinh(0.3 * t) ** 2,
                                0.2 * t, 0.25 * np.exp(-0.4 * t)])
        write_csv(tmp_path / name, ["qr_t", "mean_n", "mandel_q", "var_p"], rows)
    return tmp_path


FIG_SPEC = """\
title: demo
output: out/fig.svg
x: {column: qr_t, label: "q_r t"}
curves:
  - {path: curve1.csv, label: "a"}
  - {path: curve2.csv, label: "b"}
panels:
  - {column: mean_n, label: "mean n"}
  - {column: mandel_q, label: "Q"}
  - {column: var_p, label: "var p", logy: true}
"""


def spec_file(tmp_path, text=FIG_SPEC, name="fig.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_render_three_panel_svg(timeseries_dir):
    spec = load_figure_spec(spec_file(timeseries_dir))
    out = render(spec)
    assert out.exists()
    body = out.read_text()
    assert body.startswith("<?xml")
    assert "mean n" in body


def test_svg_rendering_is_byte_identical(timeseries_dir):
    spec = load_figure_spec(spec_file(timeseries_dir))
    first = render(spec).read_bytes()
    spec.output.unlink()
    second = render(spec).read_bytes()
    assert first == second


def test_png_output(timeseries_dir):
    text = FIG_SPEC.replace("out/fig.svg", "out/fig.png")
    spec = load_figure_spec(spec_file(timeseries_dir, text))
    out = render(spec)
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_missing_column_names_file_and_column(timeseries_dir):
    text = FIG_SPEC.replace("column: var_p", "column: nonexistent")
    spec = load_figure_spec(spec_file(timeseries_dir, text))
    with pytest.raises(FigureSpecError, match="nonexistent"):
        render(spec)
    with pytest.raises(FigureSpecError, match="curve1.csv"):
        render(spec)
    assert not spec.output.exists()  # no partial image


def test_empty_csv_is_an_error(tmp_path):
    (tmp_path / "empty.csv").write_text("")
    with pytest.raises(FigureSpecError, match="empty"):
        read_columns(tmp_path / "empty.csv")
    (tmp_path / "header_only.csv").write_text("qr_t,mean_n\n")
    with pytest.raises(FigureSpecError, match="no data rows"):
        read_columns(tmp_path / "header_only.csv")


def test_sweep_panel_with_slope_annotation(tmp_path):
    ratios = np.array([100.0, 200.0, 400.0, 650.0])
    write_csv(tmp_path / "fig4a.csv", ["q_over_alpha", "abs_omega_max_over_qr"],
              np.column_stack([ratios, 1.09 * np.ones(4)]))
    text = """\
title: detuning law
output: fig4a.svg
x: {column: q_over_alpha, label: "q_r/|alpha_r|"}
curves:
  - {path: fig4a.csv, label: "optimum"}
panels:
  - {column: abs_omega_max_over_qr, label: "|w_max|/q_r"}
"""
    spec = load_figure_spec(spec_file(tmp_path, text, "fig4a.yaml"))
    out = render(spec)
    assert out.exists()


def test_bad_output_format_rejected(tmp_path):
    text = FIG_SPEC.replace("out/fig.svg", "out/fig.pdf")
    with pytest.raises(FigureSpecError, match="svg or png"):
        parse_figure_spec(text, base_dir=tmp_path)


def test_cli_render_and_exit_codes(timeseries_dir, capsys):
    path = spec_file(timeseries_dir)
    assert main(["render", str(path)]) == 0
    assert main(["render", str(timeseries_dir / "missing.yaml")]) == 2
    assert main(["version"]) == 0
