"""Figure specification: which CSV columns go on which panel.

A figure spec is a small YAML document:

    title: Kerr-limited photon growth
    output: fig2.svg            # .svg or .png
    x: {column: qr_t, label: "q_r t"}
    curves:
      - {path: fig2_curve1_w0.csv, label: "w_r = 0"}
      - {path: fig2_curve3_w-10.csv, label: "w_r = -10 a_r"}
    panels:
      - {column: mean_n, label: "mean photon number"}
      - {column: mandel_q, label: "Mandel Q"}
      - {column: var_p, label: "(Delta p)^2", logy: true}
    slope_fits: [{panel: 0, curve: 0}]    # optional, y = s*x annotations

Relative CSV paths resolve against the spec file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml


class FigureSpecError(ValueError):
    """Malformed figure spec or missing referenced data."""


@dataclass(frozen=True)
class PanelSpec:
    column: str
    label: str
    logy: bool = False


@dataclass(frozen=True)
class CurveSpec:
    path: Path
    label: str


@dataclass(frozen=True)
class FigureSpec:
    title: str
    output: Path
    x_column: str
    x_label: str
    curves: tuple[CurveSpec, ...]
    panels: tuple[PanelSpec, ...]
    slope_fits: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    @property
    def fmt(self) -> str:
        suffix = self.output.suffix.lower().lstrip(".")
        if suffix not in ("svg", "png"):
            raise FigureSpecError(f"output format must be svg or png, got {suffix!r}")
        return suffix


def _require(doc: dict, key: str):
    if key not in doc:
        raise FigureSpecError(f"figure spec requires key {key!r}")
    return doc[key]


def parse_figure_spec(text: str, base_dir: Path | None = None) -> FigureSpec:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise FigureSpecError(f"YAML parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise FigureSpecError("figure spec must be a mapping")

    base = base_dir or Path(".")
    x = _require(doc, "x")
    curves = []
    for node in _require(doc, "curves"):
        p = Path(_require(node, "path"))
        if not p.is_absolute():
            p = base / p
        curves.append(CurveSpec(path=p, label=str(node.get("label", p.stem))))
    panels = [PanelSpec(column=_require(node, "column"),
                        label=str(node.get("label", node["column"])),
                        logy=bool(node.get("logy", False)))
              for node in _require(doc, "panels")]
    if not curves or not panels:
        raise FigureSpecError("figure spec needs at least one curve and one panel")

    out = Path(_require(doc, "output"))
    if not out.is_absolute():
        out = base / out

    fits = tuple((int(node["panel"]), int(node["curve"]))
                 for node in doc.get("slope_fits", ()))
    spec = FigureSpec(
        title=str(doc.get("title", "")),
        output=out,
        x_column=str(_require(x, "column")),
        x_label=str(x.get("label", x["column"])),
        curves=tuple(curves),
        panels=tuple(panels),
        slope_fits=fits,
    )
    spec.fmt  # validate the format eagerly
    return spec


def load_figure_spec(path: str | Path) -> FigureSpec:
    p = Path(path)
    if not p.exists():
        raise FigureSpecError(f"figure spec {p} does not exist")
    return parse_figure_spec(p.read_text(encoding="utf-8"), base_dir=p.parent)
