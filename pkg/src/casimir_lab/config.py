"""Experiment configuration: YAML schema, validation, canonical hashing.

One document describes one run.  Frequencies are dimensionless: units of
omega0 for microscopic scenarios, units of |alpha_r| for reduced-dce
scenarios (whose time axis is 1/q_r).  The full schema is documented in
the README; everything is deterministic, there is no seed anywhere.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from . import modulation as mod
from .errors import ConfigError
from .hamiltonians import ReducedDCEParams, SystemSpec
from .dynamics import IntegratorConfig

KINDS = ("reduced-dce", "full-qubit", "hp-slab", "sideband", "pump",
         "coeff-table", "spectrum")

_EFFECTS_WITH_AUTO_TONE = ("DCE", "g-DCE", "e-DCE", "IDCE", "Mixed", "Resonant",
                           "Anti-DCE", "Sideband-blue", "Sideband-red",
                           "Pump-DCE", "Pump-sideband")


@dataclass(frozen=True)
class GridSpec:
    t_max: float
    n_points: int = 1001

    def __post_init__(self):
        if self.t_max <= 0 or self.n_points < 2:
            raise ConfigError("grid needs t_max > 0 and n_points >= 2")


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    label: str
    output_dir: Path
    grid: GridSpec | None
    integrator: IntegratorConfig
    reduced: ReducedDCEParams | None = None
    reduced_extra: dict = field(default_factory=dict)   # kappa, nbar, dim
    system: SystemSpec | None = None
    system_extra: dict = field(default_factory=dict)    # dim_cavity, dim_atom
    sweep: dict | None = None
    sideband: dict | None = None
    pump: dict | None = None
    coeffs: dict | None = None
    source_text: str = ""

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.source_text.encode("utf-8")).hexdigest()


def _require(section: dict, key: str, what: str):
    if key not in section:
        raise ConfigError(f"{what} requires key {key!r}")
    return section[key]


def _complex_of(node) -> complex:
    if isinstance(node, (int, float)):
        return complex(node)
    if isinstance(node, dict) and {"amplitude", "phase"} <= set(node):
        return node["amplitude"] * complex(math.cos(node["phase"]), math.sin(node["phase"]))
    if isinstance(node, (list, tuple)) and len(node) == 2:
        return complex(node[0], node[1])
    raise ConfigError(f"cannot parse complex value from {node!r}")


def _parse_tones(tone_nodes, omega0: float) -> dict[str, mod.ParameterLaw]:
    """Collect per-parameter laws from a list of tone entries.

    A tone either names `frequency` explicitly or defers to the resonance
    catalog with `effect` (plus optional zeta / M); deferred tones are
    resolved once the bare spec exists, so here they are tagged.
    """
    per_param: dict[str, list] = {}
    for node in tone_nodes or ():
        name = _require(node, "parameter", "tone")
        if name not in ("omega", "Omega", "g", "chi", "d"):
            raise ConfigError(f"unknown modulated parameter {name!r}")
        depth = float(_require(node, "depth", "tone"))
        weight = float(node.get("weight", 1.0))
        phase = float(node.get("phase", 0.0))
        if "frequency" in node:
            eta = float(node["frequency"])
        elif "effect" in node:
            eta = ("effect", node["effect"], float(node.get("zeta", 0.0)),
                   node.get("M"))
            if node["effect"] not in _EFFECTS_WITH_AUTO_TONE:
                raise ConfigError(f"unknown effect {node['effect']!r} in tone")
        else:
            raise ConfigError("tone needs 'frequency' or 'effect'")
        per_param.setdefault(name, []).append((eta, depth, weight, phase))
    return per_param


def _resolve_spec(section: dict) -> tuple[SystemSpec, dict]:
    omega0 = float(section.get("omega0", 1.0))
    spec_kwargs = dict(
        omega0=omega0,
        Omega0=float(_require(section, "Omega0", "system")),
        g0=float(section.get("g0", 0.0)),
        chi0=float(section.get("chi0", 0.0)),
        N=int(section.get("N", 1)),
        kappa=float(section.get("kappa", 0.0)),
    )
    tones = _parse_tones(section.get("tones"), omega0)

    bare = {"omega": spec_kwargs["omega0"], "Omega": spec_kwargs["Omega0"],
            "g": spec_kwargs["g0"], "chi": spec_kwargs["chi0"], "d": 0.0}

    def build(resolver) -> SystemSpec:
        laws = {}
        for name, entries in tones.items():
            depth = entries[0][1]
            if any(e[1] != depth for e in entries):
                raise ConfigError(f"all tones of {name!r} must share one depth "
                                  "(use weights for relative amplitudes)")
            comps = []
            for eta, _, w, ph in entries:
                resolved = resolver(eta)
                if resolved is not None:
                    comps.append(mod.ModulationComponent(resolved, w, ph))
            if comps:
                laws[name] = mod.ParameterLaw(bare[name], depth, tuple(comps))
        return SystemSpec(laws=laws, **spec_kwargs)

    # catalog-driven tone frequencies are resolved on the spec stripped of
    # those tones (the catalog depends only on bare values and depths)
    spec0 = build(lambda eta: None if isinstance(eta, tuple) else eta)

    def resolve(eta):
        if not isinstance(eta, tuple):
            return eta
        from .effective import resonance_frequency
        _, effect, zeta, m_node = eta
        return resonance_frequency(spec0, effect, zeta=zeta,
                                   M=None if m_node is None else int(m_node))[0]

    spec = build(resolve)

    extra = {
        "dim_cavity": int(section.get("dim_cavity", 0)),
        "dim_atom": int(section.get("dim_atom", 2)),
        "rwa": bool(section.get("rwa", False)),
    }
    return spec, extra


def parse_config(text: str, base_dir: Path | None = None) -> ExperimentConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")

    kind = _require(doc, "kind", "config")
    if kind not in KINDS:
        raise ConfigError(f"unknown scenario kind {kind!r}; expected one of {KINDS}")
    label = str(doc.get("label", kind))
    out_dir = Path(doc.get("output_dir", "out"))
    if base_dir is not None and not out_dir.is_absolute():
        out_dir = base_dir / out_dir

    grid = None
    if "grid" in doc:
        grid = GridSpec(t_max=float(_require(doc["grid"], "t_max", "grid")),
                        n_points=int(doc["grid"].get("n_points", 1001)))

    integ = doc.get("integrator", {})
    cfg = IntegratorConfig(
        rtol=float(integ.get("rtol", 1e-9)),
        atol=float(integ.get("atol", 1e-12)),
        max_step=float(integ.get("max_step", math.inf)),
        method=str(integ.get("method", "adaptive-embedded-RK")),
        norm_guard=(None if integ.get("norm_guard") is None
                    else float(integ["norm_guard"])),
    )

    reduced = None
    reduced_extra = {}
    if "reduced" in doc:
        r = doc["reduced"]
        pump = None
        if "pump" in r and r["pump"] and float(r["pump"].get("amplitude", 0.0)) != 0.0:
            pump = (float(r["pump"]["amplitude"]), float(r["pump"].get("phase", 0.0)))
        reduced = ReducedDCEParams(
            omega_r=float(r.get("omega_r", 0.0)),
            alpha_r=float(r.get("alpha_r", 1.0)),
            q_r=float(_require(r, "q_r", "reduced")),
            pump=pump,
        )
        reduced_extra = {
            "kappa": float(r.get("kappa", 0.0)),
            "nbar": float(r.get("nbar", 0.0)),
            "dim": int(r.get("dim", 0)),
        }

    system = None
    system_extra = {}
    if "system" in doc:
        system, system_extra = _resolve_spec(doc["system"])

    needs_reduced = kind in ("reduced-dce",)
    if needs_reduced and reduced is None:
        raise ConfigError(f"kind {kind!r} requires a [reduced] section")
    needs_system = kind in ("full-qubit", "hp-slab", "sideband", "coeff-table", "spectrum")
    if needs_system and system is None:
        raise ConfigError(f"kind {kind!r} requires a [system] section")
    if kind == "pump" and "pump" not in doc:
        raise ConfigError("kind 'pump' requires a [pump] section")
    if kind not in ("coeff-table", "spectrum") and grid is None:
        raise ConfigError(f"kind {kind!r} requires a [grid] section")

    pump = None
    if "pump" in doc and isinstance(doc["pump"], dict) and "rho" in doc["pump"]:
        pump = {"rho": _complex_of(doc["pump"]["rho"]),
                "xi": _complex_of(doc["pump"].get("xi", 0.0)),
                "dim": int(doc["pump"].get("dim", 0))}

    return ExperimentConfig(
        kind=kind, label=label, output_dir=out_dir, grid=grid, integrator=cfg,
        reduced=reduced, reduced_extra=reduced_extra,
        system=system, system_extra=system_extra,
        sweep=doc.get("sweep"), sideband=doc.get("sideband"),
        pump=pump, coeffs=doc.get("coeffs"), source_text=text,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {p} does not exist")
    return parse_config(p.read_text(encoding="utf-8"), base_dir=p.parent)
