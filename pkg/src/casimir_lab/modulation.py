"""Prescribed time dependence of the system parameters.

Every parameter X in {omega, Omega, g, chi, d} follows

    X(t) = X0 + eps_X * sum_j w_j * sin(eta_j t + phi_j),

with the complex modulation depth of tone j defined as
eps_X^(j) = eps_X * w_j * exp(i phi_j).  Frequencies are in units of the
bare cavity frequency omega0 unless documented otherwise by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidDimensionError

# Tones with eta >= FAST_THRESHOLD * omega0 count as "fast" (boundary
# inclusive); all paper tones sit near 2*omega0 or far below omega0, so
# the default never matters in practice.
FAST_THRESHOLD = 0.5


@dataclass(frozen=True)
class ModulationComponent:
    """One sinusoidal tone: angular frequency eta, weight w >= 0, phase phi."""

    eta: float
    weight: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        if self.weight < 0:
            raise InvalidDimensionError(f"tone weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class ParameterLaw:
    """Bare value plus multi-tone sinusoidal modulation."""

    bare: float
    depth: float = 0.0
    components: tuple[ModulationComponent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.depth < 0:
            raise InvalidDimensionError(f"modulation depth must be >= 0, got {self.depth}")
        comps = tuple(self.components)
        etas = [c.eta for c in comps]
        if len(set(etas)) != len(etas):
            raise InvalidDimensionError("tone frequencies must be pairwise distinct")
        object.__setattr__(self, "components", comps)


def constant(value: float) -> ParameterLaw:
    return ParameterLaw(bare=value)


def single_tone(bare: float, depth: float, eta: float, weight: float = 1.0,
                phase: float = 0.0) -> ParameterLaw:
    return ParameterLaw(bare, depth, (ModulationComponent(eta, weight, phase),))


def evaluate(law: ParameterLaw, t: float) -> float:
    """X(t) = X0 + eps_X sum_j w_j sin(eta_j t + phi_j)."""
    x = law.bare
    if law.depth != 0.0:
        for c in law.components:
            x += law.depth * c.weight * math.sin(c.eta * t + c.phase)
    return x


def complex_depth(law: ParameterLaw, j: int) -> complex:
    """eps_X^(j) = eps_X w_j exp(i phi_j)."""
    try:
        c = law.components[j]
    except IndexError:
        raise InvalidDimensionError(
            f"tone index {j} out of range for {len(law.components)} components"
        ) from None
    return law.depth * c.weight * complex(math.cos(c.phase), math.sin(c.phase))


def classify_tones(law: ParameterLaw, omega0: float,
                   threshold: float = FAST_THRESHOLD) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition tone indices into (fast, slow); fast means eta >= threshold*omega0,
    boundary inclusive on the fast side."""
    if omega0 <= 0:
        raise InvalidDimensionError(f"omega0 must be > 0, got {omega0}")
    fast, slow = [], []
    for j, c in enumerate(law.components):
        (fast if c.eta >= threshold * omega0 else slow).append(j)
    return tuple(fast), tuple(slow)
