"""Acceptance suite: every criterion at its stated tolerance, one test per
criterion, printing one PASS/FAIL line each.

Heads-up on runtime: the figure-4 sweeps and the microscopic validation
integrate long trajectories and together take tens of minutes; everything
else finishes in seconds.  The microscopic-validation criterion is
implemented exactly as specified and fails for a documented reason (the
quadratic-Kerr reduced model cannot track the converged microscopic peak
at the pinned drive strength); the companion test below shows the full
model agrees with the dressed-ladder route to ~2%, which is the
microscopic statement that does hold.
"""

import math

import numpy as np
import pytest

from casimir_lab import acceptance


@pytest.mark.parametrize(
    "criterion", acceptance.CRITERIA,
    ids=[fn.__name__.replace("criterion_", "") for fn in acceptance.CRITERIA])
def test_acceptance_criterion(criterion):
    result = criterion()
    status = "PASS" if result.passed else "FAIL"
    print(f"\n{status}  {result.name}  [{result.elapsed:.1f}s]  {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"


def test_full_rabi_matches_dressed_ladder():
    """Companion to microscopic-validation: the dressed amplitude ladder
    (general two-excitation couplings, exact corrected eigenfrequencies)
    tracks the full Rabi model's photon number to a few percent at the
    acceptance parameters -- the microscopic emergence of the DCE."""
    from casimir_lab import modulation as mod
    from casimir_lab.dynamics import IntegratorConfig, propagate_dressed_ladder
    from casimir_lab.effective import reduced_model_map, resonance_frequency
    from casimir_lab.hamiltonians import SystemSpec, retuned_spec
    from casimir_lab.runner import run_full_qubit

    g0 = 0.02
    spec = SystemSpec(omega0=1.0, Omega0=1.2, g0=g0,
                      laws={"g": mod.single_tone(g0, 0.2 * g0, eta=2.0)})
    params, _ = reduced_model_map(spec, "g-DCE", zeta=0.0)
    z = -2.4e-4
    eta = resonance_frequency(spec, "g-DCE", zeta=z)[0]
    tuned = retuned_spec(spec, eta)
    t_end = 3.0 / params.q_r
    grid = np.linspace(0.0, t_end, 201)
    cfg = IntegratorConfig(rtol=1e-7, atol=1e-9, norm_guard=1e-3,
                           method="adaptive-embedded-RK853")
    ladder = propagate_dressed_ladder(tuned, {(0, +1): 1.0}, 60, grid, cfg)
    full = run_full_qubit(tuned, t_end, 201, 100, cfg, frame="interaction")
    peak_ladder = ladder.records["mean_excitation"].max()
    peak_full = full.records["mean_n"].max()
    assert peak_full == pytest.approx(peak_ladder, rel=0.05)
    assert peak_full > 15.0  # well beyond the quadratic model's cap
