"""Acceptance suite: one callable per criterion, each checked at its stated
tolerance.  `run_acceptance` prints one PASS/FAIL line per criterion; the
pytest module tests/test_acceptance.py asserts each result.

The microscopic-validation criterion is implemented exactly as specified
and is expected to fail: the quadratic-Kerr reduced model undershoots the
converged microscopic peak by ~25-30% at the pinned drive strength (see
the detail string it prints; two independent microscopic routes agree to
~1% with each other, isolating the defect in the quadratic truncation of
the level curvature, not in the numerics).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import modulation as mod
from . import dressed, observables
from .dynamics import (
    IntegratorConfig,
    propagate_dce_amplitudes,
    propagate_lindblad,
    propagate_schrodinger,
    propagate_sideband_pair,
    pumped_analytic,
)
from .effective import (
    reduced_model_map,
    resonance_frequency,
    sefs_halfwidth,
    theta_anti_dce,
    tone_depths,
)
from .errors import TruncationError
from .fock import DensityMatrix, thermal_state, vacuum_state
from .hamiltonians import (
    ReducedDCEParams,
    SystemSpec,
    build_nonlinear_dce,
    build_pumped_linear,
    build_rabi,
    retuned_spec,
)
from .runner import (
    SWEEP_CFG,
    run_full_qubit,
    run_reduced,
    scan_dim,
    sweep_omega_r,
    _fig4_sweep,
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _result(name, passed, detail, t0) -> CriterionResult:
    return CriterionResult(name, bool(passed), detail, time.perf_counter() - t0)


# ---------------------------------------------------------------------------


def criterion_appendix_b_spectrum() -> CriterionResult:
    """Dressed eigenfrequencies match brute-force JC diagonalization to
    1e-12 for m <= 20 (both detuning signs); closed Theta forms agree with
    the general formula within the stated asymptotic bands."""
    t0 = time.perf_counter()
    worst_spec = 0.0
    for Omega0 in (0.8, 1.2):
        spec = SystemSpec(omega0=1.0, Omega0=Omega0, g0=0.05)
        eig = np.linalg.eigvalsh(build_rabi(spec, 0.0, 24, rwa=True).entries)
        for m in range(0, 21):
            for branch in dressed.branch_states(m):
                lam = dressed.lambda_bare(spec, m, branch)
                worst_spec = max(worst_spec, float(np.abs(eig - lam).min()))
    ok_spec = worst_spec < 1e-12

    # dispersive closed forms vs general within 3 (g0 sqrt(m)/Delta_-)^2
    eta = 2.0
    g0 = 0.002
    spec = SystemSpec(omega0=1.0, Omega0=0.8, g0=g0,
                      laws={"omega": mod.single_tone(1.0, 3e-4, eta, 1.0, 0.2),
                            "Omega": mod.single_tone(0.8, 2e-4, eta, 1.0, -0.4),
                            "g": mod.single_tone(g0, 2e-4, eta, 1.0, 0.1)})
    eps = tone_depths(spec, eta)
    d = dressed.ground_branch(spec)
    worst_ratio = 0.0
    for m in range(0, 7):
        band = 3.0 * (g0 * math.sqrt(m + 2) / 0.2) ** 2
        for tb in dressed.branch_states(m):
            for sb in dressed.branch_states(m + 2):
                gen = dressed.theta_general(spec, eta, eps, m, tb, sb)
                closed = dressed.theta_dispersive_closed(
                    spec, eta, eps, m, (tb == d) if m > 0 else True, sb == d)
                scale = max(abs(closed), abs(gen), 1e-16)
                worst_ratio = max(worst_ratio, abs(gen - closed) / scale / band)
    ok_disp = worst_ratio <= 1.0

    # resonant closed forms exact in the chi channel
    spec_r = SystemSpec(omega0=1.0, Omega0=1.0, g0=0.03,
                        laws={"chi": mod.single_tone(0.0, 1e-3, eta, 1.0, 0.35)})
    eps_r = tone_depths(spec_r, eta)
    worst_res = max(
        abs(dressed.theta_general(spec_r, eta, eps_r, m, tb, sb)
            - dressed.theta_resonant_closed(spec_r, eta, eps_r, m, tb, sb))
        for m in range(0, 6)
        for tb in dressed.branch_states(m)
        for sb in dressed.branch_states(m + 2))
    ok_res = worst_res < 1e-15

    return _result(
        "appendix-b-spectrum", ok_spec and ok_disp and ok_res,
        f"max |lambda - eig| = {worst_spec:.1e} (tol 1e-12); dispersive "
        f"Theta within {worst_ratio:.2f}x of the 3(g sqrt(m)/D)^2 band; "
        f"resonant chi channel exact to {worst_res:.1e}", t0)


def criterion_small_drive_two_photon_cap() -> CriterionResult:
    """q_r = 0.05 |a_r|, w_r = -2 a_r: P2 >= 0.99 with period pi/(sqrt2 q_r)
    within 1%, and <n> never exceeds 2.05."""
    t0 = time.perf_counter()
    q = 0.05
    p = ReducedDCEParams(omega_r=-2.0, alpha_r=1.0, q_r=q)
    grid = np.linspace(0.0, 5.0 / q, 2001)
    traj = propagate_dce_amplitudes(p, vacuum_state(32), grid,
                                    IntegratorConfig(rtol=1e-9, atol=1e-12,
                                                     norm_guard=1e-6),
                                    store_states=True)
    p2 = np.abs(traj.states[:, 2]) ** 2
    n_max = traj.records["mean_n"].max()
    t_first = grid[int(np.argmax(p2))]
    period = math.pi / (math.sqrt(2.0) * q)
    rel_period = abs(t_first - period / 2.0) / (period / 2.0)
    ok = p2.max() >= 0.99 and n_max <= 2.05 and rel_period <= 0.01
    return _result(
        "small-drive-two-photon-cap", ok,
        f"P2max = {p2.max():.4f} (>= 0.99), n_max = {n_max:.4f} (<= 2.05), "
        f"half-period dev = {rel_period:.4f} (<= 0.01)", t0)


def criterion_linear_dce_oracle_triangle() -> CriterionResult:
    """alpha_r = 0, w_r = 0: <n>(t) = sinh^2(2 q_r t) to 1e-4 relative for
    2 q_r t <= 3 on both propagation routes."""
    t0 = time.perf_counter()
    p = ReducedDCEParams(omega_r=0.0, alpha_r=0.0, q_r=1.0)
    dim = 2048
    grid = np.linspace(0.0, 1.5, 16)
    cfg = IntegratorConfig(rtol=1e-9, atol=1e-12, norm_guard=1e-6)
    ref = np.sinh(2.0 * grid[1:]) ** 2

    t_amp = propagate_dce_amplitudes(p, vacuum_state(dim), grid, cfg)
    rel_amp = float((np.abs(t_amp.records["mean_n"][1:] - ref) / ref).max())
    t_lab = propagate_schrodinger(build_nonlinear_dce(p, dim), vacuum_state(dim),
                                  grid, cfg)
    rel_lab = float((np.abs(t_lab.records["mean_n"][1:] - ref) / ref).max())
    ok = rel_amp < 1e-4 and rel_lab < 1e-4
    return _result(
        "linear-dce-oracle-triangle", ok,
        f"max rel error vs sinh^2(2qt): amplitude route {rel_amp:.2e}, "
        f"lab route {rel_lab:.2e} (tol 1e-4)", t0)


def criterion_pump_phase_asymmetry() -> CriterionResult:
    """|rho| = |xi|, |xi| t = 3: numeric <n> ratio between the -pi/2 and
    +pi/2 phase settings matches the closed form to 1e-4 relative, and the
    -pi/2 branch dominates."""
    t0 = time.perf_counter()
    xi = 1.0
    dim = 4096
    grid = np.linspace(0.0, 3.0, 7)
    cfg = IntegratorConfig(rtol=1e-9, atol=1e-12, norm_guard=1e-6)
    numeric = {}
    analytic = {}
    for tag, rho in (("amp", np.exp(-1j * math.pi / 4)),
                     ("sup", np.exp(+1j * math.pi / 4))):
        traj = propagate_schrodinger(build_pumped_linear(rho, xi, dim),
                                     vacuum_state(dim), grid, cfg)
        numeric[tag] = float(traj.records["mean_n"][-1])
        analytic[tag] = pumped_analytic(rho, xi, 3.0).mean_n
    ratio_num = numeric["amp"] / numeric["sup"]
    ratio_ana = analytic["amp"] / analytic["sup"]
    rel = abs(ratio_num - ratio_ana) / ratio_ana
    ok = rel < 1e-4 and numeric["amp"] > numeric["sup"]
    return _result(
        "pump-phase-asymmetry", ok,
        f"numeric ratio {ratio_num:.6f} vs analytic {ratio_ana:.6f} "
        f"(rel {rel:.2e}, tol 1e-4); amplified branch {numeric['amp']:.1f} > "
        f"suppressed {numeric['sup']:.1f}", t0)


def criterion_state_classification() -> CriterionResult:
    """At w_r = 0 the state at minimum (Delta p)^2 satisfies
    Q/<n> = 2 + 1/<n> within 15%; the thermal state gives Q/<n> = 1
    within 1%."""
    t0 = time.perf_counter()
    qr_t, rec = run_reduced(ReducedDCEParams(omega_r=0.0, alpha_r=1.0, q_r=100.0),
                            5.0, 1001)
    der = observables.records_from_series(rec)
    i = int(np.argmin(der["var_p"]))
    n_i = float(der["mean_n"][i])
    ratio = float(der["mandel_q"][i] / n_i)
    bench = 2.0 + 1.0 / n_i
    dev_sq = abs(ratio - bench) / bench

    rho, _ = thermal_state(0.1, 40)
    q_th = observables.mandel_q(rho)
    n_th = observables.mean_photon(rho)
    dev_th = abs(q_th / n_th - 1.0)
    ok = dev_sq <= 0.15 and dev_th <= 0.01
    return _result(
        "state-classification-benchmarks", ok,
        f"squeezed-vacuum benchmark dev {dev_sq:.3f} (<= 0.15, Q/n = {ratio:.3f} "
        f"vs {bench:.3f}); thermal Q/n dev {dev_th:.2e} (<= 0.01)", t0)


def criterion_anti_dce() -> CriterionResult:
    """Theta^A vanishes under pure chi modulation; with eps_g != 0 the
    amplitude ladder transfers >= 0.95 population |g,3> -> |e,0> over half
    a Rabi period."""
    t0 = time.perf_counter()
    g0 = 0.04
    eta_probe = 1.7
    spec_chi = SystemSpec(omega0=1.0, Omega0=1.3, g0=g0,
                          laws={"chi": mod.single_tone(0.0, 1e-3, eta_probe)})
    theta_chi = theta_anti_dce(spec_chi, eta_probe, m=1)

    spec = SystemSpec(omega0=1.0, Omega0=1.3, g0=g0,
                      laws={"g": mod.single_tone(g0, 0.4 * g0, eta=eta_probe)})
    traj, info = propagate_sideband_pair(spec, "Anti-DCE", M=1,
                                         cfg=IntegratorConfig(rtol=1e-9, atol=1e-12))
    target = np.abs(traj.states[:, info["target_index"]]) ** 2
    i_half = int(np.argmin(np.abs(traj.times - info["t_half"])))
    transfer = float(target[i_half])
    ok = theta_chi == 0 and transfer >= 0.95
    return _result(
        "anti-dce-selection-and-transfer", ok,
        f"Theta_A(chi only) = {abs(theta_chi):.1e} (must be 0); transfer "
        f"|g,3> -> |e,0| = {transfer:.4f} (>= 0.95) at t = pi/(2|Theta_A|)", t0)


def criterion_dissipative_contracts() -> CriterionResult:
    """Lindblad runs keep |Tr rho - 1| < 1e-6, Hermiticity < 1e-10 and
    min eigenvalue > -1e-8; the kappa = q_r replica is monotone-envelope
    after its first maximum."""
    t0 = time.perf_counter()
    q = 3.0
    p = ReducedDCEParams(omega_r=-10.0, alpha_r=1.0, q_r=q)
    h = build_nonlinear_dce(p, 64)
    rho0, _ = thermal_state(0.0, 64)
    grid = np.linspace(0.0, 10.0 / q, 1001)
    traj = propagate_lindblad(h, q, rho0, grid,
                              IntegratorConfig(rtol=1e-8, atol=1e-11,
                                               norm_guard=1e-6))
    trace_dev = float(np.abs(traj.records["norm"] - 1.0).max())
    herm_dev = float(traj.records["herm_dev"].max())
    min_eig = float(traj.records["min_eig"].min())

    n = traj.records["mean_n"]
    i0 = int(np.argmax(n))
    later = n[i0:]
    rising = (np.diff(later) > 0).astype(int)
    peaks = [later[i] for i in range(1, len(later) - 1)
             if later[i] >= later[i - 1] and later[i] >= later[i + 1]]
    monotone = all(b <= a + 1e-3 * n.max() for a, b in zip(peaks, peaks[1:]))
    ok = (trace_dev < 1e-6 and herm_dev < 1e-10 and min_eig > -1e-8 and monotone)
    return _result(
        "dissipative-contracts", ok,
        f"trace dev {trace_dev:.1e} (<1e-6), herm {herm_dev:.1e} (<1e-10), "
        f"min eig {min_eig:.1e} (>-1e-8), envelope monotone after peak: "
        f"{monotone} ({len(peaks)} later maxima)", t0)


def criterion_parity_and_truncation() -> CriterionResult:
    """Vacuum-start parametric runs keep odd-Fock weight < 1e-12 and
    top-two-level leakage < 1e-6; doubling the dimension changes
    <n>_max by < 0.1%."""
    t0 = time.perf_counter()
    worst_odd = 0.0
    worst_leak = 0.0
    for w, q in ((-10.0, 3.0), (0.0, 3.0), (-2.0, 0.05)):
        p = ReducedDCEParams(omega_r=w, alpha_r=1.0, q_r=q)
        dim = scan_dim(q, 1.0, w)
        grid = np.linspace(0.0, 5.0 / q, 201)
        traj = propagate_dce_amplitudes(p, vacuum_state(dim), grid, SWEEP_CFG)
        worst_odd = max(worst_odd, float(traj.records["odd_weight"].max()))
        worst_leak = max(worst_leak, float(traj.records["leakage"].max()))

    p = ReducedDCEParams(omega_r=-109.0, alpha_r=1.0, q_r=100.0)
    grid = np.linspace(0.0, 5.0 / 100.0, 1001)
    dim = scan_dim(100.0, 1.0, -109.0)
    n1 = propagate_dce_amplitudes(p, vacuum_state(dim), grid,
                                  SWEEP_CFG).records["mean_n"].max()
    n2 = propagate_dce_amplitudes(p, vacuum_state(2 * dim), grid,
                                  SWEEP_CFG).records["mean_n"].max()
    dim_change = abs(n1 - n2) / n2
    ok = worst_odd < 1e-12 and worst_leak < 1e-6 and dim_change < 1e-3
    return _result(
        "parity-and-truncation", ok,
        f"odd weight {worst_odd:.1e} (<1e-12), leakage {worst_leak:.1e} "
        f"(<1e-6), dim-doubling change {dim_change:.2e} (<1e-3)", t0)


def criterion_fig4a_slope() -> CriterionResult:
    """|w_r^(max)|/q_r over q_r/|a_r| in {100, 200, 400, 650}: linear fit
    slope within 1.09 +- 0.10."""
    t0 = time.perf_counter()
    data = _fig4_sweep()
    q = data["ratio"]
    w = np.abs(data["omega_max"])
    slope = float(np.dot(q, w) / np.dot(q, q))
    ok = abs(slope - 1.09) <= 0.10
    per_ratio = ", ".join(f"{r:.0f}: {abs(m)/r:.3f}"
                          for r, m in zip(data["ratio"], data["omega_max"]))
    return _result(
        "fig4a-slope", ok,
        f"fit slope {slope:.4f} (1.09 +- 0.10); per-ratio |w_max|/q_r: "
        f"{per_ratio}", t0)


def criterion_fig4b_amplitudes() -> CriterionResult:
    """At q_r/|a_r| = 650: n_max/(q_r/|a_r|) in [1.22, 1.50] at w_r^(max)
    and in [0.98, 1.20] at w_r = 0."""
    t0 = time.perf_counter()
    data = _fig4_sweep()
    i = int(np.argmax(data["ratio"]))
    opt = float(data["n_max_opt"][i] / data["ratio"][i])
    dce = float(data["n_max_dce"][i] / data["ratio"][i])
    ok = 1.22 <= opt <= 1.50 and 0.98 <= dce <= 1.20
    return _result(
        "fig4b-amplitudes", ok,
        f"n_max/ratio at 650: optimized {opt:.4f} (in [1.22, 1.50]), "
        f"w_r = 0 {dce:.4f} (in [0.98, 1.20])", t0)


MICRO_TOL = 0.10


def criterion_microscopic_validation() -> CriterionResult:
    """Full single-qubit Rabi model (w0 = 1, W0 = 1.2, g0 = 0.02,
    eps_g = 0.2 g0, single tone at 2(w_g - zeta), zeta scanned over the
    SEFS window) vs the mapped nonlinear-DCE model (q_r = |theta_+|,
    a_r = -alpha): peak <n> over q_r t <= 3 within 10% relative.

    Implemented exactly as stated.  The criterion fails: the pinned
    drive strength makes the quadratic-Kerr truncation break down at the
    peak (see detail)."""
    t0 = time.perf_counter()
    g0 = 0.02
    spec = SystemSpec(omega0=1.0, Omega0=1.2, g0=g0,
                      laws={"g": mod.single_tone(g0, 0.2 * g0, eta=2.0)})
    params0, _ = reduced_model_map(spec, "g-DCE", zeta=0.0)
    q_r, a_r = params0.q_r, params0.alpha_r
    m_ref = int(round(1.5 * q_r / a_r))
    width = sefs_halfwidth(spec, "g-DCE", m_ref=m_ref)
    t_end = 3.0 / q_r
    zetas = np.linspace(-width, width, 13)
    grid = np.linspace(0.0, t_end, 401)

    cfg_r = IntegratorConfig(rtol=1e-8, atol=1e-10, norm_guard=1e-4,
                             method="adaptive-embedded-RK853")
    red = np.array([
        propagate_dce_amplitudes(
            ReducedDCEParams(omega_r=float(z), alpha_r=a_r, q_r=q_r),
            vacuum_state(scan_dim(q_r, a_r, z)), grid, cfg_r
        ).records["mean_n"].max()
        for z in zetas])

    cfg_f = IntegratorConfig(rtol=1e-7, atol=1e-9, norm_guard=1e-3,
                             method="adaptive-embedded-RK853")
    full = np.empty(len(zetas))
    for i, z in enumerate(zetas):
        eta = resonance_frequency(spec, "g-DCE", zeta=float(z))[0]
        tuned = retuned_spec(spec, eta)
        # the microscopic state reaches beyond the quadratic-model support;
        # start 1.45x above it and let the leakage guard force a retry
        dim_c = max(48, int(math.ceil(1.45 * scan_dim(q_r, a_r, z))) + 16)
        for _ in range(3):
            try:
                traj = run_full_qubit(tuned, t_end, 401, dim_c, cfg_f,
                                      frame="interaction")
                break
            except TruncationError:
                dim_c = int(math.ceil(1.5 * dim_c))
        else:
            raise TruncationError("microscopic run kept leaking after retries")
        full[i] = traj.records["mean_n"].max()

    best_red = float(red.max())
    best_full = float(full.max())
    rel = abs(best_full - best_red) / best_red
    ok = rel <= MICRO_TOL
    return _result(
        "microscopic-validation", ok,
        f"peak <n>: full Rabi {best_full:.2f} (zeta {zetas[full.argmax()]:+.2e}) "
        f"vs mapped quadratic model {best_red:.2f} (zeta {zetas[red.argmax()]:+.2e}); "
        f"relative {rel:.3f} > tol {MICRO_TOL} -- the quadratic-Kerr level "
        f"curvature is off by ~2 (g0 sqrt(n)/Delta)^2 ~ 0.4 at the peak "
        f"(eps_g/g0 = 0.2 pins peak n (g0/Delta)^2 ~ 0.15 regardless of g0); "
        f"the dressed-ladder route with exact corrected eigenfrequencies "
        f"reproduces the full model to ~1% (see test_acceptance)", t0)


def criterion_plotkit_determinism() -> CriterionResult:
    """[SECONDARY] plotkit renders the figure CSV sets into byte-identical
    SVGs; skipped (passed = True, noted) when plotkit is not installed."""
    t0 = time.perf_counter()
    try:
        from plotkit.render import render
        from plotkit.spec import parse_figure_spec
    except ImportError:
        return _result("plotkit-determinism", True,
                       "plotkit not installed; primary suite unaffected (skip)", t0)

    import tempfile
    from pathlib import Path
    from .runner import reproduce_figure

    with tempfile.TemporaryDirectory() as td:
        base = Path(td)
        cfg = IntegratorConfig(rtol=1e-6, atol=1e-8, norm_guard=1e-2,
                               method="adaptive-embedded-RK853")
        reproduce_figure("fig2", base, cfg=cfg)
        spec_text = """\
title: parametric growth
output: fig2.svg
x: {column: qr_t, label: "q_r t"}
curves:
  - {path: fig2_curve1_w0.csv, label: "w = 0"}
  - {path: fig2_curve3_w-10.csv, label: "w = -10"}
  - {path: fig2_line5_kappa.csv, label: "kappa = q_r"}
panels:
  - {column: mean_n, label: "mean n"}
  - {column: mandel_q, label: "Q"}
  - {column: var_p, label: "var p"}
"""
        fig_spec = parse_figure_spec(spec_text, base_dir=base)
        first = render(fig_spec).read_bytes()
        fig_spec.output.unlink()
        second = render(fig_spec).read_bytes()
        ok = first == second and len(first) > 0
    return _result("plotkit-determinism", ok,
                   f"fig2 SVG byte-identical across two renders: {ok} "
                   f"({len(first)} bytes)", t0)


# ordered fast-to-slow; the shared fig4 sweep is computed once (cached)
CRITERIA = (
    criterion_appendix_b_spectrum,
    criterion_state_classification,
    criterion_small_drive_two_photon_cap,
    criterion_anti_dce,
    criterion_linear_dce_oracle_triangle,
    criterion_pump_phase_asymmetry,
    criterion_dissipative_contracts,
    criterion_parity_and_truncation,
    criterion_fig4a_slope,
    criterion_fig4b_amplitudes,
    criterion_plotkit_determinism,
    criterion_microscopic_validation,
)


def run_acceptance(only: list[str] | None = None) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        name = fn.__name__.replace("criterion_", "").replace("_", "-")
        if only and not any(sub in name for sub in only):
            continue
        res = fn()
        results.append(res)
        status = "PASS" if res.passed else "FAIL"
        print(f"{status}  {res.name}  [{res.elapsed:.1f}s]  {res.detail}")
    return results
