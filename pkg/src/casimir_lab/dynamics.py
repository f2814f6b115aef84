"""State propagation and closed-form solutions.

Propagation routes:

* `propagate_schrodinger`: generic i d|psi>/dt = H(t)|psi> via adaptive
  embedded Runge-Kutta (scipy), with norm-drift and truncation-leakage
  guards; H may be a static OperatorMatrix, a ModulatedHamiltonian, or a
  callable t -> OperatorMatrix.

* `propagate_lindblad`: zero-temperature master equation
  d rho/dt = -i[H,rho] + kappa/2 (2 a rho a+ - a+ a rho - rho a+ a),
  direct right-hand-side evaluation (the superoperator is never formed),
  Hermitian symmetrization at output times.

* `propagate_dce_amplitudes`: the rotating-frame amplitude ladder of the
  nonlinear parametric Hamiltonian,

      dc_m/dt = q_r [ sqrt(m(m-1)) e^{+2it[w_r+2a_r(m-1)]} c_{m-2}
                    - sqrt((m+1)(m+2)) e^{-2it[w_r+2a_r(m+1)]} c_{m+2} ],

  the banded fast path (O(dim) per evaluation) equivalent to the lab-frame
  Schrodinger route after unwrapping the diagonal phases
  exp(-it[w_r m + a_r m^2]); optional linear pump adds m <-> m+-1 bonds.

* `propagate_sideband_pair`: the dressed-state amplitude ladder driven by
  fast-tone two-excitation couplings, pump couplings, and slow-tone
  intra-level couplings, phased by the corrected eigenfrequencies.

Closed forms kept as independent oracles: the decoupled two-level pair
solution, the c-number parametric amplifier (F, G, B), and the pumped
quadratic Hamiltonian's photon number with its phase-selected asymptotes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from . import dressed
from .errors import IntegrationError, InvalidDimensionError, RegimeError, TruncationError
from .fock import DensityMatrix, OperatorMatrix, StateVector, annihilation_op
from .hamiltonians import ModulatedHamiltonian, ReducedDCEParams, SystemSpec
from .modulation import FAST_THRESHOLD
from .effective import system_tones, tone_depths, resonance_frequency

LEAK_GUARD = 1e-6
_NEG_EIG_GUARD = -1e-6

_SCIPY_METHOD = {"adaptive-embedded-RK": "RK45", "adaptive-embedded-RK853": "DOP853"}


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and method tag for the propagators.

    norm_guard bounds |<psi|psi> - 1| (trace for Lindblad) over the run;
    None means the default contract 10 * rtol.  Long parameter-sweep runs
    override it explicitly (documented where they do).
    """

    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf
    method: str = "adaptive-embedded-RK"
    norm_guard: float | None = None

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise InvalidDimensionError("rtol and atol must be positive")
        if self.method not in (*_SCIPY_METHOD, "fixed-step-RK4"):
            raise InvalidDimensionError(f"unknown method tag {self.method!r}")

    @property
    def norm_bound(self) -> float:
        return 10.0 * self.rtol if self.norm_guard is None else self.norm_guard


@dataclass(frozen=True)
class SpaceLayout:
    """Block structure of a state vector: `n_blocks` copies of a mode space
    of dimension `dim_mode`, Fock index fast.  `block_excitation` carries
    the atomic excitation count of each block (for <b+b>-style records)."""

    dim_mode: int
    n_blocks: int = 1
    block_excitation: tuple[float, ...] | None = None

    @property
    def dim(self) -> int:
        return self.dim_mode * self.n_blocks


@dataclass
class Trajectory:
    """Time grid plus per-time records and run metadata.

    records always holds the scalar observable series (mean photon number,
    second moment, <a>, <a^2>, parity weight, leakage, norm/trace); states
    (or density matrices) are kept only when requested.
    """

    times: np.ndarray
    records: dict[str, np.ndarray]
    states: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def state_at(self, i: int) -> StateVector:
        if self.states is None or self.states.ndim != 2:
            raise IntegrationError("trajectory does not hold state vectors")
        v = self.states[i]
        return StateVector(len(v), v / np.linalg.norm(v))

    def density_at(self, i: int) -> DensityMatrix:
        if self.states is None or self.states.ndim != 3:
            raise IntegrationError("trajectory does not hold density matrices")
        rho = self.states[i]
        rho = 0.5 * (rho + rho.conj().T)
        return DensityMatrix(len(rho), rho / np.trace(rho).real)


def _mode_records(block: np.ndarray, layout: SpaceLayout) -> dict[str, float]:
    """Scalar observables of one state vector reshaped to (n_blocks, dim_mode)."""
    psi = block.reshape(layout.n_blocks, layout.dim_mode)
    pm = np.abs(psi) ** 2
    p_fock = pm.sum(axis=0)
    m = np.arange(layout.dim_mode)
    sq1 = np.sqrt(m[1:])                       # <m-1|a|m>
    sq2 = np.sqrt(m[2:] * (m[2:] - 1.0))       # <m-2|a^2|m>
    exp_a = complex(np.sum(psi[:, :-1].conj() * psi[:, 1:] * sq1))
    exp_a2 = complex(np.sum(psi[:, :-2].conj() * psi[:, 2:] * sq2))
    out = {
        "norm": float(pm.sum()),
        "mean_n": float(np.dot(m, p_fock)),
        "mean_n2": float(np.dot(m * m, p_fock)),
        "re_a": exp_a.real, "im_a": exp_a.imag,
        "re_a2": exp_a2.real, "im_a2": exp_a2.imag,
        "odd_weight": float(p_fock[1::2].sum()),
        "leakage": float(p_fock[-2:].sum()),
    }
    if layout.block_excitation is not None:
        out["atom_excitation"] = float(
            np.dot(np.asarray(layout.block_excitation), pm.sum(axis=1)))
    return out


def _stack_records(rows: list[dict[str, float]]) -> dict[str, np.ndarray]:
    return {k: np.array([r[k] for r in rows]) for k in rows[0]}


def _check_run(records: dict[str, np.ndarray], times: np.ndarray,
               cfg: IntegratorConfig, norm_key: str = "norm") -> float:
    drift = float(np.abs(records[norm_key] - 1.0).max())
    if drift > cfg.norm_bound:
        raise IntegrationError(
            f"norm drift {drift:.3e} exceeds bound {cfg.norm_bound:.3e}; "
            "tighten tolerances or raise norm_guard deliberately")
    leak = records.get("leakage")
    if leak is not None:
        worst = int(np.argmax(leak))
        if leak[worst] > LEAK_GUARD:
            raise TruncationError(
                f"truncation leakage {leak[worst]:.3e} at t = {times[worst]:.6g} "
                f"exceeds {LEAK_GUARD:.0e}; increase the Fock dimension")
    return drift


def _solve(rhs, y0: np.ndarray, grid: np.ndarray, cfg: IntegratorConfig):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise InvalidDimensionError("time grid must be strictly increasing, length >= 2")
    if cfg.method == "fixed-step-RK4":
        return _rk4_fixed(rhs, y0, grid, cfg), None
    sol = solve_ivp(rhs, (grid[0], grid[-1]), y0, t_eval=grid,
                    method=_SCIPY_METHOD[cfg.method], rtol=cfg.rtol, atol=cfg.atol,
                    max_step=cfg.max_step)
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return sol.y.T.copy(), sol.nfev


def _rk4_fixed(rhs, y0: np.ndarray, grid: np.ndarray, cfg: IntegratorConfig) -> np.ndarray:
    if not math.isfinite(cfg.max_step):
        raise InvalidDimensionError("fixed-step-RK4 requires a finite max_step")
    out = np.empty((len(grid), len(y0)), dtype=complex)
    out[0] = y0
    y = y0.astype(complex)
    t = grid[0]
    for i, t_next in enumerate(grid[1:], start=1):
        span = t_next - t
        n = max(1, math.ceil(span / cfg.max_step))
        h = span / n
        for _ in range(n):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        t = t_next
        out[i] = y
    return out


# ---------------------------------------------------------------------------
# Schrodinger propagation


def propagate_schrodinger(hamiltonian, psi0: StateVector, grid: Sequence[float],
                          cfg: IntegratorConfig = IntegratorConfig(),
                          layout: SpaceLayout | None = None,
                          store_states: bool = False) -> Trajectory:
    """Integrate i d psi/dt = H(t) psi.

    `hamiltonian` may be an OperatorMatrix (static), a ModulatedHamiltonian,
    or a callable t -> OperatorMatrix. Postconditions: norm drift below
    cfg.norm_bound, top-two-Fock-level leakage below 1e-6.
    """
    dim = psi0.dim
    layout = layout or SpaceLayout(dim_mode=dim)
    if layout.dim != dim:
        raise InvalidDimensionError("layout dimension does not match the state")

    if isinstance(hamiltonian, OperatorMatrix):
        if not hamiltonian.is_hermitian():
            raise InvalidDimensionError("Hamiltonian is not Hermitian")
        h_static = hamiltonian.entries
        hw = hamiltonian.band_halfwidth
        if hw is not None and hw < dim // 4:
            # banded fast path: H psi via shifted diagonal products
            diags = [(k, np.ascontiguousarray(np.diagonal(h_static, offset=k)))
                     for k in range(-hw, hw + 1)
                     if k == 0 or np.any(np.diagonal(h_static, offset=k))]

            def rhs(t, y):
                out = np.zeros_like(y)
                for k, dk in diags:
                    if k == 0:
                        out += dk * y
                    elif k > 0:
                        out[:-k] += dk * y[k:]
                    else:
                        out[-k:] += dk * y[:k]
                return -1j * out
        else:
            def rhs(t, y):
                return -1j * (h_static @ y)
    elif isinstance(hamiltonian, ModulatedHamiltonian):
        if not hamiltonian(grid[0]).is_hermitian():
            raise InvalidDimensionError("Hamiltonian is not Hermitian at the initial time")

        def rhs(t, y):
            return -1j * hamiltonian.apply(t, y)
    else:
        if not hamiltonian(grid[0]).is_hermitian():
            raise InvalidDimensionError("Hamiltonian is not Hermitian at the initial time")

        def rhs(t, y):
            return -1j * (hamiltonian(t).entries @ y)

    ys, nfev = _solve(rhs, psi0.amplitudes.astype(complex), np.asarray(grid, float), cfg)
    rows = [_mode_records(y, layout) for y in ys]
    records = _stack_records(rows)
    records["norm"] = np.sqrt(records["norm"])
    traj = Trajectory(np.asarray(grid, float), records,
                      states=ys if store_states else None,
                      meta={"nfev": nfev, "rtol": cfg.rtol, "atol": cfg.atol,
                            "method": cfg.method})
    traj.meta["norm_drift"] = _check_run(records, traj.times, cfg)
    return traj


def propagate_lindblad(hamiltonian, kappa: float, rho0: DensityMatrix,
                       grid: Sequence[float],
                       cfg: IntegratorConfig = IntegratorConfig(),
                       store_states: bool = False) -> Trajectory:
    """Zero-temperature master equation with the cavity lowering operator.

    The right-hand side is exactly Hermiticity-preserving; output states
    are symmetrized to remove roundoff skew.  Raises if the trace drifts
    beyond cfg.norm_bound or an eigenvalue falls below -1e-6.
    """
    if kappa < 0:
        raise InvalidDimensionError(f"kappa must be >= 0, got {kappa}")
    dim = rho0.dim
    a = annihilation_op(dim).entries
    ad_a = a.conj().T @ a

    if isinstance(hamiltonian, OperatorMatrix):
        h_fn = None
        h_static = hamiltonian.entries
        if not hamiltonian.is_hermitian():
            raise InvalidDimensionError("Hamiltonian is not Hermitian")
    elif isinstance(hamiltonian, ModulatedHamiltonian):
        h_fn = lambda t: hamiltonian(t).entries  # noqa: E731
        h_static = None
    else:
        h_fn = lambda t: hamiltonian(t).entries  # noqa: E731
        h_static = None

    half_k = 0.5 * kappa

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        h = h_static if h_static is not None else h_fn(t)
        drho = -1j * (h @ rho - rho @ h)
        if kappa:
            a_rho = a @ rho
            drho += kappa * (a_rho @ a.conj().T)
            drho -= half_k * (ad_a @ rho + rho @ ad_a)
        return drho.ravel()

    ys, nfev = _solve(rhs, rho0.entries.astype(complex).ravel(),
                      np.asarray(grid, float), cfg)
    m = np.arange(dim)
    rows = []
    rhos = []
    herm_dev = []
    min_eigs = []
    for y in ys:
        rho = y.reshape(dim, dim)
        herm_dev.append(float(np.abs(rho - rho.conj().T).max()))
        rho = 0.5 * (rho + rho.conj().T)
        rhos.append(rho)
        p = np.real(np.diag(rho))
        exp_a = complex(np.sum(np.diagonal(rho, offset=-1) * np.sqrt(m[1:])))
        exp_a2 = complex(np.sum(np.diagonal(rho, offset=-2) * np.sqrt(m[2:] * (m[2:] - 1.0))))
        lam_min = float(np.linalg.eigvalsh(rho).min())
        min_eigs.append(lam_min)
        if lam_min < _NEG_EIG_GUARD:
            raise IntegrationError(
                f"density matrix eigenvalue {lam_min:.3e} below {_NEG_EIG_GUARD:.0e}")
        rows.append({
            "norm": float(np.trace(rho).real),
            "mean_n": float(np.dot(m, p)),
            "mean_n2": float(np.dot(m * m, p)),
            "re_a": exp_a.real, "im_a": exp_a.imag,
            "re_a2": exp_a2.real, "im_a2": exp_a2.imag,
            "odd_weight": float(p[1::2].sum()),
            "leakage": float(p[-2:].sum()),
            "purity": float(np.real(np.trace(rho @ rho))),
        })
    records = _stack_records(rows)
    records["herm_dev"] = np.array(herm_dev)
    records["min_eig"] = np.array(min_eigs)
    traj = Trajectory(np.asarray(grid, float), records,
                      states=np.array(rhos) if store_states else None,
                      meta={"nfev": nfev, "rtol": cfg.rtol, "atol": cfg.atol,
                            "method": cfg.method, "kappa": kappa})
    traj.meta["norm_drift"] = _check_run(records, traj.times, cfg)
    return traj


# ---------------------------------------------------------------------------
# rotating-frame amplitude ladder (banded fast path)


def _dce_rhs_factory(p: ReducedDCEParams, dim: int):
    """Vectorized right-hand side; the bond phases exp(-2it[w+2a(b+1)]),
    linear in the bond index, are built by cumulative products of the
    constant ratio exp(-4it a_r) (rounding ~ dim*eps, far below tolerance).
    """
    b = np.arange(dim - 2, dtype=float)
    f_up = np.sqrt((b + 1.0) * (b + 2.0))
    w, al, q = p.omega_r, p.alpha_r, p.q_r
    rho = p.pump_complex
    if rho != 0:
        mp = np.arange(dim - 1, dtype=float)
        f_p = np.sqrt(mp + 1.0)

    scratch = np.empty(dim - 2, dtype=complex)

    def bond_phases(t: float) -> np.ndarray:
        scratch[:] = np.exp(-4j * t * al)
        scratch[0] = np.exp(-2j * t * (w + 2.0 * al))
        return np.cumprod(scratch)

    def rhs(t, c):
        ph = bond_phases(t)
        wq = (q * f_up) * ph
        dc = np.zeros_like(c)
        dc[:-2] -= wq * c[2:]
        dc[2:] += np.conj(wq) * c[:-2]
        if rho != 0:
            # pump bonds m <-> m+1 with phases exp(-it[w + a(2m+1)])
            ph1 = np.exp(-1j * t * (w + al * (2.0 * mp + 1.0)))
            wp = rho * f_p * ph1
            dc[:-1] -= wp * c[1:]
            dc[1:] += np.conj(wp) * c[:-1]
        return dc

    return rhs


def _unwrap_frame(c: np.ndarray, t: float, p: ReducedDCEParams) -> np.ndarray:
    m = np.arange(len(c), dtype=float)
    return np.exp(-1j * t * (p.omega_r * m + p.alpha_r * m * m)) * c


def propagate_dce_amplitudes(p: ReducedDCEParams, c0: StateVector,
                             grid: Sequence[float],
                             cfg: IntegratorConfig = IntegratorConfig(),
                             store_states: bool = False) -> Trajectory:
    """Banded rotating-frame propagation of the nonlinear parametric model;
    records are computed after unwrapping to the lab frame, so they agree
    with the Schrodinger route on the assembled Hamiltonian."""
    dim = c0.dim
    if dim < 4:
        raise InvalidDimensionError("amplitude ladder needs dim >= 4")
    rhs = _dce_rhs_factory(p, dim)
    times = np.asarray(grid, float)
    ys, nfev = _solve(rhs, c0.amplitudes.astype(complex), times, cfg)
    layout = SpaceLayout(dim_mode=dim)
    lab = np.empty_like(ys)
    for i, t in enumerate(times):
        lab[i] = _unwrap_frame(ys[i], t, p)
    rows = [_mode_records(y, layout) for y in lab]
    records = _stack_records(rows)
    records["norm"] = np.sqrt(records["norm"])
    traj = Trajectory(times, records, states=lab if store_states else None,
                      meta={"nfev": nfev, "rtol": cfg.rtol, "atol": cfg.atol,
                            "method": cfg.method})
    traj.meta["norm_drift"] = _check_run(records, times, cfg)
    return traj


def propagate_dce_batch(params: Sequence[ReducedDCEParams], dim: int,
                        grid: Sequence[float],
                        cfg: IntegratorConfig) -> list[dict[str, np.ndarray]]:
    """Integrate several parameter points jointly (one adaptive solve over
    the stacked state).  Grouping is part of the numerical result, so
    callers must chunk deterministically; used by the sweep layer."""
    npts = len(params)
    if npts == 1:
        traj = propagate_dce_amplitudes(params[0], _vacuum(dim), grid, cfg)
        return [traj.records]
    rhss = [_dce_rhs_factory(p, dim) for p in params]

    def rhs(t, y):
        blocks = y.reshape(npts, dim)
        out = np.empty_like(blocks)
        for i, f in enumerate(rhss):
            out[i] = f(t, blocks[i])
        return out.ravel()

    c0 = np.zeros((npts, dim), dtype=complex)
    c0[:, 0] = 1.0
    times = np.asarray(grid, float)
    ys, nfev = _solve(rhs, c0.ravel(), times, cfg)
    layout = SpaceLayout(dim_mode=dim)
    out = []
    for i, p in enumerate(params):
        rows = []
        for k, t in enumerate(times):
            lab = _unwrap_frame(ys[k].reshape(npts, dim)[i], t, p)
            rows.append(_mode_records(lab, layout))
        records = _stack_records(rows)
        records["norm"] = np.sqrt(records["norm"])
        _check_run(records, times, cfg)
        out.append(records)
    return out


def _vacuum(dim: int) -> StateVector:
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    return StateVector(dim, v)


# ---------------------------------------------------------------------------
# closed-form oracles


def two_level_solution(K: int, p: ReducedDCEParams, t: float) -> complex:
    """c_{K+2}(t) of the isolated pair {c_K, c_{K+2}} with c_K(0) = 1:

        c_{K+2} = e^{it[w_r + 2 a_r (K+1)]} (q_r sqrt((K+1)(K+2)) / R_K)
                  sin(R_K t),
        R_K = sqrt([w_r + 2 a_r (K+1)]^2 + q_r^2 (K+1)(K+2)).
    """
    if K < 0:
        raise InvalidDimensionError("K must be >= 0")
    detune = p.omega_r + 2.0 * p.alpha_r * (K + 1)
    coup = p.q_r * math.sqrt((K + 1) * (K + 2))
    r_k = math.hypot(detune, coup)
    sin_over_r = t * np.sinc(r_k * t / math.pi)
    return np.exp(1j * t * detune) * coup * sin_over_r


def two_level_rabi_rate(K: int, p: ReducedDCEParams) -> float:
    detune = p.omega_r + 2.0 * p.alpha_r * (K + 1)
    return math.hypot(detune, p.q_r * math.sqrt((K + 1) * (K + 2)))


def parametric_analytic(p: ReducedDCEParams, t: float,
                        mean_detuning: float) -> tuple[complex, complex, float]:
    """c-number parametric amplifier solution (F, G, <n> from vacuum = |G|^2)
    with B = sqrt(4 q_r^2 - <D>^2); the imaginary-B branch continues through
    trigonometric functions for numerical robustness near B = 0."""
    q = p.q_r
    d = mean_detuning
    b2 = 4.0 * q * q - d * d
    if b2 >= 0:
        b = math.sqrt(b2)
        ch = math.cosh(b * t)
        sh_over_b = t * _sinhc(b * t)
    else:
        b_im = math.sqrt(-b2)
        ch = math.cos(b_im * t)
        sh_over_b = t * np.sinc(b_im * t / math.pi)
    f = ch + 1j * d * sh_over_b
    g = 2.0 * q * sh_over_b
    return f, g, abs(g) ** 2


def _sinhc(x: float) -> float:
    if abs(x) < 1e-8:
        return 1.0 + x * x / 6.0
    return math.sinh(x) / x


@dataclass(frozen=True)
class PumpedPrediction:
    mean_n: float
    branch_amplified: float   # large-time form for 2 phi_rho - phi_xi = -pi/2
    branch_suppressed: float  # large-time form for 2 phi_rho - phi_xi = +pi/2


def pumped_analytic(rho: complex, xi: complex, t: float) -> PumpedPrediction:
    """<n>(t) from vacuum under rho a + (xi/2) a^2 + h.c.

    xi = 0 degenerates to pure displacement, <n> = |rho|^2 t^2; the two
    branch fields give the phase-selected expressions valid for
    2 phi_rho - phi_xi = -/+ pi/2.
    """
    if xi == 0:
        n = abs(rho) ** 2 * t * t
        return PumpedPrediction(n, n, n)
    ax = abs(xi)
    ar = abs(rho)
    phase = 2.0 * math.atan2(rho.imag, rho.real) - math.atan2(xi.imag, xi.real)
    sh = math.sinh(ax * t)
    ch = math.cosh(ax * t)
    ratio2 = (ar / ax) ** 2
    mean = sh * sh + 2.0 * ratio2 * (ch - sh * math.sin(phase)) * (ch - 1.0)
    amp = sh * sh + 2.0 * ratio2 * math.exp(ax * t) * (ch - 1.0)
    sup = sh * sh + 2.0 * ratio2 * math.exp(-ax * t) * (ch - 1.0)
    return PumpedPrediction(mean, amp, sup)


# ---------------------------------------------------------------------------
# dressed-state amplitude ladder


@dataclass(frozen=True)
class LadderIndex:
    """Maps (m, branch) dressed labels onto flat vector indices."""

    m_max: int
    pairs: tuple[tuple[int, int], ...]
    index: dict

    @classmethod
    def build(cls, m_max: int) -> "LadderIndex":
        pairs = [(0, +1)]
        for m in range(1, m_max + 1):
            pairs.extend(((m, +1), (m, -1)))
        return cls(m_max, tuple(pairs), {p: i for i, p in enumerate(pairs)})


def _ladder_couplings(spec: SystemSpec, m_max: int):
    """COO-style coupling table (rows, cols, amplitudes, frequencies):
    db_i/dt += amp_k e^{i freq_k t} b_{col_k}, built from equation-of-motion
    terms for every fast, slow, and pump tone."""
    idx = LadderIndex.build(m_max)
    lam_bar = {p: dressed.lambda_corrected(spec, *p) for p in idx.pairs}
    rows, cols, amps, freqs = [], [], [], []

    def add(i, j, amp, freq):
        if amp != 0:
            rows.append(idx.index[i])
            cols.append(idx.index[j])
            amps.append(amp)
            freqs.append(freq)

    fast, slow, pump = [], [], []
    for eta in system_tones(spec):
        eps = tone_depths(spec, eta)
        if eps["d"] != 0:
            pump.append((eta, eps["d"]))
        drive = {k: eps[k] for k in ("omega", "Omega", "g", "chi")}
        if any(v != 0 for v in drive.values()):
            (fast if eta >= FAST_THRESHOLD * spec.omega0 else slow).append((eta, drive))

    for eta, eps in fast:
        full = dict(eps)
        full.setdefault("d", 0.0)
        for m in range(0, m_max - 1):
            for tb in dressed.branch_states(m):
                for sb in dressed.branch_states(m + 2):
                    th = dressed.theta_general(spec, eta, full, m, tb, sb)
                    delta = lam_bar[(m + 2, sb)] - lam_bar[(m, tb)] - eta
                    add((m, tb), (m + 2, sb), th, -delta)
                    add((m + 2, sb), (m, tb), -np.conj(th), +delta)

    for eta, eps in slow:
        law_phases = {}
        for kind in ("omega", "Omega", "g"):
            if eps[kind] != 0:
                law_phases[kind] = eps[kind]  # complex depth: |eps| e^{i phi}
        for m in range(1, m_max + 1):
            for tb in dressed.branch_states(m):
                for sb in dressed.branch_states(m):
                    dl = lam_bar[(m, tb)] - lam_bar[(m, sb)]
                    for kind, depth in law_phases.items():
                        pi = dressed.pi_element(spec, kind, m, tb, sb)
                        if pi == 0:
                            continue
                        # -i pi |eps| sin(eta t + phi) e^{i dl t}
                        add((m, tb), (m, sb), -0.5 * pi * depth, dl + eta)
                        add((m, tb), (m, sb), 0.5 * pi * np.conj(depth), dl - eta)

    for eta, eps_d in pump:
        for m in range(0, m_max):
            for tb in dressed.branch_states(m):
                for sb in dressed.branch_states(m + 1):
                    l1 = dressed.ladder_element(spec, 1, m + 1, tb, sb)
                    if l1 == 0:
                        continue
                    delta = lam_bar[(m + 1, sb)] - lam_bar[(m, tb)] - eta
                    add((m, tb), (m + 1, sb), 0.5j * eps_d * l1, -delta)
                    add((m + 1, sb), (m, tb), 0.5j * np.conj(eps_d) * l1, +delta)

    return idx, (np.array(rows), np.array(cols),
                 np.array(amps, dtype=complex), np.array(freqs, dtype=float))


def propagate_dressed_ladder(spec: SystemSpec, initial: dict, m_max: int,
                             grid: Sequence[float],
                             cfg: IntegratorConfig = IntegratorConfig()) -> Trajectory:
    """Integrate the dressed-amplitude equations of motion for every tone in
    the spec; `initial` maps (m, branch) -> amplitude."""
    idx, (rows, cols, amps, freqs) = _ladder_couplings(spec, m_max)
    n = len(idx.pairs)
    b0 = np.zeros(n, dtype=complex)
    for key, val in initial.items():
        b0[idx.index[key]] = val
    nrm = np.linalg.norm(b0)
    if abs(nrm - 1.0) > 1e-9:
        raise InvalidDimensionError("initial ladder amplitudes must be normalized")

    if len(rows):
        def rhs(t, b):
            ph = amps * np.exp(1j * freqs * t)
            db = np.zeros_like(b)
            np.add.at(db, rows, ph * b[cols])
            return db
    else:
        def rhs(t, b):
            return np.zeros_like(b)

    times = np.asarray(grid, float)
    ys, nfev = _solve(rhs, b0, times, cfg)
    pops = np.abs(ys) ** 2
    m_of = np.array([m for m, _ in idx.pairs])
    records = {
        "norm": np.sqrt(pops.sum(axis=1)),
        "mean_excitation": pops @ m_of,
        "leakage": pops[:, m_of >= m_max - 1].sum(axis=1),
    }
    traj = Trajectory(times, records, states=ys,
                      meta={"nfev": nfev, "ladder": idx.pairs, "rtol": cfg.rtol,
                            "atol": cfg.atol, "method": cfg.method})
    traj.meta["norm_drift"] = _check_run(records, times, cfg)
    return traj


def _second_order_shift(idx: LadderIndex, coupl, level: tuple[int, int],
                        exclude: set[tuple[int, int]]) -> float:
    """AC-Stark shift of one ladder level from its off-resonant bonds,
    sum |amp|^2 / freq over the level's row entries (the resonant pair bond
    excluded).  This is the numerically evaluated systematic-error
    frequency shift the closed formulas only bound in order of magnitude."""
    rows, cols, amps, freqs = coupl
    i = idx.index[level]
    shift = 0.0
    for r, c, a, f in zip(rows, cols, amps, freqs):
        if r != i or (r, c) in exclude or f == 0.0:
            continue
        shift += abs(a) ** 2 / f
    return shift


def propagate_sideband_pair(spec: SystemSpec, effect: str, M: int,
                            grid: Sequence[float] | None = None,
                            cfg: IntegratorConfig = IntegratorConfig(),
                            m_max: int | None = None,
                            zeta: float = 0.0) -> tuple[Trajectory, dict]:
    """Drive the dressed ladder at the catalog frequency of `effect` and
    propagate the full amplitude ladder (all levels, both branches).

    Initial state and resonant pair per effect (D = ground-dominant branch):

        Anti-DCE      : b_{M+2,D} = 1,  pair (M+2,D) <-> (M,-D)
        Sideband-blue : b_{M,D}   = 1,  pair (M,D)   <-> (M+2,-D)
        Pump-sideband : b_{M,D}   = 1,  pair (M,D)   <-> (M+1,-D)

    Returns the trajectory and a dict naming the pair, the coupling rate,
    and the half-transfer time pi/(2 |rate|).
    """
    from .effective import regime_coefficients
    from .hamiltonians import retuned_spec

    d = dressed.ground_branch(spec)

    def lam_bar(m, branch):
        return dressed.lambda_corrected(spec, m, +1 if m == 0 else branch)

    # the catalog formulas carry the dispersive-expansion error of the
    # corrected eigenfrequencies; the ladder's own resonance is their exact
    # difference, which is what "all shift terms" means for this model
    if effect == "Anti-DCE":
        start = (M + 2, d)
        target = (M, -d)
        eta = lam_bar(M + 2, d) - lam_bar(M, -d) - zeta
        spec = retuned_spec(spec, eta)
        rate = regime_coefficients(spec, "Anti-DCE", eta, m=M)["theta_A"]
    elif effect == "Sideband-blue":
        start = (M, d)
        target = (M + 2, -d)
        eta = lam_bar(M + 2, -d) - lam_bar(M, d) - zeta
        spec = retuned_spec(spec, eta)
        rate = regime_coefficients(spec, "Sideband-blue", eta, m=M)["theta_S"]
    elif effect == "Pump-sideband":
        start = (M, d) if M > 0 else (0, +1)
        target = (M + 1, -d)
        eta = lam_bar(M + 1, -d) - lam_bar(M, d) - zeta
        spec = retuned_spec(spec, eta)
        rate = regime_coefficients(spec, "Pump-sideband", eta)["theta_P"]
    else:
        raise RegimeError(f"unknown sideband effect {effect!r}")

    if abs(rate) == 0:
        raise RegimeError(f"{effect} coupling vanishes for this modulation")
    t_half = math.pi / (2.0 * abs(rate))
    if m_max is None:
        # enough headroom that off-resonant virtual population at the top
        # two levels stays below the truncation guard
        m_max = max(M + 8, 10)
    if grid is None:
        grid = np.linspace(0.0, 2.0 * t_half, 801)

    if start[0] == 0:
        start = (0, +1)
    if target[0] == 0:
        target = (0, +1)

    # one Newton step on the drive frequency against the numerically
    # evaluated second-order level shifts (resonance: eta = bare gap +
    # shift_start - shift_target)
    idx, coupl = _ladder_couplings(spec, m_max)
    pair = {(idx.index[target], idx.index[start]),
            (idx.index[start], idx.index[target])}
    d_eta = (_second_order_shift(idx, coupl, start, pair)
             - _second_order_shift(idx, coupl, target, pair))
    if d_eta != 0.0:
        eta += d_eta
        spec = retuned_spec(spec, eta)

    traj = propagate_dressed_ladder(spec, {start: 1.0}, m_max, grid, cfg)
    idx = LadderIndex.build(m_max)
    info = {
        "eta": eta,
        "rate": rate,
        "t_half": t_half,
        "start": start,
        "target": target,
        "start_index": idx.index[start],
        "target_index": idx.index[target],
    }
    return traj, info
