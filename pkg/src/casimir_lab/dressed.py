"""Single-qubit dressed-state machinery.

Reference Hamiltonian (qubit energy measured from the ground state):

    H_JC = omega0 n + Omega0 |e><e| + g0 (a s+ + a+ s-).

Eigenfrequencies lambda_{0} = 0, lambda_{m>0,S} = omega0 m + (S beta_m - Delta_-)/2
with beta_m = sqrt(Delta_-^2 + 4 g0^2 m); eigenstates

    |phi_{m,S}> = s_{m,S} |g,m> + c_{m,S} |e,m-1>,
    s_{m,+} = sin(theta_m), s_{m,-} = cos(theta_m),
    c_{m,+} = cos(theta_m), c_{m,-} = -sin(theta_m),
    theta_m = arctan[(Delta_- + beta_m)/(2 g0 sqrt(m))].

The ground-state-dominant branch is S = sign(Delta_-); the level-0 state is
handled uniformly by s_0 = 1, c_0 = 0.

Corrected eigenfrequencies lambda_bar = lambda + nu1 + nu2 carry the
pump-induced shift nu1 and the counter-rotating/squeezing shift nu2; the
systematic-error shift nu3 has no closed form and is exposed only as the
scan half-width in the resonance catalog.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RegimeError
from .hamiltonians import SystemSpec
from .effective import single_atom_shifts, system_tones, tone_depths, kerr_alpha

BRANCHES = (+1, -1)


def branch_states(m: int) -> tuple[int, ...]:
    """Branch labels actually present at excitation number m."""
    if m < 0:
        return ()
    return (+1,) if m == 0 else BRANCHES


def rabi_splitting(spec: SystemSpec, m: int) -> float:
    d_minus = spec.omega0 - spec.Omega0
    return math.hypot(d_minus, 2.0 * spec.g0 * math.sqrt(m))


def lambda_bare(spec: SystemSpec, m: int, branch: int) -> float:
    if m == 0:
        return 0.0
    d_minus = spec.omega0 - spec.Omega0
    return spec.omega0 * m + 0.5 * (branch * rabi_splitting(spec, m) - d_minus)


def mixing_angle(spec: SystemSpec, m: int) -> float:
    """theta_m; for g0 = 0 the atan2 limit keeps the branch convention
    (theta -> pi/2 for Delta_- > 0, -> 0 for Delta_- < 0, and the resonant
    g -> 0+ limit pi/4 at the doubly degenerate point)."""
    if m < 1:
        raise RegimeError("mixing angle defined for m >= 1")
    d_minus = spec.omega0 - spec.Omega0
    if spec.g0 == 0 and d_minus == 0:
        return 0.25 * math.pi
    return math.atan2(d_minus + rabi_splitting(spec, m), 2.0 * spec.g0 * math.sqrt(m))


def sc_coefficients(spec: SystemSpec, m: int, branch: int) -> tuple[float, float]:
    """(s, c) of |phi_{m,branch}>; (1, 0) for the vacuum level."""
    if m == 0:
        return 1.0, 0.0
    th = mixing_angle(spec, m)
    if branch > 0:
        return math.sin(th), math.cos(th)
    return math.cos(th), -math.sin(th)


def ground_branch(spec: SystemSpec) -> int:
    """Branch label of the ground-state-dominant (detuning-symbol) family."""
    d_minus = spec.omega0 - spec.Omega0
    if d_minus == 0:
        raise RegimeError("detuning symbol undefined at Delta_- = 0")
    return +1 if d_minus > 0 else -1


# ---------------------------------------------------------------------------
# matrix elements between dressed states (all real in this convention)


def pi_element(spec: SystemSpec, kind: str, m: int, t_branch: int, s_branch: int) -> float:
    """<phi_{m,T}| O |phi_{m,S}> for O = n (kind 'omega'), |e><e| ('Omega'),
    or the rotating coupling a s+ + a+ s- ('g')."""
    if m == 0:
        return 0.0
    st, ct = sc_coefficients(spec, m, t_branch)
    ss, cs = sc_coefficients(spec, m, s_branch)
    if kind == "omega":
        return st * ss * m + ct * cs * (m - 1)
    if kind == "Omega":
        return ct * cs
    if kind == "g":
        return math.sqrt(m) * (st * cs + ct * ss)
    raise RegimeError(f"unknown Pi kind {kind!r}")


def lambda_element(spec: SystemSpec, m_plus_2: int, t_branch: int, s_branch: int) -> float:
    """Lambda_{m+2,T,S} = <phi_{m,T}| a s- |phi_{m+2,S}> (counter-rotating)."""
    m = m_plus_2 - 2
    if m < 0:
        return 0.0
    st, _ = sc_coefficients(spec, m, t_branch)
    _, cs = sc_coefficients(spec, m_plus_2, s_branch)
    return st * cs * math.sqrt(m + 1)


def ladder_element(spec: SystemSpec, k: int, m_plus_k: int, t_branch: int,
                   s_branch: int) -> float:
    """L_{k,m+k,T,S} = <phi_{m,T}| a^k |phi_{m+k,S}> for k = 1, 2."""
    m = m_plus_k - k
    if m < 0:
        return 0.0
    st, ct = sc_coefficients(spec, m, t_branch)
    ss, cs = sc_coefficients(spec, m_plus_k, s_branch)
    if k == 1:
        return st * ss * math.sqrt(m + 1) + ct * cs * math.sqrt(m)
    if k == 2:
        return st * ss * math.sqrt((m + 1) * (m + 2)) + ct * cs * math.sqrt(m * (m + 1))
    raise RegimeError(f"ladder element implemented for k = 1, 2; got {k}")


# ---------------------------------------------------------------------------
# intrinsic frequency shifts nu1 (pump) and nu2 (counter-rotating + squeezing)


def _pump_tones(spec: SystemSpec) -> tuple[tuple[float, float], ...]:
    """(eta, |eps_d|^2) over every pump tone."""
    out = []
    for eta in system_tones(spec):
        eps_d = tone_depths(spec, eta)["d"]
        if eps_d != 0:
            out.append((eta, abs(eps_d) ** 2))
    return tuple(out)


def nu1_shift(spec: SystemSpec, m: int, branch: int) -> float:
    """Second-order pump-induced level shift."""
    tones = _pump_tones(spec)
    if not tones:
        return 0.0
    total = 0.0
    for eta, w in tones:
        down = 0.0
        if m >= 1:
            for s in branch_states(m - 1):
                l1 = ladder_element(spec, 1, m, s, branch)
                gap = lambda_bare(spec, m, branch) - lambda_bare(spec, m - 1, s)
                down += l1 * l1 / (gap + eta)
        up = 0.0
        for s in branch_states(m + 1):
            l1 = ladder_element(spec, 1, m + 1, branch, s)
            gap = lambda_bare(spec, m + 1, s) - lambda_bare(spec, m, branch)
            up += l1 * l1 / (gap + eta)
        total += 0.25 * w * (down - up)
    return total


def nu2_shift(spec: SystemSpec, m: int, branch: int) -> float:
    """Level shift from the counter-rotating coupling (Lambda, weight g0^2)
    and the squeezing term (L_2, weight chi0^2)."""
    g2 = spec.g0 ** 2
    x2 = spec.chi0 ** 2
    if g2 == 0 and x2 == 0:
        return 0.0
    total = 0.0
    if m >= 2:
        for s in branch_states(m - 2):
            lam = lambda_element(spec, m, s, branch)
            l2 = ladder_element(spec, 2, m, s, branch)
            gap = lambda_bare(spec, m, branch) - lambda_bare(spec, m - 2, s)
            total += (lam * lam * g2 + l2 * l2 * x2) / gap
    for s in branch_states(m + 2):
        lam = lambda_element(spec, m + 2, branch, s)
        l2 = ladder_element(spec, 2, m + 2, branch, s)
        gap = lambda_bare(spec, m + 2, s) - lambda_bare(spec, m, branch)
        total -= (lam * lam * g2 + l2 * l2 * x2) / gap
    return total


def lambda_corrected(spec: SystemSpec, m: int, branch: int) -> float:
    return lambda_bare(spec, m, branch) + nu1_shift(spec, m, branch) + nu2_shift(spec, m, branch)


@dataclass(frozen=True)
class DressedLevel:
    m: int
    branch: int
    lam: float
    lam_bar: float
    theta: float
    s: float
    c: float


def dressed_basis(spec: SystemSpec, m_max: int) -> list[DressedLevel]:
    """Levels 0..m_max with bare and corrected eigenfrequencies.

    lam_bar includes nu1 and nu2 but never the systematic-error shift nu3,
    which is only available as an order of magnitude."""
    if m_max < 1:
        raise RegimeError("dressed_basis needs m_max >= 1")
    levels = [DressedLevel(0, +1, 0.0, lambda_corrected(spec, 0, +1), 0.0, 1.0, 0.0)]
    for m in range(1, m_max + 1):
        th = mixing_angle(spec, m)
        for branch in BRANCHES:
            s, c = sc_coefficients(spec, m, branch)
            levels.append(DressedLevel(
                m, branch, lambda_bare(spec, m, branch),
                lambda_corrected(spec, m, branch), th, s, c))
    return levels


# closed forms for the corrected eigenfrequencies, used as cross-checks

def lambda_bar_resonant(spec: SystemSpec, m: int, branch: int) -> float:
    """Delta_- = 0: lambda_bar_{m,S} = omega0 m + S g0 sqrt(m) - (delta_+ + m delta_chi)
    plus the pump term shared by all levels."""
    _, dp, dchi = single_atom_shifts(spec)
    pump = -0.25 * sum(w / (spec.omega0 + eta) for eta, w in _pump_tones(spec))
    if m == 0:
        return -(dp + 0.5 * dchi) + pump
    return spec.omega0 * m + branch * spec.g0 * math.sqrt(m) - (dp + m * dchi) + pump


def lambda_bar_dispersive(spec: SystemSpec, m: int, d_branch: int) -> float:
    """|Delta_-|/2 >> g0 sqrt(m): closed forms in terms of the effective
    cavity frequencies omega_g/omega_e; d_branch is +1 for the D (ground)
    family and -1 for the -D (excited) family."""
    dm, dp, dchi = single_atom_shifts(spec)
    alpha = kerr_alpha(spec)
    d_minus = spec.omega0 - spec.Omega0
    pump = -0.25 * sum(w / (spec.omega0 + eta) for eta, w in _pump_tones(spec))
    if m == 0:
        return -(dp + 0.5 * dchi) + pump
    if d_branch > 0:
        omega_g = spec.omega0 + dm - dp - dchi
        return omega_g * m - alpha * m * m - dp - 0.5 * dchi + pump
    omega_e = spec.omega0 - dm + dp - dchi
    return omega_e * m - d_minus + alpha * m * m - dp + 0.5 * dchi + pump


# ---------------------------------------------------------------------------
# transition coefficients Theta (two-excitation couplings under a fast tone)


def theta_general(spec: SystemSpec, eta: float, eps: dict[str, complex],
                  m: int, t_branch: int, s_branch: int) -> complex:
    """General Theta_{m+2,T,S} for the tone (eta, eps): couples
    b_{m,T} <- b_{m+2,S} under a fast modulation.

    eps maps parameter name to its complex depth at this tone."""
    if m < 0:
        raise RegimeError("Theta needs m >= 0")
    total = 0.0 + 0.0j
    kinds = ("omega", "Omega", "g")
    # upper-level intermediate sum
    for r in branch_states(m + 2):
        num = (spec.g0 * lambda_element(spec, m + 2, t_branch, r)
               - 1j * spec.chi0 * ladder_element(spec, 2, m + 2, t_branch, r))
        den = lambda_bare(spec, m + 2, r) - lambda_bare(spec, m + 2, s_branch) + eta
        for kind in kinds:
            total += 0.5 * num / den * pi_element(spec, kind, m + 2, r, s_branch) * eps[kind]
    # lower-level intermediate sum (vanishes automatically at m = 0)
    if m >= 1:
        for r in branch_states(m):
            num = (spec.g0 * lambda_element(spec, m + 2, r, s_branch)
                   - 1j * spec.chi0 * ladder_element(spec, 2, m + 2, r, s_branch))
            den = lambda_bare(spec, m, t_branch) - lambda_bare(spec, m, r) + eta
            for kind in kinds:
                total -= 0.5 * num / den * pi_element(spec, kind, m, t_branch, r) * eps[kind]
    total -= 0.5 * (eps["g"] * lambda_element(spec, m + 2, t_branch, s_branch)
                    - 1j * eps["chi"] * ladder_element(spec, 2, m + 2, t_branch, s_branch))
    return total


def theta_resonant_closed(spec: SystemSpec, eta: float, eps: dict[str, complex],
                          m: int, t_branch: int, s_branch: int) -> complex:
    """Closed resonant (Delta_- = 0) forms of Theta_{m+2,T,S}."""
    if spec.omega0 != spec.Omega0:
        raise RegimeError("resonant closed form needs Delta_- = 0")
    ew, eW, eg, ex = eps["omega"], eps["Omega"], eps["g"], eps["chi"]
    g0 = spec.g0
    x0 = spec.chi0
    if m == 0:
        root = 0.25 * math.sqrt(2.0)
        if s_branch > 0:
            return root * ((g0 - 2j * x0 * math.sqrt(2.0)) * ew / eta + g0 * eW / eta
                           - (1.0 + 2j * x0 / eta) * eg + 1j * math.sqrt(2.0) * ex)
        return -root * ((g0 + 2j * x0 * math.sqrt(2.0)) * ew / eta + g0 * eW / eta
                        - (1.0 + 2j * x0 / eta) * eg - 1j * math.sqrt(2.0) * ex)
    pref = 0.25 * math.sqrt(m + 1)
    p = math.sqrt(m + 2) + math.sqrt(m)
    q = math.sqrt(m + 2) - math.sqrt(m)
    if t_branch > 0 and s_branch > 0:
        return pref * ((g0 - 2j * x0 * p) * ew / eta + g0 * eW / eta - eg + 1j * ex * p)
    if t_branch < 0 and s_branch < 0:
        return pref * (-(g0 + 2j * x0 * p) * ew / eta - g0 * eW / eta + eg + 1j * ex * p)
    if t_branch > 0 and s_branch < 0:
        return pref * (-(g0 + 2j * x0 * q) * ew / eta - g0 * eW / eta + eg + 1j * ex * q)
    return pref * ((g0 - 2j * x0 * q) * ew / eta + g0 * eW / eta - eg + 1j * ex * q)


def theta_dispersive_closed(spec: SystemSpec, eta: float, eps: dict[str, complex],
                            m: int, t_is_d: bool, s_is_d: bool) -> complex:
    """Closed dispersive forms of Theta_{m+2,T,S}; branch arguments are
    relative to the detuning symbol (True = D family).

    The dispersive-shift prefactors are distributed into the brackets so
    every expression stays finite in the g0 -> 0 limit.
    """
    d_minus = spec.omega0 - spec.Omega0
    if d_minus == 0:
        raise RegimeError("dispersive closed form needs Delta_- != 0")
    dsym = math.copysign(1.0, d_minus)
    dm, _, _ = single_atom_shifts(spec)
    ew, eW, eg, ex = eps["omega"], eps["Omega"], eps["g"], eps["chi"]
    g0 = spec.g0
    x0 = spec.chi0
    r1 = (eta - 2 * d_minus) / (eta - d_minus)
    if m == 0:
        t_is_d = True  # the vacuum level has a single (ground) state

    if t_is_d and s_is_d:
        return (0.5 * math.sqrt((m + 1) * (m + 2))
                * ((dm * r1 - 2j * x0) * ew / eta
                   + dm * eW / (eta - d_minus)
                   - r1 * g0 * eg / d_minus
                   + 1j * ex))
    if t_is_d and not s_is_d:
        return (0.5 * dsym * math.sqrt(m + 1)
                * (-(g0 + 2j * g0 * x0 / d_minus * (2 * eta + d_minus) / (eta + d_minus))
                   * ew / eta
                   - g0 * eW / eta + eg + 2j * g0 * ex / d_minus))
    if not t_is_d and s_is_d:
        r3 = (eta - 3 * d_minus) / (eta - d_minus)
        r4 = (eta + d_minus) / (eta - d_minus)
        return (0.5 * dsym * math.sqrt(m * (m + 1) * (m + 2))
                * (g0 * dm / d_minus * (r3 * ew + r4 * eW) / eta
                   - r3 * dm * eg / d_minus))
    return (0.5 * math.sqrt(m * (m + 1))
            * (-(dm * r1 + 2j * x0) * ew / eta
               - dm * eW / (eta - d_minus)
               + r1 * g0 * eg / d_minus
               + 1j * ex))


def l1_dispersive_closed(spec: SystemSpec, m_plus_1: int, t_is_d: bool,
                         s_is_d: bool) -> float:
    """Leading dispersive values of L_{1,m+1,T,S}."""
    d_minus = spec.omega0 - spec.Omega0
    if d_minus == 0:
        raise RegimeError("dispersive closed form needs Delta_- != 0")
    m = m_plus_1 - 1
    if t_is_d and s_is_d:
        return math.sqrt(m + 1)
    if t_is_d and not s_is_d:
        return spec.g0 / abs(d_minus)
    if not t_is_d and not s_is_d:
        return math.sqrt(m)
    return 0.0


@dataclass(frozen=True)
class TransitionCoefficients:
    """Theta tables (general and applicable closed form) plus the matrix
    elements entering them, for one fast tone."""

    eta: float
    m_max: int
    theta: dict            # (m, T, S) -> complex, general formula
    theta_closed: dict     # (m, T, S) -> complex or None
    closed_kind: str       # 'resonant' | 'dispersive' | 'none'
    pi: dict               # (kind, m, T, S) -> float
    lam: dict              # (m+2, T, S) -> float
    l1: dict               # (m+1, T, S) -> float
    l2: dict               # (m+2, T, S) -> float


def branch_is_d(spec: SystemSpec, branch: int) -> bool:
    return branch == ground_branch(spec)


def transition_coefficients(spec: SystemSpec, eta: float, m_max: int,
                            eps: dict[str, complex] | None = None) -> TransitionCoefficients:
    """Full coefficient table for the tone at eta, with the regime-appropriate
    closed form computed alongside the general formula for cross-validation."""
    if eps is None:
        eps = tone_depths(spec, eta)
    d_minus = spec.omega0 - spec.Omega0
    closed_kind = "resonant" if d_minus == 0 else "dispersive"

    theta, theta_closed = {}, {}
    pi, lam, l1, l2 = {}, {}, {}, {}
    for m in range(0, m_max + 1):
        for t in branch_states(m):
            for s in branch_states(m + 2):
                theta[(m, t, s)] = theta_general(spec, eta, eps, m, t, s)
                if closed_kind == "resonant":
                    theta_closed[(m, t, s)] = theta_resonant_closed(spec, eta, eps, m, t, s)
                else:
                    theta_closed[(m, t, s)] = theta_dispersive_closed(
                        spec, eta, eps, m,
                        branch_is_d(spec, t) if m > 0 else True,
                        branch_is_d(spec, s))
                lam[(m + 2, t, s)] = lambda_element(spec, m + 2, t, s)
                l2[(m + 2, t, s)] = ladder_element(spec, 2, m + 2, t, s)
            for s in branch_states(m + 1):
                l1[(m + 1, t, s)] = ladder_element(spec, 1, m + 1, t, s)
            for s in branch_states(m):
                for kind in ("omega", "Omega", "g"):
                    pi[(kind, m, t, s)] = pi_element(spec, kind, m, t, s)
    return TransitionCoefficients(eta=eta, m_max=m_max, theta=theta,
                                  theta_closed=theta_closed, closed_kind=closed_kind,
                                  pi=pi, lam=lam, l1=l1, l2=l2)
