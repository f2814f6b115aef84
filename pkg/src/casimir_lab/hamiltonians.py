"""Hamiltonian builders for the modulated light--matter models.

Three model families:

* full Rabi model for N <= 3 identical two-level atoms,
      H = w(t) n + sum_l [ W(t)/2 sz_l + g(t)(a + a+)(s+_l + s-_l) ]
          + i chi(t) (a+^2 - a^2) + i d(t) (a+ - a),
  with an optional rotating-wave variant (W0 |e><e| + g(a s+ + a+ s-))
  whose spectrum is the dressed-state reference;

* Holstein-Primakoff two-mode model for a cloud of N atoms, first order
  in b+b/N, with collective coupling g~ = sqrt(N) g;

* reduced single-mode models: the nonlinear parametric Hamiltonian
  w_r n + a_r n^2 + i q_r (a+^2 - a^2) (+ optional linear pump) and the
  generic pumped quadratic form rho a + xi a^2 / 2 + h.c.

Builders are pure functions of (spec, t) and may be called concurrently.
`ModulatedHamiltonian` packages the static matrices with their scalar
coefficient laws so propagators can evaluate H(t) psi without
reassembling matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import modulation as mod
from .errors import CapacityError, InvalidDimensionError
from .fock import (
    OperatorMatrix,
    annihilation_op,
    excited_projector,
    identity_op,
    sigma_minus,
    sigma_plus,
    sigma_z,
    tensor_product,
)

PARAMETERS = ("omega", "Omega", "g", "chi", "d")

_HERM_TOL = 1e-13
_MAX_RABI_ATOMS = 3


@dataclass(frozen=True)
class SystemSpec:
    """Physical parameter set: bare values, atom count, damping, and one
    modulation law per parameter (defaults: unmodulated, d0 = 0)."""

    omega0: float
    Omega0: float
    g0: float
    chi0: float = 0.0
    N: int = 1
    kappa: float = 0.0
    laws: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.g0 < 0:
            raise InvalidDimensionError("g0 must be >= 0 (sign absorbed in phases)")
        if self.N < 1:
            raise InvalidDimensionError(f"atom count N must be >= 1, got {self.N}")
        if self.kappa < 0:
            raise InvalidDimensionError(f"kappa must be >= 0, got {self.kappa}")
        bare = {"omega": self.omega0, "Omega": self.Omega0, "g": self.g0,
                "chi": self.chi0, "d": 0.0}
        laws = dict(self.laws)
        for name in PARAMETERS:
            law = laws.get(name)
            if law is None:
                laws[name] = mod.constant(bare[name])
            elif law.bare != bare[name]:
                raise InvalidDimensionError(
                    f"law for {name!r} has bare value {law.bare}, spec says {bare[name]}"
                )
        object.__setattr__(self, "laws", laws)

    def law(self, name: str) -> mod.ParameterLaw:
        return self.laws[name]

    def value(self, name: str, t: float) -> float:
        return mod.evaluate(self.laws[name], t)

    @property
    def g_collective(self) -> float:
        """g~0 = sqrt(N) g0."""
        return math.sqrt(self.N) * self.g0


@dataclass(frozen=True)
class HPSpec:
    """System plus mode truncations for the Holstein-Primakoff model."""

    system: SystemSpec
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 2 or self.dim_b < 2:
            raise InvalidDimensionError("HP truncations need dim_a, dim_b >= 2")


@dataclass(frozen=True)
class ReducedDCEParams:
    """(w_r, a_r, q_r) of the nonlinear parametric Hamiltonian plus an
    optional already-phase-rotated linear pump (amplitude, phase)."""

    omega_r: float
    alpha_r: float
    q_r: float
    pump: tuple[float, float] | None = None

    def __post_init__(self):
        if self.q_r < 0:
            raise InvalidDimensionError(f"q_r must be >= 0, got {self.q_r}")
        if self.pump is not None and self.pump[0] < 0:
            raise InvalidDimensionError("pump amplitude must be >= 0")

    @property
    def pump_complex(self) -> complex:
        if self.pump is None:
            return 0.0
        amp, phase = self.pump
        return amp * complex(math.cos(phase), math.sin(phase))


@dataclass(frozen=True)
class ModulatedHamiltonian:
    """H(t) = sum_k f_k(t) M_k with static matrices M_k.

    `apply` evaluates H(t) @ psi without materializing H(t); `__call__`
    returns the assembled OperatorMatrix.
    """

    dim: int
    terms: tuple[tuple[Callable[[float], float], np.ndarray], ...]
    band_halfwidth: int | None = None

    def __call__(self, t: float) -> OperatorMatrix:
        h = np.zeros((self.dim, self.dim), dtype=complex)
        for f, m in self.terms:
            h += f(t) * m
        return OperatorMatrix(self.dim, h, band_halfwidth=self.band_halfwidth)

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        out = self.terms[0][0](t) * (self.terms[0][1] @ psi)
        for f, m in self.terms[1:]:
            out += f(t) * (m @ psi)
        return out


def _law_fn(law: mod.ParameterLaw) -> Callable[[float], float]:
    return lambda t: mod.evaluate(law, t)


def _check_hermitian(m: np.ndarray, what: str) -> None:
    dev = float(np.abs(m - m.conj().T).max())
    if dev > _HERM_TOL:
        raise InvalidDimensionError(f"{what} deviates from Hermitian by {dev}")


def _embed_atom(op2: OperatorMatrix, atom: int, n_atoms: int, dim_cavity: int) -> np.ndarray:
    """Embed a single-qubit operator at position `atom` in the
    qubit^N (slow) x cavity (fast) product space."""
    full = identity_op(1)
    for l in range(n_atoms):
        factor = op2 if l == atom else identity_op(2)
        full = tensor_product(full, factor)
    return tensor_product(full, identity_op(dim_cavity)).entries


def rabi_generator(spec: SystemSpec, dim_cavity: int, rwa: bool = False) -> ModulatedHamiltonian:
    """Time-dependent Rabi Hamiltonian as a ModulatedHamiltonian.

    rwa=False: W/2 sz per atom with the full (a + a+)(s+ + s-) coupling.
    rwa=True:  W |e><e| per atom with the rotating coupling a s+ + a+ s-,
               the convention whose eigenfrequencies the dressed-state
               module reproduces.
    """
    if spec.N > _MAX_RABI_ATOMS:
        raise CapacityError(
            f"full tensor-product Rabi model supports N <= {_MAX_RABI_ATOMS}; use the HP model"
        )
    if dim_cavity < 2:
        raise InvalidDimensionError(f"dim_cavity must be >= 2, got {dim_cavity}")

    n_atoms = spec.N
    a = annihilation_op(dim_cavity)
    ad = a.dagger()
    qub_ident = identity_op(2 ** n_atoms) if n_atoms else identity_op(1)

    def lift_cavity(m: np.ndarray) -> np.ndarray:
        return np.kron(qub_ident.entries, m)

    n_full = lift_cavity((ad.entries @ a.entries))
    squeeze = lift_cavity(1j * (ad.entries @ ad.entries - a.entries @ a.entries))
    drive = lift_cavity(1j * (ad.entries - a.entries))

    atom_energy = np.zeros_like(n_full)
    coupling = np.zeros_like(n_full)
    for l in range(n_atoms):
        if rwa:
            atom_energy += _embed_atom(excited_projector(), l, n_atoms, dim_cavity)
            sp = _embed_atom(sigma_plus(), l, n_atoms, dim_cavity)
            sm = _embed_atom(sigma_minus(), l, n_atoms, dim_cavity)
            a_full = lift_cavity(a.entries)
            coupling += a_full @ sp + a_full.conj().T @ sm
        else:
            atom_energy += 0.5 * _embed_atom(sigma_z(), l, n_atoms, dim_cavity)
            sx = _embed_atom(
                OperatorMatrix(2, sigma_plus().entries + sigma_minus().entries, 1),
                l, n_atoms, dim_cavity)
            coupling += lift_cavity(a.entries + ad.entries) @ sx

    for name, m in (("n", n_full), ("atom", atom_energy), ("coupling", coupling),
                    ("squeeze", squeeze), ("drive", drive)):
        _check_hermitian(m, f"Rabi term {name}")

    terms = (
        (_law_fn(spec.law("omega")), n_full),
        (_law_fn(spec.law("Omega")), atom_energy),
        (_law_fn(spec.law("g")), coupling),
        (_law_fn(spec.law("chi")), squeeze),
        (_law_fn(spec.law("d")), drive),
    )
    return ModulatedHamiltonian(2 ** n_atoms * dim_cavity, terms)


def build_rabi(spec: SystemSpec, t: float, dim_cavity: int, rwa: bool = False) -> OperatorMatrix:
    return rabi_generator(spec, dim_cavity, rwa=rwa)(t)


def rabi_interaction_generator(spec: SystemSpec, dim_cavity: int) -> ModulatedHamiltonian:
    """Single-qubit Rabi Hamiltonian in the interaction picture of
    H0 = omega0 n + (Omega0/2) sigma_z.

    The state only evolves at the modulation/detuning scales, so long runs
    take O(10^4-10^5) adaptive steps instead of resolving every bare-level
    phase.  Photon-number observables are frame-invariant; quadratures come
    out in the frame co-rotating at omega0.
    """
    if spec.N != 1:
        raise CapacityError("interaction-picture builder supports N = 1")
    if dim_cavity < 2:
        raise InvalidDimensionError(f"dim_cavity must be >= 2, got {dim_cavity}")
    w0, W0 = spec.omega0, spec.Omega0
    d_plus, d_minus = w0 + W0, w0 - W0
    a = annihilation_op(dim_cavity).entries
    ad = a.conj().T
    i2 = np.eye(2)
    sp = sigma_plus().entries
    sm = sigma_minus().entries

    n_full = np.kron(i2, ad @ a)
    sz_full = np.kron(sigma_z().entries, np.eye(dim_cavity))
    a_sm = np.kron(sm, a)     # a sigma_-  (rotates at -(w0+W0))
    a_sp = np.kron(sp, a)     # a sigma_+  (rotates at -(w0-W0))
    a2 = np.kron(i2, a @ a)
    a1 = np.kron(i2, a)

    w_law = spec.law("omega")
    W_law = spec.law("Omega")
    g_law = spec.law("g")
    x_law = spec.law("chi")
    d_law = spec.law("d")

    def rotator(nu: float):
        def phase(t: float) -> complex:
            return complex(math.cos(nu * t), math.sin(nu * t))
        return phase

    ph_dp = rotator(-d_plus)
    ph_dm = rotator(-d_minus)
    ph_2w = rotator(-2.0 * w0)
    ph_1w = rotator(-w0)

    terms = [
        (lambda t: mod.evaluate(w_law, t) - w0, n_full),
        (lambda t: 0.5 * (mod.evaluate(W_law, t) - W0), sz_full),
        (lambda t: mod.evaluate(g_law, t) * ph_dp(t), a_sm),
        (lambda t: mod.evaluate(g_law, t) * np.conj(ph_dp(t)), a_sm.conj().T),
        (lambda t: mod.evaluate(g_law, t) * ph_dm(t), a_sp),
        (lambda t: mod.evaluate(g_law, t) * np.conj(ph_dm(t)), a_sp.conj().T),
        (lambda t: -1j * mod.evaluate(x_law, t) * ph_2w(t), a2),
        (lambda t: 1j * mod.evaluate(x_law, t) * np.conj(ph_2w(t)), a2.conj().T),
        (lambda t: -1j * mod.evaluate(d_law, t) * ph_1w(t), a1),
        (lambda t: 1j * mod.evaluate(d_law, t) * np.conj(ph_1w(t)), a1.conj().T),
    ]
    return ModulatedHamiltonian(2 * dim_cavity, tuple(terms))


def hp_generator(hp: HPSpec) -> ModulatedHamiltonian:
    """Holstein-Primakoff Hamiltonian, first order in b+b/N:

    w0 n_a + W(t) n_b + g~(t)(a+a+)(b+b+) + i chi(t)(a+^2-a^2)
        - (g~(t)/2N)(a+a+)(b+^2 b + b+ b^2) + i d(t)(a+ - a)
    """
    spec = hp.system
    dim = hp.dim_a * hp.dim_b
    if dim > 1 << 18:
        raise CapacityError(f"HP product dim {dim} too large")

    a = annihilation_op(hp.dim_a).entries
    b = annihilation_op(hp.dim_b).entries
    ia = np.eye(hp.dim_a)
    ib = np.eye(hp.dim_b)
    # a-mode owns the slow index here (mode (x) mode; no qubit blocks to keep contiguous)
    n_a = np.kron(a.conj().T @ a, ib)
    n_b = np.kron(ia, b.conj().T @ b)
    x_a = np.kron(a + a.conj().T, ib)
    x_b = np.kron(ia, b + b.conj().T)
    coupling = x_a @ x_b
    squeeze = np.kron(1j * (a.conj().T @ a.conj().T - a @ a), ib)
    drive = np.kron(1j * (a.conj().T - a), ib)
    b_corr = b.conj().T @ b.conj().T @ b + b.conj().T @ b @ b
    correction = x_a @ np.kron(ia, b_corr)

    for name, m in (("coupling", coupling), ("correction", correction)):
        _check_hermitian(m, f"HP term {name}")

    sqrt_n = math.sqrt(spec.N)
    g_law = spec.law("g")
    terms = (
        (_law_fn(spec.law("omega")), n_a),
        (_law_fn(spec.law("Omega")), n_b),
        (lambda t: sqrt_n * mod.evaluate(g_law, t), coupling),
        (_law_fn(spec.law("chi")), squeeze),
        (lambda t: -mod.evaluate(g_law, t) / (2.0 * sqrt_n), correction),
        (_law_fn(spec.law("d")), drive),
    )
    return ModulatedHamiltonian(dim, terms)


def build_hp(hp: HPSpec, t: float) -> OperatorMatrix:
    return hp_generator(hp)(t)


def retuned_spec(spec: SystemSpec, eta: float) -> SystemSpec:
    """Copy of `spec` with every modulated parameter's single tone moved to
    frequency eta (weights and phases kept).  Multi-tone laws would be
    ambiguous here and are rejected."""
    laws = {}
    for name in PARAMETERS:
        law = spec.law(name)
        if law.depth == 0.0 or not law.components:
            laws[name] = law
            continue
        if len(law.components) != 1:
            raise InvalidDimensionError(
                f"cannot retune multi-tone law for {name!r}; set the tone explicitly")
        c = law.components[0]
        laws[name] = mod.ParameterLaw(
            law.bare, law.depth, (mod.ModulationComponent(eta, c.weight, c.phase),))
    return SystemSpec(omega0=spec.omega0, Omega0=spec.Omega0, g0=spec.g0,
                      chi0=spec.chi0, N=spec.N, kappa=spec.kappa, laws=laws)


def build_nonlinear_dce(p: ReducedDCEParams, dim: int) -> OperatorMatrix:
    """w_r n + a_r n^2 + i q_r (a+^2 - a^2) [+ i (rho* a+ - rho a)]."""
    if dim < 4:
        raise InvalidDimensionError(f"nonlinear DCE Hamiltonian needs dim >= 4, got {dim}")
    m = np.arange(dim, dtype=float)
    h = np.diag((p.omega_r * m + p.alpha_r * m * m).astype(complex))
    a = annihilation_op(dim).entries
    ad = a.conj().T
    h += 1j * p.q_r * (ad @ ad - a @ a)
    rho = p.pump_complex
    if rho != 0:
        h += 1j * (np.conj(rho) * ad - rho * a)
    _check_hermitian(h, "nonlinear DCE Hamiltonian")
    return OperatorMatrix(dim, h, band_halfwidth=2)


def build_pumped_linear(rho: complex, xi: complex, dim: int) -> OperatorMatrix:
    """rho a + (xi/2) a^2 + h.c."""
    if dim < 4:
        raise InvalidDimensionError(f"pumped linear Hamiltonian needs dim >= 4, got {dim}")
    a = annihilation_op(dim).entries
    half = rho * a + 0.5 * xi * (a @ a)
    h = half + half.conj().T
    _check_hermitian(h, "pumped linear Hamiltonian")
    return OperatorMatrix(dim, h, band_halfwidth=1 if xi == 0 else 2)
