"""Operators and states on truncated Fock / qubit(x)mode Hilbert spaces.

Storage is dense complex with optional bandedness metadata; dimensions in
this package stay small enough (vectors <~ 8000, density matrices <~ 200)
that dense algebra plus the banded fast path in `dynamics` covers every
use.  All values are immutable after construction (arrays are marked
read-only) and may be shared freely between threads.

Index convention for qubit(x)mode products: the Fock index is the fast
(innermost) index, i.e. ``tensor_product(qubit_op, mode_op)`` with the
first operand owning the slow index, so the two-level blocks at fixed
photon number stay contiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import (
    CapacityError,
    DimensionMismatchError,
    InvalidDimensionError,
    TruncationError,
)

# Largest Hilbert-space dimension a tensor product may produce.
MAX_TENSOR_DIM = 1 << 18

# Construction-time guards (see module invariants).
_NORM_TOL = 1e-9
_HERM_TOL = 1e-12
_TRACE_TOL = 1e-9
_EIG_FLOOR = -1e-8
_THERMAL_TAIL_GUARD = 1e-6


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class OperatorMatrix:
    """Complex matrix on a truncated basis.

    ``band_halfwidth``, when set, guarantees that every entry with
    ``|row - col| > band_halfwidth`` is exactly zero; propagators use it
    to pick banded fast paths.
    """

    dim: int
    entries: np.ndarray
    band_halfwidth: int | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidDimensionError(f"operator dim must be >= 1, got {self.dim}")
        ent = _readonly(self.entries)
        if ent.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"entries shape {ent.shape} does not match dim {self.dim}"
            )
        object.__setattr__(self, "entries", ent)
        if self.band_halfwidth is not None:
            if self.band_halfwidth < 0:
                raise InvalidDimensionError("band_halfwidth must be >= 0")
            rows, cols = np.indices((self.dim, self.dim))
            outside = np.abs(rows - cols) > self.band_halfwidth
            if np.any(ent[outside] != 0):
                raise InvalidDimensionError(
                    "entries outside the declared band are nonzero"
                )

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dim, self.entries.conj().T, self.band_halfwidth)

    def is_hermitian(self, tol: float = 1e-13) -> bool:
        return float(np.abs(self.entries - self.entries.conj().T).max()) < tol


@dataclass(frozen=True)
class StateVector:
    """Pure state; normalized to 1 within 1e-9 at construction."""

    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.shape != (self.dim,):
            raise DimensionMismatchError(
                f"amplitudes shape {amps.shape} does not match dim {self.dim}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > _NORM_TOL:
            raise InvalidDimensionError(f"state norm {norm} deviates from 1 by > {_NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state; Hermitian within 1e-12, unit trace within 1e-9.

    Positivity (smallest eigenvalue >= -1e-8) is checked lazily via
    `min_eigenvalue` because the eigen-decomposition is comparatively
    expensive.
    """

    dim: int
    entries: np.ndarray
    _min_eig: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        ent = _readonly(self.entries)
        if ent.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"entries shape {ent.shape} does not match dim {self.dim}"
            )
        herm = float(np.abs(ent - ent.conj().T).max())
        if herm > _HERM_TOL:
            raise InvalidDimensionError(f"density matrix not Hermitian: max |rho-rho^+| = {herm}")
        tr = complex(np.trace(ent))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise InvalidDimensionError(f"density matrix trace {tr} deviates from 1")
        object.__setattr__(self, "entries", ent)

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue; raises if below the -1e-8 positivity floor."""
        if not self._min_eig:
            self._min_eig.append(float(np.linalg.eigvalsh(self.entries).min()))
        lam = self._min_eig[0]
        if lam < _EIG_FLOOR:
            raise InvalidDimensionError(f"density matrix has eigenvalue {lam} < {_EIG_FLOOR}")
        return lam


# ---------------------------------------------------------------------------
# single-mode operators


def annihilation_op(dim: int) -> OperatorMatrix:
    """a with <n-1|a|n> = sqrt(n) on the truncated basis; band_halfwidth 1."""
    if dim < 2:
        raise InvalidDimensionError(f"annihilation operator needs dim >= 2, got {dim}")
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return OperatorMatrix(dim, a, band_halfwidth=1)


def creation_op(dim: int) -> OperatorMatrix:
    return annihilation_op(dim).dagger()


def number_op(dim: int) -> OperatorMatrix:
    if dim < 1:
        raise InvalidDimensionError(f"number operator needs dim >= 1, got {dim}")
    return OperatorMatrix(dim, np.diag(np.arange(dim, dtype=complex)), band_halfwidth=0)


def identity_op(dim: int) -> OperatorMatrix:
    if dim < 1:
        raise InvalidDimensionError(f"identity needs dim >= 1, got {dim}")
    return OperatorMatrix(dim, np.eye(dim, dtype=complex), band_halfwidth=0)


# qubit operators on the {|g>, |e>} basis, ordered (g, e).


def sigma_z() -> OperatorMatrix:
    return OperatorMatrix(2, np.diag([-1.0 + 0j, 1.0]), band_halfwidth=0)


def sigma_plus() -> OperatorMatrix:
    """|e><g|."""
    m = np.zeros((2, 2), dtype=complex)
    m[1, 0] = 1.0
    return OperatorMatrix(2, m, band_halfwidth=1)


def sigma_minus() -> OperatorMatrix:
    """|g><e|."""
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1.0
    return OperatorMatrix(2, m, band_halfwidth=1)


def excited_projector() -> OperatorMatrix:
    """|e><e|."""
    return OperatorMatrix(2, np.diag([0.0 + 0j, 1.0]), band_halfwidth=0)


# ---------------------------------------------------------------------------
# composition and states


def tensor_product(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product with the FIRST operand owning the slow index."""
    dim = a.dim * b.dim
    if dim > MAX_TENSOR_DIM:
        raise CapacityError(f"tensor product dim {dim} exceeds cap {MAX_TENSOR_DIM}")
    hw = 0 if (a.band_halfwidth == 0 and b.band_halfwidth == 0) else None
    return OperatorMatrix(dim, np.kron(a.entries, b.entries), band_halfwidth=hw)


def tensor_state(a: StateVector, b: StateVector) -> StateVector:
    dim = a.dim * b.dim
    if dim > MAX_TENSOR_DIM:
        raise CapacityError(f"tensor state dim {dim} exceeds cap {MAX_TENSOR_DIM}")
    return StateVector(dim, np.kron(a.amplitudes, b.amplitudes))


def fock_state(n: int, dim: int) -> StateVector:
    if not 0 <= n < dim:
        raise InvalidDimensionError(f"Fock index {n} outside [0, {dim})")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return StateVector(dim, v)


def vacuum_state(dim: int) -> StateVector:
    return fock_state(0, dim)


def coherent_state(alpha: complex, dim: int, tail_guard: float = _THERMAL_TAIL_GUARD) -> StateVector:
    """|alpha> = D(alpha)|0> built by exponentiating the displacement generator."""
    a = annihilation_op(dim).entries
    d = expm(alpha * a.conj().T - np.conj(alpha) * a)
    v = d[:, 0]
    tail = float((np.abs(v[-2:]) ** 2).sum()) if dim >= 2 else 0.0
    if tail > tail_guard:
        raise TruncationError(f"coherent state tail {tail} above guard {tail_guard}; increase dim")
    return StateVector(dim, v / np.linalg.norm(v))


def thermal_state(nbar: float, dim: int) -> tuple[DensityMatrix, float]:
    """Thermal state rho_n = nbar^n/(nbar+1)^(n+1), renormalized on the
    truncated basis.  Returns (state, discarded tail weight)."""
    if nbar < 0:
        raise InvalidDimensionError(f"nbar must be >= 0, got {nbar}")
    if dim < 1:
        raise InvalidDimensionError(f"thermal state needs dim >= 1, got {dim}")
    if nbar == 0:
        weights = np.zeros(dim)
        weights[0] = 1.0
        tail = 0.0
    else:
        n = np.arange(dim)
        log_w = n * np.log(nbar) - (n + 1) * np.log(nbar + 1.0)
        weights = np.exp(log_w)
        tail = 1.0 - float(weights.sum())
        tail = max(tail, 0.0)
        if tail > _THERMAL_TAIL_GUARD:
            raise TruncationError(
                f"thermal tail weight {tail:.3e} above guard {_THERMAL_TAIL_GUARD}; increase dim"
            )
        weights = weights / weights.sum()
    return DensityMatrix(dim, np.diag(weights.astype(complex))), tail


def expectation(op: OperatorMatrix, state: StateVector | DensityMatrix) -> complex:
    """<psi|O|psi> or Tr(rho O).  The imaginary part is reported as-is;
    callers assert reality for Hermitian observables."""
    if op.dim != state.dim:
        raise DimensionMismatchError(f"operator dim {op.dim} != state dim {state.dim}")
    if isinstance(state, StateVector):
        return complex(np.vdot(state.amplitudes, op.entries @ state.amplitudes))
    return complex(np.trace(state.entries @ op.entries))
