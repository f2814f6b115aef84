"""Diagnostics: photon statistics, quadrature variances, classification.

Quadratures follow the printed convention p = (a - a+)/2i, paired with
x = (a + a+)/2 (the paper never defines x; it only enters the uncertainty
product check).  The vacuum variance is 1/4 for both.

Mandel factor Q = [<n(n-1)> - <n>^2]/<n>: -1 Fock, 0 coherent, nbar thermal,
Q/<n> = 2 + 1/<n> squeezed vacuum; larger is called hyper-Poissonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidDimensionError
from .fock import DensityMatrix, StateVector

CLASSIFICATION_EPS = 0.05

LABELS = ("sub-Poissonian", "Poissonian-like", "super-Poissonian",
          "squeezed-vacuum-like", "hyper-Poissonian")


@dataclass(frozen=True)
class ObservableRecord:
    mean_n: float
    mandel_q: float | None     # None: undefined (vacuum)
    var_p: float
    var_x: float
    q_over_n: float | None
    atomic_excitation: float | None
    fock_distribution: np.ndarray
    purity: float


def _moments(state: StateVector | DensityMatrix) -> tuple[np.ndarray, complex, complex, float]:
    """(Fock distribution, <a>, <a^2>, purity)."""
    if isinstance(state, StateVector):
        psi = state.amplitudes
        dim = state.dim
        m = np.arange(dim)
        p = np.abs(psi) ** 2
        exp_a = complex(np.sum(psi[:-1].conj() * psi[1:] * np.sqrt(m[1:])))
        exp_a2 = complex(np.sum(psi[:-2].conj() * psi[2:] * np.sqrt(m[2:] * (m[2:] - 1.0))))
        return p, exp_a, exp_a2, 1.0
    rho = state.entries
    dim = state.dim
    m = np.arange(dim)
    p = np.real(np.diag(rho)).copy()
    exp_a = complex(np.sum(np.diagonal(rho, offset=-1) * np.sqrt(m[1:])))
    exp_a2 = complex(np.sum(np.diagonal(rho, offset=-2) * np.sqrt(m[2:] * (m[2:] - 1.0))))
    purity = float(np.real(np.trace(rho @ rho)))
    return p, exp_a, exp_a2, purity


def mean_photon(state) -> float:
    p, _, _, _ = _moments(state)
    return float(np.dot(np.arange(len(p)), p))


def mandel_q(state) -> float | None:
    """Q = [<n(n-1)> - <n>^2]/<n>; None for the vacuum (undefined, not an error)."""
    p, _, _, _ = _moments(state)
    m = np.arange(len(p))
    n1 = float(np.dot(m, p))
    if n1 <= 0.0:
        return None
    n2 = float(np.dot(m * (m - 1.0), p))
    return (n2 - n1 * n1) / n1


def quadrature_variance(state, which: str = "p") -> float:
    """Variance of p = (a - a+)/2i or x = (a + a+)/2; vacuum value 1/4."""
    p, exp_a, exp_a2, _ = _moments(state)
    mean_n = float(np.dot(np.arange(len(p)), p))
    if which == "p":
        second = 0.25 * (2.0 * mean_n + 1.0 - 2.0 * exp_a2.real)
        first = exp_a.imag
    elif which == "x":
        second = 0.25 * (2.0 * mean_n + 1.0 + 2.0 * exp_a2.real)
        first = exp_a.real
    else:
        raise InvalidDimensionError(f"quadrature must be 'p' or 'x', got {which!r}")
    return second - first * first


def record_from_state(state, atomic_excitation: float | None = None) -> ObservableRecord:
    p, exp_a, exp_a2, purity = _moments(state)
    m = np.arange(len(p))
    mean_n = float(np.dot(m, p))
    q = mandel_q(state)
    return ObservableRecord(
        mean_n=mean_n,
        mandel_q=q,
        var_p=quadrature_variance(state, "p"),
        var_x=quadrature_variance(state, "x"),
        q_over_n=(q / mean_n if (q is not None and mean_n > 0) else None),
        atomic_excitation=atomic_excitation,
        fock_distribution=p,
        purity=purity,
    )


def records_from_series(records: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Derive the plotted diagnostics from a Trajectory's scalar series."""
    mean_n = records["mean_n"]
    mean_n2 = records["mean_n2"]
    re_a2 = records["re_a2"]
    im_a = records["im_a"]
    re_a = records["re_a"]
    with np.errstate(divide="ignore", invalid="ignore"):
        mandel = np.where(mean_n > 0.0,
                          (mean_n2 - mean_n - mean_n ** 2) / np.where(mean_n > 0, mean_n, 1.0),
                          np.nan)
    var_p = 0.25 * (2.0 * mean_n + 1.0 - 2.0 * re_a2) - im_a ** 2
    var_x = 0.25 * (2.0 * mean_n + 1.0 + 2.0 * re_a2) - re_a ** 2
    return {"mean_n": mean_n, "mandel_q": mandel, "var_p": var_p, "var_x": var_x}


def classify_statistics(mean_n: float, q: float,
                        eps: float = CLASSIFICATION_EPS) -> str:
    """Photon-statistics label from (mean n, Mandel Q).

    Q < -eps: sub-Poissonian; |Q| <= eps: Poissonian-like; then by Q/<n>
    against the squeezed-vacuum benchmark 2 + 1/<n> (within +-eps of it:
    squeezed-vacuum-like, above: hyper-Poissonian, below: super-Poissonian).
    """
    if mean_n <= 0:
        raise InvalidDimensionError("classification undefined for the vacuum")
    if q < -eps:
        return "sub-Poissonian"
    if abs(q) <= eps:
        return "Poissonian-like"
    benchmark = 2.0 + 1.0 / mean_n
    ratio = q / mean_n
    if abs(ratio - benchmark) <= eps:
        return "squeezed-vacuum-like"
    if ratio > benchmark:
        return "hyper-Poissonian"
    return "super-Poissonian"


def classify_record(rec: ObservableRecord, eps: float = CLASSIFICATION_EPS) -> str:
    if rec.mandel_q is None:
        raise InvalidDimensionError("classification undefined for the vacuum")
    return classify_statistics(rec.mean_n, rec.mandel_q, eps)
