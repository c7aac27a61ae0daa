"""
Quantum Fisher information F[ρ, J] = tr(ρ L²) of a state under the unitary family
exp(-iθJ) ρ exp(iθJ), with L the symmetric logarithmic derivative, i.e. the solution of

    (ρ L + L ρ) / 2 = -i [J, ρ].

Given the spectral decomposition ρ = Σ_j r_j |r_j⟩⟨r_j|, both L and F are explicit:

    L_ij = 2i (r_i - r_j) / (r_i + r_j) ⟨r_i|J|r_j⟩,
    F    = 2 Σ_ij (r_i - r_j)² / (r_i + r_j) |⟨r_i|J|r_j⟩|².

Pairs with r_i + r_j below `PAIR_EPS` are left out.
"""

from dataclasses import dataclass
from enum import StrEnum
import logging
from math import exp

import numpy as np

from .eigen import Spectrum, hermitian_eig  # noqa: F401
from .fock import (
    CollectiveSpinOp,
    DiagonalMixture,
    as_density,
    as_direction,
    collective_spin,
    number_state,
)
from .moments import expectation, mixture_moments, variance
from .squeezing import UNDEFINED_TOL, gaussian_state

logger = logging.getLogger(__name__)

PAIR_EPS = 1e-12
BOUND_TOL = 1e-9


class QfiMethod(StrEnum):
    CLOSED_FORM = "closed-form"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class QfiReport:
    value: float
    method: QfiMethod


@dataclass(frozen=True)
class BoundChainReport:
    """
    Slacks of three inequalities on a triplet (n1, n2, n3), each >= 0 when it holds:

        heisenberg:  Δ²J_1 Δ²J_2 - ⟨J_3⟩²/4
        fisher2:     F[ρ, J_1] Δ²J_2 - ⟨J_3⟩²
        fisher3:     Δ²J_2 / ⟨J_3⟩² - 1 / F[ρ, J_1]   (vacuous when ⟨J_3⟩ = 0)
    """

    heisenberg_slack: float
    fisher2_slack: float
    fisher3_slack: float | None
    heisenberg: bool
    fisher2: bool
    fisher3: bool
    fisher3_vacuous: bool


def _state_spectrum(rho):
    """
    Return (r, V) with negative round-off eigenvalues clamped to 0 and r renormalized.
    """
    spec = hermitian_eig(rho.matrix)
    r = np.clip(spec.eigenvalues, 0.0, None)
    return r / r.sum(), spec.eigenvectors


def _generator_matrix(rho, generator):
    if isinstance(generator, CollectiveSpinOp):
        return generator.matrix
    if isinstance(generator, np.ndarray) and generator.ndim == 2:
        return generator
    return collective_spin(rho.n, generator).matrix


def _pair_weights(r):
    total = r[:, None] + r[None, :]
    mask = total >= PAIR_EPS
    return np.where(mask, r[:, None] - r[None, :], 0.0), np.where(mask, total, 1.0)


def sld(state, generator) -> np.ndarray:
    """
    Return the symmetric logarithmic derivative of ρ for the generator J.
    :param state: any state accepted by `as_density`
    :param generator: CollectiveSpinOp, Direction or Hermitian matrix
    """
    rho = as_density(state)
    r, V = _state_spectrum(rho)
    J = V.conj().T @ _generator_matrix(rho, generator) @ V
    diff, total = _pair_weights(r)
    L = V @ (2j * diff / total * J) @ V.conj().T
    return (L + L.conj().T) / 2


def qfi_spectral(state, generator) -> QfiReport:
    rho = as_density(state)
    r, V = _state_spectrum(rho)
    J = V.conj().T @ _generator_matrix(rho, generator) @ V
    diff, total = _pair_weights(r)
    value = 2.0 * float(np.sum(diff**2 / total * np.abs(J) ** 2))
    return QfiReport(value, QfiMethod.SPECTRAL)


def qfi_number_state(n, k, direction) -> QfiReport:
    """
    F[|k⟩⟨k|, J_n] = 4 Δ²J_n = (1 - nz²)(n + 2k(n - k)).
    """
    number_state(n, k)
    nz = as_direction(direction).nz
    return QfiReport((1 - nz**2) * (n + 2 * k * (n - k)), QfiMethod.CLOSED_FORM)


def qfi_diagonal_mixture(mix: DiagonalMixture, direction) -> QfiReport:
    """
    Quantum Fisher information of Σ_k p_k |k⟩⟨k| for J_n:

        (1 - nz²) [N + 2N⟨k⟩ - 2⟨k²⟩ - 4 Σ_k p_k p_{k+1} / (p_k + p_{k+1}) (k+1)(N-k)].

    At p = δ_kℓ this reduces to the number-state value.
    """
    n, p = mix.n, mix.probs
    nz = as_direction(direction).nz
    m = mixture_moments(mix)
    k = np.arange(n, dtype=np.float64)
    total = p[:-1] + p[1:]
    mask = total >= PAIR_EPS
    cross = np.sum(
        np.where(mask, p[:-1] * p[1:] / np.where(mask, total, 1.0), 0.0)
        * (k + 1)
        * (n - k)
    )
    value = (1 - nz**2) * (n + 2 * n * m.mean_k - 2 * m.second_k - 4 * cross)
    return QfiReport(float(value), QfiMethod.CLOSED_FORM)


def qfi_gaussian_asymptotics(n, center, sigma):
    """
    Return (F[ψ, J_y], F[ψ, J_z]) for the Gaussian state |center, σ⟩.

    As σ -> 0, F_y approaches N + 2ℓ(N-ℓ) and F_z behaves as 8 exp(-1/σ²).
    """
    psi = gaussian_state(n, center, sigma)
    f_y = qfi_spectral(psi, collective_spin(n, (0.0, 1.0, 0.0))).value
    f_z = qfi_spectral(psi, collective_spin(n, (0.0, 0.0, 1.0))).value
    logger.debug(
        "gaussian n=%d l=%s sigma=%s: F_y=%.12g, F_z=%.6e (8exp(-1/s^2)=%.6e)",
        n,
        center,
        sigma,
        f_y,
        f_z,
        8 * exp(-1 / sigma**2),
    )
    return f_y, f_z


def bound_chain_check(state, triplet, tol=BOUND_TOL) -> BoundChainReport:
    rho = as_density(state)
    J1, J2, J3 = (collective_spin(rho.n, d) for d in triplet.directions)
    v1, v2 = variance(rho, J1), variance(rho, J2)
    m3_sq = expectation(rho, J3) ** 2
    fisher = qfi_spectral(rho, J1).value

    heisenberg = v1 * v2 - m3_sq / 4
    fisher2 = fisher * v2 - m3_sq
    vacuous = m3_sq < UNDEFINED_TOL
    if vacuous:
        fisher3 = None
    elif fisher > 0:
        fisher3 = v2 / m3_sq - 1 / fisher
    else:
        fisher3 = float("-inf")
    return BoundChainReport(
        heisenberg,
        fisher2,
        fisher3,
        heisenberg >= -tol,
        fisher2 >= -tol,
        vacuous or fisher3 >= -tol,
        vacuous,
    )
