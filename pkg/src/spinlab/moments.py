"""
Means, second moments and variances of collective spins.

Two routes are provided: the matrix oracle (`expectation`, `variance`, `spin_moments`)
which works for any state and any Hermitian operator, and the closed forms for number
states and diagonal mixtures, which depend on the state only through ⟨k⟩ and ⟨k²⟩.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .fock import (
    CollectiveSpinOp,
    DensityOperator,
    DiagonalMixture,
    PureState,
    as_direction,
    number_state,
)

IMAG_TOL = 1e-10


@dataclass(frozen=True)
class MomentReport:
    """⟨J⟩, ⟨J²⟩ and Δ²J = ⟨J²⟩ - ⟨J⟩²."""

    mean: float
    second_moment: float
    variance: float


@dataclass(frozen=True)
class MixtureMoments:
    """⟨k⟩, ⟨k²⟩ and Δ²k of the number distribution of a state."""

    mean_k: float
    second_k: float
    var_k: float


def _operator_matrix(op):
    return op.matrix if isinstance(op, CollectiveSpinOp) else np.asarray(op)


def _real(value, what):
    value = complex(value)
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise NumericError(f"{what} has imaginary part {value.imag:.3e}")
    return value.real


def _dimension(state):
    if isinstance(state, PureState | DiagonalMixture | DensityOperator):
        return state.n + 1
    return np.shape(state)[0]


def _moments(state, M):
    """Return the complex pair (Tr ρM, Tr ρM²)."""
    if _dimension(state) != M.shape[0]:
        raise DomainError(
            f"state of dimension {_dimension(state)} does not match operator "
            f"of dimension {M.shape[0]}"
        )
    if isinstance(state, DiagonalMixture):
        p = state.probs
        return p @ M.diagonal(), p @ np.sum(np.abs(M) ** 2, axis=1)
    if isinstance(state, PureState):
        state = state.amplitudes
    elif isinstance(state, DensityOperator):
        state = state.matrix
    state = np.asarray(state)
    if state.ndim == 1:
        Mv = M @ state
        return np.vdot(state, Mv), np.vdot(Mv, Mv)
    RM = state @ M
    return np.trace(RM), np.einsum("ij,ji->", RM, M)


def expectation(state, op) -> float:
    """
    Return Tr(ρ J).
    :param state: PureState, DensityOperator, DiagonalMixture, or a raw state vector
        or density matrix of any dimension
    :param op: CollectiveSpinOp or a raw Hermitian matrix
    """
    mean, _ = _moments(state, _operator_matrix(op))
    return _real(mean, "expectation value")


def spin_moments(state, op) -> MomentReport:
    """Matrix-oracle moments of `op` in `state`."""
    mean, second = _moments(state, _operator_matrix(op))
    mean, second = _real(mean, "expectation value"), _real(second, "second moment")
    return MomentReport(mean, second, second - mean**2)


def variance(state, op) -> float:
    """Return Δ²J = Tr(ρJ²) - Tr(ρJ)²."""
    return spin_moments(state, op).variance


def number_distribution(state) -> np.ndarray:
    """Probabilities of the number basis outcomes k = 0..n."""
    if isinstance(state, DiagonalMixture):
        return state.probs
    if isinstance(state, PureState):
        return state.probabilities
    if isinstance(state, DensityOperator):
        return state.diagonal
    raise DomainError(f"not a state: {type(state).__name__}")


def mixture_moments(state) -> MixtureMoments:
    """
    Return ⟨k⟩, ⟨k²⟩, Δ²k of the number distribution of a state.
    """
    p = number_distribution(state)
    k = np.arange(len(p), dtype=np.float64)
    mean = float(p @ k)
    return MixtureMoments(mean, float(p @ k**2), float(p @ (k - mean) ** 2))


def number_state_moments(n, k, direction) -> MomentReport:
    """
    Closed-form moments of J_n in the number state |k⟩:

        ⟨J_n⟩   = nz (2k - n) / 2,
        Δ²J_n   = (1 - nz²)(n + 2k(n - k)) / 4.
    """
    number_state(n, k)
    nz = as_direction(direction).nz
    mean = nz * (2 * k - n) / 2
    var = (1 - nz**2) * (n + 2 * k * (n - k)) / 4
    return MomentReport(mean, var + mean**2, var)


def mixture_spin_moments(mix: DiagonalMixture, direction) -> MomentReport:
    """
    Closed-form moments of J_n in a diagonal mixture, from ⟨k⟩ and ⟨k²⟩ only:

        ⟨J_n⟩ = nz (2⟨k⟩ - N) / 2,
        Δ²J_n = nz² Δ²k + (1 - nz²)(N + 2N⟨k⟩ - 2⟨k²⟩) / 4.
    """
    n, nz = mix.n, as_direction(direction).nz
    m = mixture_moments(mix)
    mean = nz * (2 * m.mean_k - n) / 2
    var = nz**2 * m.var_k + (1 - nz**2) * (n + 2 * n * m.mean_k - 2 * m.second_k) / 4
    return MomentReport(mean, var + mean**2, var)


def witness_threshold(n, k) -> float:
    """
    Return 2k(n-k) / (n + 2k(n-k)).

    The number state |k⟩ has Δ²J_n > n/4, and quantum Fisher information above n,
    exactly when nz² is below this value.
    """
    if n == 0:
        return 0.0
    return 2 * k * (n - k) / (n + 2 * k * (n - k))
