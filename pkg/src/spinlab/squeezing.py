"""
Spin-squeezing inequalities and squeezing parameters.

The four inequalities for N distinguishable qubits are evaluated as residuals whose
sign decides the outcome:

    lhs1 = Σ_i ⟨J_i²⟩ - N(N+2)/4                           (holds if lhs1 <= 0)
    lhs2 = Σ_i Δ²J_i - N/2                                 (holds if lhs2 >= 0)
    lhs3 = ⟨J_1²⟩ + ⟨J_2²⟩ - N/2 - (N-1) Δ²J_3             (holds if lhs3 <= 0)
    lhs4 = (N-1)(Δ²J_1 + Δ²J_2) - ⟨J_3²⟩ - N(N-2)/4        (holds if lhs4 >= 0)

Identical bosons saturate the first one, and number states violate the third one.
"""

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import DomainError
from .fock import (
    SEPARABLE,
    PureState,
    collective_spin,
    separability_label,
    superposition,
)
from .moments import expectation, mixture_moments, spin_moments

TOTH_TOL = 1e-9
UNDEFINED_TOL = 1e-14
WEIGHTINGS = ("amplitude", "probability")


@dataclass(frozen=True)
class TothReport:
    lhs1: float
    lhs2: float
    lhs3: float
    lhs4: float
    satisfied1: bool
    satisfied2: bool
    satisfied3: bool
    satisfied4: bool

    @property
    def all_satisfied(self) -> bool:
        return self.satisfied1 and self.satisfied2 and self.satisfied3 and self.satisfied4


@dataclass(frozen=True)
class SqueezingReport:
    """
    ξ²_W = N Δ²J_1 / ⟨J_3⟩² and ξ²_S = N Δ²J_1 / (⟨J_2⟩² + ⟨J_3⟩²).

    A parameter is None when its denominator is below 1e-14.
    """

    xi_w_squared: float | None
    xi_s_squared: float | None
    denominator_w: float
    denominator_s: float


def toth_residuals(n, seconds, variances, tol=TOTH_TOL) -> TothReport:
    """
    Evaluate the four inequalities from moments along an orthogonal triplet.
    :param n: number of qubits
    :param seconds: (⟨J_1²⟩, ⟨J_2²⟩, ⟨J_3²⟩)
    :param variances: (Δ²J_1, Δ²J_2, Δ²J_3)
    """
    s1, s2, s3 = seconds
    v1, v2, v3 = variances
    lhs1 = s1 + s2 + s3 - n * (n + 2) / 4
    lhs2 = v1 + v2 + v3 - n / 2
    lhs3 = s1 + s2 - n / 2 - (n - 1) * v3
    lhs4 = (n - 1) * (v1 + v2) - s3 - n * (n - 2) / 4
    return TothReport(
        lhs1, lhs2, lhs3, lhs4, lhs1 <= tol, lhs2 >= -tol, lhs3 <= tol, lhs4 >= -tol
    )


def toth_check(state, triplet) -> TothReport:
    """
    Evaluate the four inequalities on an arbitrary state with matrix-oracle moments.
    """
    reports = [spin_moments(state, collective_spin(state.n, d)) for d in triplet.directions]
    return toth_residuals(
        state.n, [r.second_moment for r in reports], [r.variance for r in reports]
    )


def _diagonal_moments(state):
    if separability_label(state) != SEPARABLE:
        raise DomainError("the third-inequality closed form needs a state diagonal in |k⟩")
    return mixture_moments(state)


def ineq3_delta(state, n3z_squared) -> float:
    """
    Return the left-hand side of the third inequality for a state diagonal in the
    number basis, along any triplet with n3z² = `n3z_squared`:

        δ = (N/2)(Δ²k - a) + (n3z²/2)((N+2) a - 3N Δ²k),   a = ⟨k⟩(N - ⟨k⟩).
    """
    z = float(n3z_squared)
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"n3z² must lie in [0, 1], got {z}")
    n, m = state.n, _diagonal_moments(state)
    a = m.mean_k * (n - m.mean_k)
    return n / 2 * (m.var_k - a) + z / 2 * ((n + 2) * a - 3 * n * m.var_k)


def ineq3_threshold(state) -> float | None:
    """
    Return the value of n3z² above which the third inequality is violated, or None
    when ⟨k⟩(N - ⟨k⟩) <= N Δ²k and no triplet violates it.
    """
    n, m = state.n, _diagonal_moments(state)
    a = m.mean_k * (n - m.mean_k)
    if a <= n * m.var_k:
        return None
    threshold = n * (a - m.var_k) / ((n + 2) * a - 3 * n * m.var_k)
    return threshold if threshold <= 1.0 else None


def _ratio(numerator, denominator):
    return None if denominator < UNDEFINED_TOL else numerator / denominator


def xi_parameters(state, triplet) -> SqueezingReport:
    n = state.n
    n1, n2, n3 = (collective_spin(n, d) for d in triplet.directions)
    numerator = n * spin_moments(state, n1).variance
    den_w = expectation(state, n3) ** 2
    den_s = expectation(state, n2) ** 2 + den_w
    return SqueezingReport(_ratio(numerator, den_w), _ratio(numerator, den_s), den_w, den_s)


def xi_s_number_state(n, k) -> float | None:
    """
    Closed form ξ²_S(|k⟩) = N(N + 2k(N-k)) / (2k - N)² for n1 orthogonal to z; None
    for the twin Fock state 2k = N.
    """
    if 2 * k == n:
        return None
    return n * (n + 2 * k * (n - k)) / (2 * k - n) ** 2


def gaussian_state(n, center, sigma) -> PureState:
    """
    Return Σ_k sqrt(p_k) |k⟩ with p_k = exp(-(k - center)²/σ²) / Z.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not 0 <= center <= n:
        raise DomainError(f"center {center} outside 0..{n}")
    k = np.arange(n + 1, dtype=np.float64)
    p = np.exp(-((k - center) ** 2) / sigma**2)
    return superposition(n, np.sqrt(p / p.sum()))


def xi_w_diagonal_real(state: PureState) -> float | None:
    """
    Return ξ²_W along the triplet (z, y, x) for a state with non-negative real
    amplitudes c_k = sqrt(p_k):

        ξ²_W = N Δ²k / (Σ_k sqrt(k(N-k+1)) sqrt(p_k p_{k-1}))².
    """
    c = state.amplitudes
    if np.max(np.abs(c.imag), initial=0.0) > 1e-12 or np.min(c.real) < -1e-12:
        raise DomainError("amplitudes must be real and non-negative")
    n, c = state.n, np.clip(c.real, 0.0, None)
    k = np.arange(1, n + 1, dtype=np.float64)
    mean_x = float(np.sum(np.sqrt(k * (n - k + 1)) * c[1:] * c[:-1]))
    return _ratio(n * mixture_moments(state).var_k, mean_x**2)


def _check_flat_peak(n, p):
    if n % 2 or n <= 0:
        raise DomainError(f"flat-peak states need an even positive n, got {n}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p}")


def flat_peak_state(n, p, weighting="amplitude") -> PureState:
    """
    Return the state peaked at N/2 that approaches |N/2⟩ as p -> 0.

    With weighting "amplitude" the amplitudes are p/N away from the peak and 1 - p on
    it, normalized afterwards; ξ²_W tends to N(N+1)/12 with an O(p) correction.
    With weighting "probability" these are the probabilities instead, Δ²k equals
    p(N+2)(N+1)/12 exactly and ξ²_W is given by `flat_peak_xi_w`.
    """
    _check_flat_peak(n, p)
    if weighting not in WEIGHTINGS:
        raise DomainError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    off, peak = (p / n, 1 - p) if weighting == "amplitude" else (sqrt(p / n), sqrt(1 - p))
    amps = np.full(n + 1, off)
    amps[n // 2] = peak
    return superposition(n, amps)


def flat_peak_xi_w(n, p) -> float:
    """
    Closed form of ξ²_W for `flat_peak_state(n, p, "probability")`:

        N(N+1) / (12 (sqrt(1-p) + q)²),  q = sqrt(p / (N²(N+2))) Σ' sqrt(k(N-k+1)),

    where Σ' runs over k = 1..N except k = N/2 and N/2 + 1.
    """
    _check_flat_peak(n, p)
    s = sum(sqrt(k * (n - k + 1)) for k in range(1, n + 1) if k not in (n // 2, n // 2 + 1))
    q = sqrt(p / (n**2 * (n + 2))) * s
    return n * (n + 1) / (12 * (sqrt(1 - p) + q) ** 2)
