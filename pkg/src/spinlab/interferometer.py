"""
Rotation-based phase measurement.

A state ρ is rotated to ρ_θ = exp(-iθJ) ρ exp(iθJ) and then measured, either through
the mean of a collective spin (error propagation) or by counting particles in the
eigenbasis of a collective spin (outcome distributions, classical Fisher information
and maximum-likelihood estimation).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
import logging
from math import acos, pi
from time import perf_counter_ns

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, NumericError
from .fock import (
    X,
    Z,
    DensityOperator,
    DiagonalMixture,
    Direction,
    PureState,
    as_density,
    as_direction,
    collective_spin,
    generator_spectrum,
    mode_rotation,
    superposition,
)
from .moments import expectation, spin_moments
from .qfi import qfi_spectral

logger = logging.getLogger(__name__)

FD_STEP = 1e-5
SLOPE_TOL = 1e-12
PROB_TOL = 1e-12
ORTHO_TOL = 1e-10
MLE_XATOL = 1e-6
GRID_POINTS = 65
LOG_FLOOR = 1e-300


class TimeProfile:
    """
    Object containing time spent on the parts of a phase-estimation run.
    """

    def __init__(self):
        self._strs = ["Sampling", "Likelihood"]
        self.num_iterations = 0
        self.times = [0] * 2

    def tick(self, *times):
        self.num_iterations += 1
        self.times = [x + y for x, y in zip(self.times, times, strict=False)]

    def __str__(self):
        return f"Repetitions: {self.num_iterations}\n" + "\n".join(
            f"t_{{{s:10}}}={t / 10**9:10.3f}s"
            for s, t in zip(self._strs, self.times, strict=False)
            if t
        )


@dataclass(frozen=True, eq=False)
class PhaseEstimationResult:
    theta_true: float
    estimates: np.ndarray = field(repr=False)
    sample_variance: float
    crb_quantum: float
    crb_classical: float
    shots: int
    repetitions: int
    seed: int
    fisher_quantum: float
    fisher_classical: float
    particles: int

    @property
    def mean_estimate(self) -> float:
        return float(np.mean(self.estimates))

    @property
    def shot_noise(self) -> float:
        """The bound 1/(M N) attainable with separable states of distinguishable qubits."""
        return 1.0 / (self.shots * self.particles)


def measurement_rotation(n, meas_dir) -> np.ndarray:
    """
    Return the unitary W with W J_meas W^† = J_z, so that counting particles after W
    measures J_meas.
    """
    meas_dir = as_direction(meas_dir)
    axis = np.cross(meas_dir.vector, Z.vector)
    norm = float(np.linalg.norm(axis))
    if norm < 1e-12:
        if meas_dir.nz > 0:
            return np.identity(n + 1, dtype=np.complex128)
        return mode_rotation(n, X, pi)
    angle = acos(max(-1.0, min(1.0, meas_dir.nz)))
    return mode_rotation(n, Direction.from_vector(axis / norm, normalize=True), angle)


class PhaseModel:
    """
    Outcome probabilities p_θ(m) = ⟨m| W ρ_θ W^† |m⟩ of a fixed state, rotation
    generator and measured collective spin.

    The spectrum of the generator is computed once, so that each θ costs only a
    matrix-vector product.
    """

    def __init__(self, state, rot_dir, meas_dir=Z):
        self.rot_dir, self.meas_dir = as_direction(rot_dir), as_direction(meas_dir)
        if isinstance(state, DiagonalMixture):
            state = as_density(state)
        self.state, self.n = state, state.n

        spec = generator_spectrum(self.n, self.rot_dir)
        self._lambda = spec.eigenvalues
        V = spec.eigenvectors
        self._WV = measurement_rotation(self.n, self.meas_dir) @ V
        if isinstance(state, PureState):
            self._coeffs = V.conj().T @ state.amplitudes
            self._rho = None
        else:
            self._coeffs = None
            self._rho = V.conj().T @ state.matrix @ V

    def probabilities(self, theta) -> np.ndarray:
        """
        Return p_θ(m), m = 0..n; for an array of angles, one row per angle.
        """
        thetas = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        phases = np.exp(-1j * np.outer(self._lambda, thetas))
        if self._coeffs is not None:
            P = np.abs(self._WV @ (phases * self._coeffs[:, None])) ** 2
            P = P.T
        else:
            P = np.empty((len(thetas), self.n + 1))
            for i in range(len(thetas)):
                M = self._WV * phases[:, i]
                P[i] = np.sum((M @ self._rho) * M.conj(), axis=1).real
        P = np.clip(P, 0.0, None)
        return P[0] if np.ndim(theta) == 0 else P

    def log_likelihood(self, theta, counts) -> np.ndarray:
        P = self.probabilities(theta)
        return np.log(np.maximum(P, LOG_FLOOR)) @ counts


def rotate(state, direction, theta):
    """
    Return exp(-iθJ) ρ exp(iθJ). A diagonal mixture becomes a DensityOperator.
    """
    U = mode_rotation(state.n, direction, theta)
    if isinstance(state, PureState):
        return superposition(state.n, U @ state.amplitudes)
    rho = U @ as_density(state).matrix @ U.conj().T
    return DensityOperator(state.n, (rho + rho.conj().T) / 2)


def _check_orthogonal(rot_dir, meas_dir):
    if abs(rot_dir.dot(meas_dir)) > ORTHO_TOL:
        raise DomainError("rotation and measurement directions must be orthogonal")


def error_propagation(state, rot_dir, meas_dir, theta0=0.0) -> float | None:
    """
    Return δ²θ = Δ²J_meas / (∂_θ ⟨J_meas⟩_θ)² at θ0, or None at an uninformative point.

    The slope is evaluated by a central difference with step 1e-5; the point counts as
    uninformative when the exact slope ⟨i [J_rot, J_meas]⟩ is below 1e-12.
    """
    rot_dir, meas_dir = as_direction(rot_dir), as_direction(meas_dir)
    _check_orthogonal(rot_dir, meas_dir)
    J_rot, J_meas = collective_spin(state.n, rot_dir), collective_spin(state.n, meas_dir)

    at = rotate(state, rot_dir, theta0)
    exact = expectation(at, 1j * (J_rot.matrix @ J_meas.matrix - J_meas.matrix @ J_rot.matrix))
    if abs(exact) < SLOPE_TOL:
        return None
    plus = expectation(rotate(state, rot_dir, theta0 + FD_STEP), J_meas)
    minus = expectation(rotate(state, rot_dir, theta0 - FD_STEP), J_meas)
    slope = (plus - minus) / (2 * FD_STEP)
    return spin_moments(at, J_meas).variance / slope**2


def outcome_distribution(state, rot_dir, theta, meas_dir=Z) -> np.ndarray:
    """Probabilities of counting m = 0..n after the rotation."""
    return PhaseModel(state, rot_dir, meas_dir).probabilities(float(theta))


def _classical_fisher(model, theta):
    p0, plus, minus = model.probabilities([theta, theta + FD_STEP, theta - FD_STEP])
    dp = (plus - minus) / (2 * FD_STEP)
    keep = p0 >= PROB_TOL
    return float(np.sum(dp[keep] ** 2 / p0[keep]))


def classical_fisher(state, rot_dir, theta, meas_dir=Z) -> float:
    """
    Return Σ_m (∂_θ p_θ(m))² / p_θ(m) by central difference, dropping outcomes with
    p_θ(m) < 1e-12.
    """
    return _classical_fisher(PhaseModel(state, rot_dir, meas_dir), float(theta))


def _search_interval(theta_true):
    return theta_true / 4, min(pi / 2, 4 * theta_true)


def _maximize_likelihood(model, counts, lo, hi):
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = model.log_likelihood(grid, counts)
    i = int(np.argmax(values))
    observed = counts > 0
    if np.any(model.probabilities(grid[i])[observed] < LOG_FLOOR):
        raise NumericError("likelihood vanishes for the observed outcomes")

    a, b = grid[max(i - 1, 0)], grid[min(i + 1, GRID_POINTS - 1)]
    res = minimize_scalar(
        lambda t: -float(model.log_likelihood(t, counts)),
        bounds=(a, b),
        method="bounded",
        options={"xatol": MLE_XATOL},
    )
    logger.debug("likelihood bracket [%.6f, %.6f] -> %.9f", a, b, res.x)
    return float(res.x) if -res.fun >= values[i] else float(grid[i])


def _estimate_once(model, cdf, theta_true, shots, seed, repetition):
    """
    One repetition: draw `shots` outcomes and maximize the likelihood.
    Returns (estimate, sampling time, likelihood time) with times in ns.
    """
    t0 = perf_counter_ns()
    rng = np.random.Generator(np.random.Philox(seed ^ repetition))
    outcomes = np.searchsorted(cdf, rng.random(shots), side="right")
    counts = np.bincount(np.minimum(outcomes, model.n), minlength=model.n + 1)
    t1 = perf_counter_ns()
    estimate = _maximize_likelihood(model, counts, *_search_interval(theta_true))
    return estimate, t1 - t0, perf_counter_ns() - t1


def draw_seed() -> int:
    """Draw a 64-bit seed from operating-system entropy."""
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])


def mle_estimate(
    state,
    rot_dir,
    theta_true,
    shots,
    repetitions,
    seed=None,
    meas_dir=Z,
    cores=1,
) -> PhaseEstimationResult:
    """
    Monte Carlo maximum-likelihood phase estimation.

    Each repetition draws `shots` outcomes from p_θ_true by inverse-CDF sampling with a
    Philox generator keyed by `seed ^ repetition`, and maximizes the log-likelihood over
    θ in [θ_true/4, min(π/2, 4θ_true)]. Only |θ| is identifiable, so the search stays
    on positive angles.

    :param state: PureState, DensityOperator or DiagonalMixture
    :param rot_dir: rotation direction
    :param theta_true: true phase in (0, π/2)
    :param shots: outcomes per estimate M >= 1
    :param repetitions: number of estimates R >= 1
    :param seed: 64-bit seed, drawn from entropy when None
    :param meas_dir: measured collective spin (default z, i.e. number counting)
    :param cores: number of worker processes
    :return: PhaseEstimationResult
    """
    theta_true = float(theta_true)
    if not 0.0 < theta_true < pi / 2:
        raise DomainError(f"theta must lie in (0, π/2), got {theta_true}")
    if int(shots) != shots or shots < 1:
        raise DomainError(f"shots must be a positive integer, got {shots}")
    if int(repetitions) != repetitions or repetitions < 1:
        raise DomainError(f"repetitions must be a positive integer, got {repetitions}")
    seed = draw_seed() if seed is None else int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    shots, repetitions = int(shots), int(repetitions)

    model = PhaseModel(state, rot_dir, meas_dir)
    cdf = np.cumsum(model.probabilities(theta_true))
    cdf /= cdf[-1]
    task = partial(_estimate_once, model, cdf, theta_true, shots, seed)

    tprof = TimeProfile()
    if cores > 1:
        with ProcessPoolExecutor(max_workers=cores) as pool:
            results = list(pool.map(task, range(repetitions), chunksize=16))
    else:
        results = [task(r) for r in range(repetitions)]
    for _, t_sample, t_like in results:
        tprof.tick(t_sample, t_like)
    logger.debug("phase estimation profile:\n%s", tprof)

    estimates = np.array([r[0] for r in results])
    f_q = qfi_spectral(model.state, collective_spin(model.n, model.rot_dir)).value
    # F_cl <= F_Q holds exactly; any excess is finite-difference error.
    f_cl = min(_classical_fisher(model, theta_true), f_q)
    return PhaseEstimationResult(
        theta_true=theta_true,
        estimates=estimates,
        sample_variance=float(np.var(estimates, ddof=1)) if repetitions > 1 else 0.0,
        crb_quantum=1.0 / (shots * f_q) if f_q > 0 else float("inf"),
        crb_classical=1.0 / (shots * f_cl) if f_cl > 0 else float("inf"),
        shots=shots,
        repetitions=repetitions,
        seed=seed,
        fisher_quantum=f_q,
        fisher_classical=f_cl,
        particles=model.n,
    )
