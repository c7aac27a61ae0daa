"""
Brute-force checks on n distinguishable qubits in the full 2^n-dimensional tensor
product.

Single-qubit operators are the n = 1 collective spins of `spinlab.fock`, so basis
index 1 of a qubit is a particle in mode a. The symmetric (Dicke) subspace with k
qubits in state 1 is then the first-quantization image of the number state |k⟩.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
import logging
from math import comb, sqrt

import numpy as np

from .eigen import hermitian_eig
from .errors import DomainError
from .fock import (
    DensityOperator,
    Direction,
    OrthogonalTriplet,
    as_direction,
    collective_spin,
    number_state,
    spin_matrix,
)
from .moments import spin_moments
from .squeezing import TothReport, toth_residuals

logger = logging.getLogger(__name__)

MAX_QUBITS = 8
MAX_DICKE_QUBITS = 6
UNIT_TOL = 1e-12
VARIANCE_TOL = 1e-10
DETERMINANT_TOL = 1e-12
DICKE_TOL = 1e-10
TOTH_TRIALS = 200


def _check_qubits(n, cap=MAX_QUBITS):
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= cap:
        raise DomainError(f"brute force supports 1..{cap} qubits, got {n!r}")
    return int(n)


def qubit_state(bloch) -> np.ndarray:
    """Pure single-qubit state with Bloch vector `bloch`."""
    return hermitian_eig(spin_matrix(1, bloch)).eigenvectors[:, -1]


@dataclass(frozen=True, eq=False)
class ProductState:
    """
    Product ⊗_j |ψ_j⟩ of pure qubit states, given by their Bloch vectors.
    """

    n: int
    bloch_vectors: np.ndarray

    def __post_init__(self):
        n = _check_qubits(self.n)
        b = np.array(self.bloch_vectors, dtype=np.float64)
        if b.shape != (n, 3):
            raise DomainError(f"expected {n} Bloch vectors, got shape {b.shape}")
        if np.max(np.abs(np.sum(b**2, axis=1) - 1.0)) > UNIT_TOL:
            raise DomainError("Bloch vectors of pure states must be unit vectors")
        b.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bloch_vectors", b)

    def vector(self) -> np.ndarray:
        return reduce(np.kron, (qubit_state(b) for b in self.bloch_vectors))


def random_product_state(n, rng) -> ProductState:
    """Product state with Bloch vectors uniform on the sphere."""
    b = rng.standard_normal((n, 3))
    return ProductState(n, b / np.linalg.norm(b, axis=1, keepdims=True))


def tensor_spin(n, direction) -> np.ndarray:
    """
    Return J_n = Σ_j j_n^(j) on n qubits, j_n^(j) acting on qubit j only.
    """
    n, direction = _check_qubits(n), as_direction(direction)
    j = spin_matrix(1, direction.vector)
    eye = np.identity(2)
    return sum(
        reduce(np.kron, [j if i == pos else eye for i in range(n)]) for pos in range(n)
    )


def product_variance(ps: ProductState, direction) -> float:
    """
    Brute-force Δ²J_n of a product state; it equals n/4 - Σ_j ⟨j_n^(j)⟩² <= n/4.
    """
    return spin_moments(ps.vector(), tensor_spin(ps.n, direction)).variance


def antisymmetric_overlap(rho_single) -> float:
    """
    Return ⟨Ψ_-| ρ ⊗ ρ |Ψ_-⟩ with |Ψ_-⟩ = (|01⟩ - |10⟩)/sqrt(2); it equals det(ρ).
    """
    try:
        rho = DensityOperator(1, rho_single).matrix
    except DomainError as e:
        raise DomainError(f"invalid single-qubit density matrix: {e}") from e
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / sqrt(2)
    return float(np.vdot(psi, np.kron(rho, rho) @ psi).real)


def dicke_state(n, k) -> np.ndarray:
    """Symmetric n-qubit state with k qubits in state 1, normalized."""
    n = _check_qubits(n)
    if not 0 <= k <= n:
        raise DomainError(f"excitation number k={k} outside 0..{n}")
    psi = np.zeros(2**n)
    for ones in combinations(range(n), k):
        psi[sum(1 << (n - 1 - i) for i in ones)] = 1.0
    return psi / sqrt(comb(n, k))


@dataclass(frozen=True)
class DickeReport:
    mean: float
    variance: float
    fock_mean: float
    fock_variance: float
    max_error: float
    passed: bool


def dicke_embedding_check(n, k, direction) -> DickeReport:
    """
    Compare ⟨J_n⟩ and Δ²J_n of the Dicke state with those of |k⟩ in the n-boson sector.
    """
    n = _check_qubits(n, MAX_DICKE_QUBITS)
    brute = spin_moments(dicke_state(n, k), tensor_spin(n, direction))
    fock = spin_moments(number_state(n, k), collective_spin(n, direction))
    error = max(abs(brute.mean - fock.mean), abs(brute.variance - fock.variance))
    return DickeReport(
        brute.mean, brute.variance, fock.mean, fock.variance, error, error <= DICKE_TOL
    )


def distinguishable_toth(n, components, triplet, rng) -> TothReport:
    """
    Evaluate the four spin-squeezing inequalities on a random mixture of `components`
    random product states of n distinguishable qubits (a separable state).
    """
    weights = rng.standard_exponential(components)
    weights /= weights.sum()
    rho = sum(
        w * np.outer(v, v.conj())
        for w, v in zip(
            weights, (random_product_state(n, rng).vector() for _ in range(components))
        )
    )
    reports = [spin_moments(rho, tensor_spin(n, d)) for d in triplet.directions]
    return toth_residuals(
        n, [r.second_moment for r in reports], [r.variance for r in reports]
    )


@dataclass(frozen=True)
class OracleSummary:
    n: int
    trials: int
    seed: int
    max_variance_excess: float
    max_determinant_error: float
    max_dicke_error: float
    toth_satisfied: bool
    passed: bool


def run_suite(n, trials, seed) -> OracleSummary:
    """
    Run all brute-force checks on n qubits with a seeded generator.

    :param n: number of qubits, at most 8 (Dicke checks use min(n, 6))
    :param trials: random product states, density matrices and Tóth mixtures to test
    :param seed: seed of the generator
    """
    n = _check_qubits(n)
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)

    excess = max(
        product_variance(random_product_state(n, rng), Direction.random(rng)) - n / 4
        for _ in range(trials)
    )

    det_error = 0.0
    for _ in range(trials):
        rho = DensityOperator.random(1, rng).matrix
        error = abs(antisymmetric_overlap(rho) - np.linalg.det(rho).real)
        det_error = max(det_error, error)

    m = min(n, MAX_DICKE_QUBITS)
    dicke_error = max(
        dicke_embedding_check(m, k, Direction.random(rng)).max_error
        for k in range(m + 1)
        for _ in range(4)
    )

    toth_ok = all(
        distinguishable_toth(
            n, int(rng.integers(1, 5)), OrthogonalTriplet.random(rng), rng
        ).all_satisfied
        for _ in range(min(trials, TOTH_TRIALS))
    )

    logger.debug(
        "oracle n=%d: variance excess %.3e, det error %.3e, dicke error %.3e",
        n,
        excess,
        det_error,
        dicke_error,
    )
    passed = (
        excess <= VARIANCE_TOL
        and det_error <= DETERMINANT_TOL
        and dicke_error <= DICKE_TOL
        and toth_ok
    )
    return OracleSummary(
        n, trials, seed, excess, det_error, dicke_error, toth_ok, passed
    )
