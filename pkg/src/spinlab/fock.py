"""
The N-boson sector of two bosonic modes a and b.

Basis vectors |k⟩, k = 0, ..., n, hold k particles in mode a and n - k in mode b. The
collective spin operators are built from the ladder elements

    ⟨k+1| a^† b |k⟩ = sqrt((k + 1)(n - k)),

with J_z = (a^† a - b^† b) / 2 diagonal, J_x = (J_+ + J_-) / 2 and
J_y = (J_+ - J_-) / (2i). All values are immutable after construction.
"""

from dataclasses import dataclass, field
from functools import cache, lru_cache
from math import cos, sin, sqrt

import numpy as np

from .config import check_particles
from .eigen import Spectrum, hermitian_eig
from .errors import DomainError

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
HERMITIAN_TOL = 1e-12
POSITIVITY_TOL = -1e-10

SEPARABLE = "(A,B)-separable"
ENTANGLED = "(A,B)-entangled"


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Direction:
    """
    Unit vector n = (nx, ny, nz) in physical space.
    """

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm2 = self.nx**2 + self.ny**2 + self.nz**2
        if not abs(norm2 - 1.0) <= NORM_TOL:
            raise DomainError(
                f"direction ({self.nx}, {self.ny}, {self.nz}) is not a unit vector "
                f"(squared norm {norm2!r})"
            )

    @classmethod
    def from_vector(cls, vector, normalize=False):
        """
        Create a direction from three components.
        :param vector: sequence of three reals
        :param normalize: divide by the Euclidean norm first
        """
        v = np.asarray(vector, dtype=np.float64)
        if v.shape != (3,):
            raise DomainError(f"a direction has three components, got shape {v.shape}")
        if normalize:
            norm = float(np.linalg.norm(v))
            if norm == 0.0:
                raise DomainError("cannot normalize the zero vector")
            v = v / norm
        return cls(*v)

    @classmethod
    def random(cls, rng):
        """Uniformly random direction on the unit sphere."""
        return cls.from_vector(rng.standard_normal(3), normalize=True)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def dot(self, other) -> float:
        return self.nx * other.nx + self.ny * other.ny + self.nz * other.nz

    def rotated(self, axis, angle):
        """
        Rotate this direction right-handedly about `axis` by `angle` (Rodrigues).
        """
        k, v = axis.vector, self.vector
        r = v * cos(angle) + np.cross(k, v) * sin(angle)
        r += k * k.dot(v) * (1 - cos(angle))
        return Direction.from_vector(r, normalize=True)


X = Direction(1.0, 0.0, 0.0)
Y = Direction(0.0, 1.0, 0.0)
Z = Direction(0.0, 0.0, 1.0)
AXES = {"x": X, "y": Y, "z": Z}


def as_direction(value) -> Direction:
    """Accept a Direction or three unit-norm components."""
    if isinstance(value, Direction):
        return value
    return Direction.from_vector(value)


@dataclass(frozen=True)
class OrthogonalTriplet:
    """
    Three pairwise orthogonal directions (n1, n2, n3).
    """

    n1: Direction
    n2: Direction
    n3: Direction

    def __post_init__(self):
        d = self.directions
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if abs(d[i].dot(d[j])) > ORTHO_TOL:
                raise DomainError(f"triplet directions n{i + 1}, n{j + 1} are not orthogonal")
        zsum = sum(u.nz**2 for u in d)
        if abs(zsum - 1.0) > ORTHO_TOL:
            raise DomainError(f"n1z² + n2z² + n3z² = {zsum!r} differs from 1")

    @property
    def directions(self):
        return (self.n1, self.n2, self.n3)

    @classmethod
    def standard(cls):
        """The frame (x, y, z)."""
        return cls(X, Y, Z)

    @classmethod
    def cyclic(cls, axis):
        """
        Right-handed frame of coordinate axes with n3 on `axis` ("x", "y" or "z").
        """
        order = "xyz"
        i = order.index(axis)
        return cls(*(AXES[order[(i + j) % 3]] for j in (1, 2, 3)))

    @classmethod
    def with_n3z(cls, n3z_squared):
        """
        Right-handed frame with n2 = y and n3 = (sqrt(1 - z), 0, sqrt(z)), z = n3z².
        """
        z = float(n3z_squared)
        if not 0.0 <= z <= 1.0:
            raise DomainError(f"n3z² must lie in [0, 1], got {z}")
        n3 = Direction(sqrt(1.0 - z), 0.0, sqrt(z))
        n1 = Direction(sqrt(z), 0.0, -sqrt(1.0 - z))
        return cls(n1, Y, n3)

    @classmethod
    def random(cls, rng):
        """Haar-random right-handed frame."""
        Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
        Q = Q * np.sign(np.diag(R))
        if np.linalg.det(Q) < 0:
            Q[:, 2] = -Q[:, 2]
        return cls(*(Direction.from_vector(Q[:, j], normalize=True) for j in range(3)))


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Normalized state Σ_k c_k |k⟩ of the n-particle sector.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        n = check_particles(self.n)
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (n + 1,):
            raise DomainError(f"expected {n + 1} amplitudes for n={n}, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"amplitudes are not normalized (Σ|c_k|² = {norm2!r})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def density(self):
        return DensityOperator(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))

    @classmethod
    def random(cls, n, rng):
        """Haar-random pure state."""
        v = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        return superposition(n, v)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """
    Hermitian, positive semidefinite, unit-trace (n+1) x (n+1) matrix.
    """

    n: int
    matrix: np.ndarray

    def __post_init__(self):
        n = check_particles(self.n)
        rho = np.array(self.matrix, dtype=np.complex128)
        if rho.shape != (n + 1, n + 1):
            raise DomainError(f"expected a {n + 1}x{n + 1} matrix, got shape {rho.shape}")
        deviation = float(np.max(np.abs(rho - rho.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise DomainError(f"density matrix is not Hermitian (deviation {deviation:.3e})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > NORM_TOL:
            raise DomainError(f"density matrix has trace {trace!r}")
        lowest = float(np.linalg.eigvalsh(rho)[0])
        if lowest < POSITIVITY_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "matrix", _frozen(rho))

    @property
    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real

    @classmethod
    def random(cls, n, rng, rank=None):
        """
        Random mixed state G G^† / tr(G G^†) with G an (n+1) x rank Ginibre matrix.
        """
        rank = n + 1 if rank is None else rank
        G = rng.standard_normal((n + 1, rank)) + 1j * rng.standard_normal((n + 1, rank))
        rho = G @ G.conj().T
        rho = (rho + rho.conj().T) / 2
        return cls(n, rho / np.trace(rho).real)


@dataclass(frozen=True, eq=False)
class DiagonalMixture:
    """
    Probability vector (p_0, ..., p_n) of the state Σ_k p_k |k⟩⟨k|.
    """

    n: int
    probs: np.ndarray

    def __post_init__(self):
        n = check_particles(self.n)
        p = np.array(self.probs, dtype=np.float64)
        if p.shape != (n + 1,):
            raise DomainError(f"expected {n + 1} probabilities for n={n}, got shape {p.shape}")
        if np.any(p < 0.0):
            raise DomainError("probabilities must be non-negative")
        total = float(p.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise DomainError(f"probabilities sum to {total!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", _frozen(p))

    @classmethod
    def uniform(cls, n):
        return cls(n, np.full(n + 1, 1.0 / (n + 1)))

    @classmethod
    def point(cls, n, k):
        """The projector |k⟩⟨k| as a mixture."""
        return cls(n, number_state(n, k).probabilities)

    @classmethod
    def random(cls, n, rng):
        """Symmetric Dirichlet(1) sample, via normalized exponentials."""
        e = rng.standard_exponential(n + 1)
        return cls(n, e / e.sum())


@dataclass(frozen=True, eq=False)
class CollectiveSpinOp:
    """
    Matrix of J_n = nx Jx + ny Jy + nz Jz on the n-particle sector.
    """

    n: int
    matrix: np.ndarray = field(repr=False)
    direction: Direction

    def __post_init__(self):
        if self.matrix.shape != (self.n + 1, self.n + 1):
            raise DomainError(f"operator shape {self.matrix.shape} does not match n={self.n}")
        deviation = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if deviation > HERMITIAN_TOL:
            raise DomainError(f"collective spin is not Hermitian (deviation {deviation:.3e})")

    def spectrum(self) -> Spectrum:
        return generator_spectrum(self.n, self.direction)


@cache
def ladder_elements(n):
    """
    Return the read-only vector of ⟨k+1| a^† b |k⟩ = sqrt((k+1)(n-k)), k = 0..n-1.
    """
    k = np.arange(n, dtype=np.float64)
    return _frozen(np.sqrt((k + 1) * (n - k)))


def spin_matrix(n, vector):
    """
    Raw builder of vx Jx + vy Jy + vz Jz for any real 3-vector v (not necessarily unit).
    """
    vx, vy, vz = (float(c) for c in vector)
    k = np.arange(n + 1, dtype=np.float64)
    half = ladder_elements(n) / 2
    M = np.diag(vz * (2 * k - n) / 2).astype(np.complex128)
    M += np.diag((vx - 1j * vy) * half, -1)
    M += np.diag((vx + 1j * vy) * half, 1)
    return M


@lru_cache(maxsize=16)
def spin_components(n):
    """
    Return the read-only matrices (Jx, Jy, Jz) of the n-particle sector.
    """
    n = check_particles(n)
    return tuple(_frozen(spin_matrix(n, d.vector)) for d in (X, Y, Z))


def collective_spin(n, direction) -> CollectiveSpinOp:
    """
    Return the collective spin J_n along a unit direction.
    :param n: particle count
    :param direction: Direction or three unit-norm components
    """
    n, direction = check_particles(n), as_direction(direction)
    return CollectiveSpinOp(n, _frozen(spin_matrix(n, direction.vector)), direction)


@lru_cache(maxsize=64)
def generator_spectrum(n, direction) -> Spectrum:
    """Cached Jacobi spectrum of J_n, used by every rotation about `direction`."""
    return hermitian_eig(spin_matrix(n, direction.vector))


def number_state(n, k) -> PureState:
    n = check_particles(n)
    if isinstance(k, bool) or int(k) != k or not 0 <= k <= n:
        raise DomainError(f"occupation k={k!r} outside 0..{n}")
    amps = np.zeros(n + 1, dtype=np.complex128)
    amps[int(k)] = 1.0
    return PureState(n, amps)


def superposition(n, amplitudes) -> PureState:
    """
    Return the normalized state with the given (unnormalized) amplitudes.
    """
    n = check_particles(n)
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.shape != (n + 1,):
        raise DomainError(f"expected {n + 1} amplitudes for n={n}, got shape {amps.shape}")
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise DomainError("cannot normalize the zero vector")
    return PureState(n, amps / norm)


def mixture_density(mix: DiagonalMixture) -> DensityOperator:
    return DensityOperator(mix.n, np.diag(mix.probs))


def mode_rotation(n, direction, angle) -> np.ndarray:
    """
    Return exp(-i angle J_n), computed from the eigendecomposition of J_n.

    Conjugation U J_v U^† equals J_{Rv}, with R the right-handed rotation about the
    same direction by the same angle. In particular for the y axis,
    U Jz U^† = cos(angle) Jz + sin(angle) Jx.
    """
    n, direction = check_particles(n), as_direction(direction)
    return generator_spectrum(n, direction).function(lambda w: np.exp(-1j * angle * w))


def energy_bipartition(op: CollectiveSpinOp) -> CollectiveSpinOp:
    """
    Express a collective spin in the modes c, d of the energy bipartition.

    The Bogolubov change (a, b) -> (c, d) is conjugation by the rotation about y by
    π/2, so that Jz becomes Jx.
    """
    U = mode_rotation(op.n, Y, np.pi / 2)
    M = U @ op.matrix @ U.conj().T
    M = _frozen((M + M.conj().T) / 2)
    return CollectiveSpinOp(op.n, M, op.direction.rotated(Y, np.pi / 2))


def as_density(state) -> DensityOperator:
    """
    Return the density operator of a PureState, DiagonalMixture or DensityOperator.
    """
    if isinstance(state, DensityOperator):
        return state
    if isinstance(state, PureState):
        return state.density()
    if isinstance(state, DiagonalMixture):
        return mixture_density(state)
    raise DomainError(f"not a state: {type(state).__name__}")


def separability_label(state) -> str:
    """
    Classify a state in the spatial-mode bipartition (a, b).

    States diagonal in the number basis are convex combinations of projectors |k⟩⟨k|
    and therefore separable; all other states are entangled.
    """
    if isinstance(state, DiagonalMixture):
        return SEPARABLE
    rho = as_density(state).matrix
    off = rho - np.diag(rho.diagonal())
    return SEPARABLE if float(np.max(np.abs(off))) <= NORM_TOL else ENTANGLED
