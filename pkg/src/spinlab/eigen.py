"""
Spectral decomposition of complex Hermitian matrices by the cyclic Jacobi method.

One sweep visits every off-diagonal pair (p, q) once. The pairs are ordered as a
round-robin tournament, so that each round consists of disjoint pairs whose complex
Jacobi rotations commute and are applied to the matrix all at once.
"""

from dataclasses import dataclass
from functools import cache
import logging

import numpy as np

from .errors import DomainError, NumericError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    Eigen-decomposition A = V diag(eigenvalues) V^†, eigenvalues in ascending order.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return V Λ V^†."""
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def function(self, f) -> np.ndarray:
        """
        Return f(A) = V f(Λ) V^† for a scalar function f that acts elementwise.
        """
        V = self.eigenvectors
        return (V * f(self.eigenvalues)) @ V.conj().T


@cache
def __round_robin(m):
    """
    Return the rounds of one cyclic Jacobi sweep on an `m x m` matrix.

    Each round is a pair of index arrays (p, q) with p < q, and no index occurs twice
    within a round. Over all m - 1 rounds (m rounds if m is odd) every pair is visited
    exactly once. This is the circle method for scheduling a round-robin tournament;
    for odd m a dummy player m sits out one pair per round.

    :param m: matrix dimension
    :return: tuple of (p, q) pairs of read-only int arrays.
    """
    players = list(range(m + (m % 2)))
    size, rounds = len(players), []
    for _ in range(size - 1):
        pairs = sorted(
            (min(u, v), max(u, v))
            for u, v in zip(players[: size // 2], reversed(players[size // 2 :]))
            if max(u, v) < m
        )
        if pairs:
            p, q = (np.array(x, dtype=np.intp) for x in zip(*pairs))
            p.setflags(write=False)
            q.setflags(write=False)
            rounds.append((p, q))
        # Keep the first player fixed and rotate the others.
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def off_diagonal_norm(A):
    """
    Return the Frobenius norm of the off-diagonal part of A.
    """
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def rotate_pairs(A, V, p, q):
    """
    Annihilate A[p, q] for all (disjoint) pairs of a round, *in place*.

    For a single pair, with a_pq = |a_pq| e^{iφ}, the unitary U restricted to (p, q) is

        U = diag(1, e^{-iφ}) · [[c, s], [-s, c]],

    where t = s / c = tan(ϑ) is the smaller root of t² + 2τt - 1 = 0 and
    τ = (a_qq - a_pp) / (2 |a_pq|). Then A <- U^† A U and V <- V U.

    :param A: Hermitian matrix that will be modified
    :param V: accumulated eigenvector matrix that will be modified
    :param p: row indices of the round
    :param q: column indices of the round, disjoint from p
    """
    a_pp, a_qq, a_pq = A[p, p].real, A[q, q].real, A[p, q]
    mag = np.abs(a_pq)
    active = mag > 0.0

    safe_mag = np.where(active, mag, 1.0)
    phase = np.where(active, a_pq / safe_mag, 1.0)
    tau = np.where(active, (a_qq - a_pp) / (2.0 * safe_mag), 0.0)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    c = np.where(active, 1.0 / np.sqrt(1.0 + t * t), 1.0)
    s = np.where(active, t * c, 0.0)

    # Entries of U on the (p, q) block.
    u_pp, u_pq = c, s
    u_qp, u_qq = -s * phase.conj(), c * phase.conj()

    # A <- A U, V <- V U (columns).
    for M in (A, V):
        col_p, col_q = M[:, p].copy(), M[:, q].copy()
        M[:, p] = col_p * u_pp + col_q * u_qp
        M[:, q] = col_p * u_pq + col_q * u_qq

    # A <- U^† A (rows).
    row_p, row_q = A[p, :].copy(), A[q, :].copy()
    A[p, :] = row_p * u_pp[:, None] + row_q * u_qp.conj()[:, None]
    A[q, :] = row_p * u_pq[:, None] + row_q * u_qq.conj()[:, None]

    # Exact zeros and real diagonal, as guaranteed in exact arithmetic.
    A[p, q] = A[q, p] = 0.0
    A[p, p] = A[p, p].real
    A[q, q] = A[q, q].real


def jacobi_eig(matrix, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """
    Diagonalize a Hermitian matrix with cyclic Jacobi sweeps.

    Convergence is declared when the off-diagonal Frobenius norm drops below
    `tol · ||A||_F`.

    :param matrix: complex Hermitian matrix
    :param tol: relative tolerance on the off-diagonal norm
    :param max_sweeps: maximum number of sweeps
    :return: Spectrum
    :raises NumericError: when not converged after `max_sweeps` sweeps.
    """
    A = _checked_hermitian(matrix).copy()
    m = len(A)
    V = np.identity(m, dtype=np.complex128)
    target = tol * float(np.linalg.norm(A))
    rounds = __round_robin(m)

    sweeps, off = 0, off_diagonal_norm(A)
    while off > target:
        if sweeps == max_sweeps:
            raise NumericError(
                f"Jacobi eigensolver did not converge after {sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, target {target:.3e})",
                residual=off,
                sweeps=sweeps,
            )
        for p, q in rounds:
            rotate_pairs(A, V, p, q)
        sweeps += 1
        off = off_diagonal_norm(A)

    logger.debug("Jacobi: m=%d, sweeps=%d, off-diagonal norm=%.3e", m, sweeps, off)
    eigenvalues = A.diagonal().real
    order = np.argsort(eigenvalues, kind="stable")
    return Spectrum(eigenvalues[order].copy(), V[:, order].copy())


def hermitian_eig(matrix, method="jacobi"):
    """
    Return the spectrum of a Hermitian matrix.

    :param matrix: complex Hermitian matrix (Hermitian within 1e-10)
    :param method: "jacobi" (default) or "lapack", which calls `numpy.linalg.eigh`.
    :return: Spectrum with ascending eigenvalues.
    """
    if method == "jacobi":
        return jacobi_eig(matrix)
    if method == "lapack":
        w, V = np.linalg.eigh(_checked_hermitian(matrix))
        return Spectrum(w, V)
    raise DomainError(f"unknown eigensolver method {method!r}")


def _checked_hermitian(matrix):
    A = np.asarray(matrix, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    deviation = float(np.max(np.abs(A - A.conj().T), initial=0.0))
    if deviation > HERMITIAN_TOL:
        raise DomainError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    return (A + A.conj().T) / 2
