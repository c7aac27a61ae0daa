#!/usr/bin/python3
"""
Compare the Jacobi eigensolver with LAPACK on collective spins and random mixed states.
Prints CSV to stdout.
"""
from time import perf_counter_ns

import numpy as np

from spinlab.eigen import hermitian_eig
from spinlab.fock import DensityOperator, Direction, collective_spin

SIZES = [2, 4, 8, 16, 32, 64, 128]
NUM_TRIALS = 5


def time_ns(matrix, method):
    t0 = perf_counter_ns()
    spec = hermitian_eig(matrix, method=method)
    return perf_counter_ns() - t0, spec


def compare(matrix):
    t_jacobi, jacobi = time_ns(matrix, "jacobi")
    t_lapack, lapack = time_ns(matrix, "lapack")
    error = float(np.max(np.abs(jacobi.eigenvalues - lapack.eigenvalues)))
    return t_jacobi, t_lapack, error


def __main__():
    rng = np.random.default_rng(0)
    # Print CSV header
    print("kind,n,trial,jacobi_ms,lapack_ms,max_eigenvalue_error", flush=True)
    for n in SIZES:
        for trial in range(NUM_TRIALS):
            cases = {
                "spin": collective_spin(n, Direction.random(rng)).matrix,
                "mixed": DensityOperator.random(n, rng).matrix,
            }
            for kind, matrix in cases.items():
                t_jacobi, t_lapack, error = compare(matrix)
                print(
                    f"{kind},{n:3d},{trial:1d},"
                    f"{t_jacobi / 1e6:9.3f},{t_lapack / 1e6:9.3f},{error:.2e}",
                    flush=True,
                )


if __name__ == "__main__":
    __main__()
