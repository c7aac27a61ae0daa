"""
Run-time configuration read from the environment.

SPINLAB_MAX_N   caps the particle number of every constructed state (default 4096).
SPINLAB_CORES   default number of worker processes for scans and repetitions (default 1).
"""

import os

from .errors import DomainError

DEFAULT_MAX_N = 4096
DEFAULT_CORES = 1


def _positive_int_from_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise DomainError(f"{name} must be positive, got {value}")
    return value


def max_particles() -> int:
    """Return the largest particle number n that may be constructed."""
    return _positive_int_from_env("SPINLAB_MAX_N", DEFAULT_MAX_N)


def default_cores() -> int:
    """Return the default number of worker processes."""
    return _positive_int_from_env("SPINLAB_CORES", DEFAULT_CORES)


def check_particles(n) -> int:
    """
    Validate a particle number against the configured cap.
    :param n: particle count
    :return: n as a Python int
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"particle number must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise DomainError(f"particle number must be non-negative, got {n}")
    cap = max_particles()
    if n > cap:
        raise DomainError(f"particle number {n} exceeds SPINLAB_MAX_N={cap}")
    return n
