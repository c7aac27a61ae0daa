"""
Exceptions raised by spinlab.
"""


class DomainError(ValueError):
    """
    An input violates a precondition or a type invariant.
    """


class NumericError(RuntimeError):
    """
    A numerical procedure failed, e.g. the eigensolver did not converge.

    :param residual: the quantity that failed its tolerance, when there is one.
    :param sweeps: number of iterations performed before giving up.
    """

    def __init__(self, message: str, residual: float | None = None, sweeps: int = 0):
        super().__init__(message)
        self.residual = residual
        self.sweeps = sweeps
