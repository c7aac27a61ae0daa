"""
spinlab: spin squeezing and quantum Fisher information of N identical bosonic qubits

spinlab works in the (N+1)-dimensional sector of two bosonic modes and provides:
- number states, mixtures and collective spin operators,
- the spin-squeezing inequalities and squeezing parameters,
- quantum Fisher information from the symmetric logarithmic derivative,
- Monte Carlo phase estimation compared with the Cramér-Rao bound, and
- brute-force checks on distinguishable qubits.
"""

__version__ = "0.1.0"

from .eigen import Spectrum, hermitian_eig
from .errors import DomainError, NumericError
from .fock import (
    X,
    Y,
    Z,
    CollectiveSpinOp,
    DensityOperator,
    DiagonalMixture,
    Direction,
    OrthogonalTriplet,
    PureState,
    collective_spin,
    energy_bipartition,
    mixture_density,
    mode_rotation,
    number_state,
    separability_label,
    superposition,
)
from .interferometer import (
    PhaseEstimationResult,
    PhaseModel,
    classical_fisher,
    error_propagation,
    mle_estimate,
    outcome_distribution,
    rotate,
)
from .moments import (
    MixtureMoments,
    MomentReport,
    expectation,
    mixture_moments,
    mixture_spin_moments,
    number_state_moments,
    variance,
)
from .qfi import (
    BoundChainReport,
    QfiReport,
    bound_chain_check,
    qfi_diagonal_mixture,
    qfi_gaussian_asymptotics,
    qfi_number_state,
    qfi_spectral,
    sld,
)
from .squeezing import (
    SqueezingReport,
    TothReport,
    flat_peak_state,
    gaussian_state,
    ineq3_delta,
    ineq3_threshold,
    toth_check,
    xi_parameters,
    xi_w_diagonal_real,
)

__all__ = [
    # States and operators
    "Direction",
    "OrthogonalTriplet",
    "PureState",
    "DensityOperator",
    "DiagonalMixture",
    "CollectiveSpinOp",
    "X",
    "Y",
    "Z",
    "number_state",
    "superposition",
    "mixture_density",
    "collective_spin",
    "mode_rotation",
    "energy_bipartition",
    "separability_label",
    # Moments
    "MomentReport",
    "MixtureMoments",
    "expectation",
    "variance",
    "number_state_moments",
    "mixture_moments",
    "mixture_spin_moments",
    # Squeezing
    "TothReport",
    "SqueezingReport",
    "toth_check",
    "ineq3_delta",
    "ineq3_threshold",
    "xi_parameters",
    "gaussian_state",
    "flat_peak_state",
    "xi_w_diagonal_real",
    # Quantum Fisher information
    "Spectrum",
    "hermitian_eig",
    "QfiReport",
    "BoundChainReport",
    "sld",
    "qfi_spectral",
    "qfi_number_state",
    "qfi_diagonal_mixture",
    "qfi_gaussian_asymptotics",
    "bound_chain_check",
    # Phase estimation
    "PhaseModel",
    "PhaseEstimationResult",
    "rotate",
    "error_propagation",
    "outcome_distribution",
    "classical_fisher",
    "mle_estimate",
    # Errors
    "DomainError",
    "NumericError",
]
