"""Exact symbolic canonical algebra: Poisson brackets, Weyl-algebra
commutators with normal ordering, Weyl symmetrization, and Gaussian-state
(Wick) expectations."""

from .coeff import Coefficient, HBAR, I, I_HBAR, ONE, ZERO
from .classical import CanonicalPolynomial, poisson_bracket
from .operators import (
    DIMENSIONLESS,
    PHYSICAL,
    OperatorPolynomial,
    WeylAlgebra,
    commutator,
    normal_order,
    weyl_symmetrize,
)
from .builders import (
    angular_momentum,
    angular_momentum_op,
    angular_momentum_squared,
    angular_momentum_squared_op,
    hamiltonian,
    hamiltonian_ladder_basis,
    hamiltonian_op,
    ladder,
    momentum,
    momentum_op,
    number_op,
    position,
    position_op,
)
from .wick import (
    MAX_WORD_LENGTH,
    gaussian_expectation_classical,
    gaussian_expectation_quantum,
)

__all__ = [
    "Coefficient", "HBAR", "I", "I_HBAR", "ONE", "ZERO",
    "CanonicalPolynomial", "poisson_bracket",
    "OperatorPolynomial", "WeylAlgebra", "PHYSICAL", "DIMENSIONLESS",
    "commutator", "normal_order", "weyl_symmetrize",
    "position", "momentum", "angular_momentum", "angular_momentum_squared",
    "hamiltonian",
    "position_op", "momentum_op", "angular_momentum_op",
    "angular_momentum_squared_op", "hamiltonian_op",
    "ladder", "number_op", "hamiltonian_ladder_basis",
    "gaussian_expectation_quantum", "gaussian_expectation_classical",
    "MAX_WORD_LENGTH",
]
