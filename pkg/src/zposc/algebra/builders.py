"""Canonical constructions in both algebras.

Classical builders return CanonicalPolynomial; operator builders return
OperatorPolynomial in the physical algebra ([x, p] = i hbar).

Ladder operators need the irrational scales sqrt(m*omega0/2/hbar); they are
therefore built in a rescaled dimensionless basis

    xt = x * sqrt(m*omega0 / (2 hbar)),   pt = p / sqrt(2 m omega0 hbar),

in which every coefficient is an exact Gaussian rational and the fundamental
commutator is [xt, pt] = i/2.  In that basis the lowering/raising operators
are simply xt +/- i*pt, the Hamiltonian is hbar*omega0*(xt^2 + pt^2), and
the number-operator identity H = hbar*omega0*(n + 1/2) is an exact
polynomial statement.  Only these builders know the scaling.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .coeff import Coefficient, I, Rational
from .classical import CanonicalPolynomial
from .operators import DIMENSIONLESS, PHYSICAL, OperatorPolynomial, WeylAlgebra

# cyclic axis triples (i, j, k) with epsilon_ijk = +1
_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def _fraction(value: Union[Rational, float]) -> Fraction:
    # floats are taken at their exact binary value; pass Fraction for decimals
    return Fraction(value)


# -- classical phase-space functions ----------------------------------------


def position(axis: int) -> CanonicalPolynomial:
    return CanonicalPolynomial.variable("x", axis)


def momentum(axis: int) -> CanonicalPolynomial:
    return CanonicalPolynomial.variable("p", axis)


def angular_momentum(axis: int) -> CanonicalPolynomial:
    """L_i = x_j p_k - x_k p_j over the cyclic triple (i, j, k)."""
    j, k = _CYCLIC[axis]
    return position(j) * momentum(k) - position(k) * momentum(j)


def angular_momentum_squared() -> CanonicalPolynomial:
    out = CanonicalPolynomial.zero()
    for axis in (1, 2, 3):
        li = angular_momentum(axis)
        out = out + li * li
    return out


def hamiltonian(
    dims: int = 1,
    m: Union[Rational, float] = 1,
    omega0: Union[Rational, float] = 1,
) -> CanonicalPolynomial:
    """Oscillator Hamiltonian sum_i (p_i^2/2m + m omega0^2 x_i^2 / 2)."""
    if dims not in (1, 3):
        raise ValueError(f"dims must be 1 or 3, got {dims}")
    mf = _fraction(m)
    wf = _fraction(omega0)
    kin = Coefficient.make(Fraction(1, 2) / mf)
    pot = Coefficient.make(Fraction(1, 2) * mf * wf * wf)
    out = CanonicalPolynomial.zero()
    for axis in range(1, dims + 1):
        out = out + momentum(axis) * momentum(axis) * kin
        out = out + position(axis) * position(axis) * pot
    return out


# -- physical operators ------------------------------------------------------


def position_op(axis: int) -> OperatorPolynomial:
    return OperatorPolynomial.generator("x", axis, PHYSICAL)


def momentum_op(axis: int) -> OperatorPolynomial:
    return OperatorPolynomial.generator("p", axis, PHYSICAL)


def angular_momentum_op(axis: int) -> OperatorPolynomial:
    j, k = _CYCLIC[axis]
    return position_op(j) * momentum_op(k) - position_op(k) * momentum_op(j)


def angular_momentum_squared_op() -> OperatorPolynomial:
    out = OperatorPolynomial.zero(PHYSICAL)
    for axis in (1, 2, 3):
        li = angular_momentum_op(axis)
        out = out + li * li
    return out


def hamiltonian_op(
    dims: int = 1,
    m: Union[Rational, float] = 1,
    omega0: Union[Rational, float] = 1,
) -> OperatorPolynomial:
    """Operator Hamiltonian with the same coefficients as the classical one."""
    if dims not in (1, 3):
        raise ValueError(f"dims must be 1 or 3, got {dims}")
    mf = _fraction(m)
    wf = _fraction(omega0)
    kin = Coefficient.make(Fraction(1, 2) / mf)
    pot = Coefficient.make(Fraction(1, 2) * mf * wf * wf)
    out = OperatorPolynomial.zero(PHYSICAL)
    for axis in range(1, dims + 1):
        out = out + momentum_op(axis) * momentum_op(axis) * kin
        out = out + position_op(axis) * position_op(axis) * pot
    return out


# -- ladder operators (dimensionless basis) -----------------------------------


def ladder(kind: str, axis: int = 1) -> OperatorPolynomial:
    """Lowering ('lower') or raising ('raise') operator, dimensionless basis.

    With xt, pt as in the module docstring, lower = xt + i pt and
    raise = xt - i pt; their commutator is exactly 1.
    """
    x = OperatorPolynomial.generator("x", axis, DIMENSIONLESS)
    p = OperatorPolynomial.generator("p", axis, DIMENSIONLESS)
    if kind == "lower":
        return x + p * I
    if kind == "raise":
        return x - p * I
    raise ValueError(f"kind must be 'lower' or 'raise', got {kind!r}")


def number_op(axis: int = 1) -> OperatorPolynomial:
    """n = raise * lower, in the dimensionless basis."""
    return ladder("raise", axis) * ladder("lower", axis)


def hamiltonian_ladder_basis(
    omega0: Union[Rational, float] = 1, axis: int = 1
) -> OperatorPolynomial:
    """The 1-D Hamiltonian expressed in the dimensionless basis.

    Substituting x = xt sqrt(2 hbar / m omega0), p = pt sqrt(2 m omega0 hbar)
    into p^2/2m + m omega0^2 x^2/2 gives hbar*omega0*(xt^2 + pt^2) exactly;
    m cancels.
    """
    wf = _fraction(omega0)
    x = OperatorPolynomial.generator("x", axis, DIMENSIONLESS)
    p = OperatorPolynomial.generator("p", axis, DIMENSIONLESS)
    scale = Coefficient.make(wf, hbar_power=1)
    return (x * x + p * p) * scale


def ladder_algebra() -> WeylAlgebra:
    return DIMENSIONLESS
