"""Gaussian-state expectation values of canonical polynomials.

The thermal state of the oscillator is Gaussian in every canonical variable,
so expectations of polynomials reduce to sums over complete pairings of
two-point functions (Wick's theorem).  The nonzero two-point functions are
diagonal in the axis and, in natural order (x before p, as stored by the
normal form),

    <x x> = Var(x)       <p p> = Var(p)
    <x p> = +i hbar / 2  <p x> = -i hbar / 2      (quantum)
    <x p> = <p x> = 0                             (classical)

with Var(x) = [hbar/(2 m omega0)] coth and Var(p) = [hbar m omega0/2] coth.
Wick pairing preserves the operator order inside each pair, which is what
makes <x^2 p^2> = -<x^2><p^2> on the quantum side while the classical value
is +<x^2><p^2>.

Because a normal-ordered monomial keeps all x factors before all p factors
on each axis, only the <x p> function ever appears, and the pairing sum per
axis has the closed form used below (k cross pairs, the rest matched within
the x block and within the p block).
"""

from __future__ import annotations

import math

from ..errors import CapacityError
from ..model import OscillatorParams, ThermalState
from ..oracles import classical_variance_p, classical_variance_x, double_factorial
from .classical import CanonicalPolynomial, NAXES
from .operators import PHYSICAL, OperatorPolynomial

#: Longest operator word evaluated; the pairing count grows as (n-1)!!.
MAX_WORD_LENGTH = 20


def _ordered_pair_sum(
    a: int, b: int, var_x: float, var_p: float, cross: complex
) -> complex:
    """Sum over complete pairings of the ordered word x^a p^b.

    Each pairing has k x-p cross pairs (every x precedes every p, so each
    contributes `cross`), (a-k)/2 x-x pairs and (b-k)/2 p-p pairs:

        sum_k C(a,k) C(b,k) k! (a-k-1)!! (b-k-1)!!
              * var_x^((a-k)/2) var_p^((b-k)/2) cross^k
    """
    total: complex = 0.0
    for k in range(min(a, b) + 1):
        if (a - k) % 2 or (b - k) % 2:
            continue
        count = (
            math.comb(a, k)
            * math.comb(b, k)
            * math.factorial(k)
            * double_factorial(a - k - 1)
            * double_factorial(b - k - 1)
        )
        total += (
            count
            * var_x ** ((a - k) // 2)
            * var_p ** ((b - k) // 2)
            * cross**k
        )
    return total


def _expectation(
    terms,
    hbar: float,
    var_x: float,
    var_p: float,
    cross: complex,
) -> complex:
    out: complex = 0.0
    for key, coeff in terms:
        if sum(key) > MAX_WORD_LENGTH:
            raise CapacityError(
                f"word length {sum(key)} exceeds {MAX_WORD_LENGTH}; "
                "the pairing count would be astronomical"
            )
        value: complex = 1.0
        for axis in range(NAXES):
            a, b = key[2 * axis], key[2 * axis + 1]
            if a or b:
                value *= _ordered_pair_sum(a, b, var_x, var_p, cross)
                if value == 0.0:
                    break
        out += coeff.evaluate(hbar) * value
    return out


def gaussian_expectation_quantum(
    op: OperatorPolynomial, params: OscillatorParams, state: ThermalState
) -> complex:
    """Thermal expectation of a (normal-ordered) operator polynomial.

    Only the physical algebra has a thermal state attached; operators built
    in the dimensionless ladder basis must be converted first.
    """
    if op.algebra is not PHYSICAL:
        raise ValueError(
            f"expectations are defined for the physical algebra, got "
            f"{op.algebra.name!r}"
        )
    cross = 0.5j * params.hbar
    return _expectation(
        op.terms(),
        params.hbar,
        classical_variance_x(params, state),
        classical_variance_p(params, state),
        cross,
    )


def gaussian_expectation_classical(
    poly: CanonicalPolynomial, params: OscillatorParams, state: ThermalState
) -> float:
    """Phase-space average of a classical polynomial over the thermal Gaussian."""
    value = _expectation(
        poly.terms(),
        params.hbar,
        classical_variance_x(params, state),
        classical_variance_p(params, state),
        0.0,
    )
    return value.real
