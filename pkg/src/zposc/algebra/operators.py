"""Noncommuting operator polynomials in normal-ordered form.

Words in the position and momentum operators are reduced, exactly, to the
normal form in which every x-hat factor precedes every p-hat factor on its
axis (axes ordered 1, 2, 3; operators on different axes commute).  A stored
monomial key (a1, b1, a2, b2, a3, b3) therefore denotes the operator
x1^a1 p1^b1 x2^a2 p2^b2 x3^a3 p3^b3 in exactly that factor order, and
equality of operators is equality of normal forms.

The single reduction rule is the fundamental exchange

    p^b x^c = sum_j C(b,j) C(c,j) j! (-c0)^j x^(c-j) p^(b-j)

on one axis, where c0 = [x, p] is the algebra's central commutator value
(i*hbar for the physical operators; i/2 for the dimensionless ladder basis,
see builders).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from ..errors import CapacityError
from .coeff import Coefficient, I_HBAR, Rational
from .classical import (
    DEFAULT_MAX_DEGREE,
    NAXES,
    NVARS,
    VAR_NAMES,
    CanonicalPolynomial,
    var_index,
)

_ZERO_KEY = (0,) * NVARS

#: Operator names in rendering: xh1 = x-hat on axis 1, etc.
OP_NAMES = tuple(name[0] + "h" + name[1] for name in VAR_NAMES)


class WeylAlgebra:
    """An associative word algebra with [x_i, p_j] = value * delta_ij."""

    __slots__ = ("commutator_value", "name")

    def __init__(self, commutator_value: Coefficient, name: str):
        self.commutator_value = commutator_value
        self.name = name

    def __repr__(self) -> str:
        return f"WeylAlgebra({self.name}, [x,p]={self.commutator_value.render()})"


#: Physical operators: [x, p] = i hbar.
PHYSICAL = WeylAlgebra(I_HBAR, "physical")
#: Dimensionless basis used for ladder operators: [x, p] = i/2.
DIMENSIONLESS = WeylAlgebra(Coefficient.make(im=Fraction(1, 2)), "dimensionless")


def _coerce(value: Union[Coefficient, Rational]) -> Coefficient:
    if isinstance(value, Coefficient):
        return value
    return Coefficient.make(value)


class OperatorPolynomial:
    """Immutable operator polynomial, always held in normal-ordered form."""

    __slots__ = ("algebra", "_terms")

    max_degree = DEFAULT_MAX_DEGREE

    def __init__(
        self,
        terms: Mapping[tuple[int, ...], Coefficient] = (),
        algebra: WeylAlgebra = PHYSICAL,
    ):
        cleaned = {}
        for key, coeff in dict(terms).items():
            key = tuple(key)
            if len(key) != NVARS or any(e < 0 for e in key):
                raise ValueError(f"bad monomial key {key}")
            if not coeff.is_zero:
                cleaned[key] = coeff
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "_terms", cleaned)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, algebra: WeylAlgebra = PHYSICAL) -> "OperatorPolynomial":
        return cls(algebra=algebra)

    @classmethod
    def scalar(
        cls, value: Union[Coefficient, Rational], algebra: WeylAlgebra = PHYSICAL
    ) -> "OperatorPolynomial":
        return cls({_ZERO_KEY: _coerce(value)}, algebra)

    @classmethod
    def generator(
        cls, kind: str, axis: int, algebra: WeylAlgebra = PHYSICAL
    ) -> "OperatorPolynomial":
        key = list(_ZERO_KEY)
        key[var_index(kind, axis)] = 1
        return cls({tuple(key): Coefficient.one()}, algebra)

    # -- queries ---------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterable[tuple[tuple[int, ...], Coefficient]]:
        return self._terms.items()

    def coefficient(self, key: tuple[int, ...]) -> Coefficient:
        return self._terms.get(tuple(key), Coefficient.zero())

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(key) for key in self._terms)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OperatorPolynomial)
            and self.algebra is other.algebra
            and self._terms == other._terms
        )

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic --------------------------------------------------------------

    def _check_same_algebra(self, other: "OperatorPolynomial") -> None:
        if self.algebra is not other.algebra:
            raise ValueError(
                f"cannot combine operators from algebras "
                f"{self.algebra.name!r} and {other.algebra.name!r}"
            )

    def __add__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        self._check_same_algebra(other)
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged[key] + coeff if key in merged else coeff
        return OperatorPolynomial(merged, self.algebra)

    def __neg__(self) -> "OperatorPolynomial":
        return OperatorPolynomial(
            {k: -c for k, c in self._terms.items()}, self.algebra
        )

    def __sub__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        return self + (-other)

    def __mul__(
        self, other: Union["OperatorPolynomial", Coefficient, Rational]
    ) -> "OperatorPolynomial":
        if isinstance(other, (Coefficient, int, Fraction)):
            c = _coerce(other)
            return OperatorPolynomial(
                {k: v * c for k, v in self._terms.items()}, self.algebra
            )
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        self._check_same_algebra(other)
        if (deg := self.degree() + other.degree()) > self.max_degree:
            raise CapacityError(
                f"product degree {deg} exceeds the bound {self.max_degree}"
            )
        merged: dict[tuple[int, ...], Coefficient] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                for key, factor in _monomial_product(
                    ka, kb, self.algebra.commutator_value
                ):
                    prod = ca * cb * factor
                    merged[key] = merged[key] + prod if key in merged else prod
        return OperatorPolynomial(merged, self.algebra)

    def __rmul__(
        self, other: Union[Coefficient, Rational]
    ) -> "OperatorPolynomial":
        if isinstance(other, (Coefficient, int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, exponent: int) -> "OperatorPolynomial":
        if exponent < 0:
            raise ValueError("negative operator powers are not polynomials")
        out = OperatorPolynomial.scalar(1, self.algebra)
        for _ in range(exponent):
            out = out * self
        return out

    # -- rendering -----------------------------------------------------------------

    def render(self) -> str:
        """Deterministic plain text of the normal form."""
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=lambda k: (sum(k), k)):
            coeff = self._terms[key]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(OP_NAMES, key)
                if e
            )
            ctxt = coeff.render()
            if not mono:
                parts.append(ctxt)
            elif ctxt == "1":
                parts.append(mono)
            elif ctxt == "-1":
                parts.append(f"-{mono}")
            else:
                if " " in ctxt or ("/" in ctxt and not ctxt.startswith("(")):
                    ctxt = f"({ctxt})"
                parts.append(f"{ctxt}*{mono}")
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self) -> str:
        return f"OperatorPolynomial({self.render()})"


def _axis_exchange(
    b: int, c: int, comm: Coefficient
) -> list[tuple[int, int, Coefficient]]:
    """Normal-order p^b x^c on one axis: list of (x_exp, p_exp, factor)."""
    out = []
    for j in range(min(b, c) + 1):
        factor = Coefficient.make(math.comb(b, j) * math.comb(c, j) * math.factorial(j))
        factor = factor * (-comm) ** j
        out.append((c - j, b - j, factor))
    return out


def _monomial_product(
    ka: tuple[int, ...], kb: tuple[int, ...], comm: Coefficient
) -> Iterable[tuple[tuple[int, ...], Coefficient]]:
    """Normal-ordered expansion of the product of two normal monomials."""
    # (x^a p^b) * (x^c p^d) per axis: move p^b past x^c, then collect powers.
    results: list[tuple[list[int], Coefficient]] = [([], Coefficient.one())]
    for axis in range(NAXES):
        a, b = ka[2 * axis], ka[2 * axis + 1]
        c, d = kb[2 * axis], kb[2 * axis + 1]
        expanded: list[tuple[list[int], Coefficient]] = []
        for xe, pe, factor in _axis_exchange(b, c, comm):
            for prefix, acc in results:
                expanded.append((prefix + [a + xe, pe + d], acc * factor))
        results = expanded
    for key_parts, acc in results:
        yield tuple(key_parts), acc


def normal_order(
    word: Sequence[tuple[str, int]], algebra: WeylAlgebra = PHYSICAL
) -> OperatorPolynomial:
    """Reduce an operator word to its normal-ordered polynomial.

    The word is a sequence of (kind, axis) factors read left to right, e.g.
    [("p", 1), ("x", 1)] for p1 x1.  Idempotent on already-ordered words.
    """
    out = OperatorPolynomial.scalar(1, algebra)
    for kind, axis in word:
        out = out * OperatorPolynomial.generator(kind, axis, algebra)
    return out


def commutator(a: OperatorPolynomial, b: OperatorPolynomial) -> OperatorPolynomial:
    """[A, B] = AB - BA, reduced to normal form (exact)."""
    return a * b - b * a


def weyl_symmetrize(
    poly: CanonicalPolynomial, algebra: WeylAlgebra = PHYSICAL
) -> OperatorPolynomial:
    """Symmetric (Weyl) operator ordering of a classical polynomial.

    Each monomial maps to the average over all orderings of its factors.
    Because different axes commute, the average factorizes into per-axis
    averages of x^a p^b interleavings, which are enumerated directly.
    """
    out = OperatorPolynomial.zero(algebra)
    for key, coeff in poly.terms():
        term = OperatorPolynomial.scalar(coeff, algebra)
        for axis in range(1, NAXES + 1):
            a, b = key[2 * (axis - 1)], key[2 * (axis - 1) + 1]
            if a or b:
                term = term * _symmetrized_axis_power(a, b, axis, algebra)
        out = out + term
    return out


_SYM_CACHE: dict[tuple[int, int, int, int], OperatorPolynomial] = {}


def _symmetrized_axis_power(
    a: int, b: int, axis: int, algebra: WeylAlgebra
) -> OperatorPolynomial:
    """Average of all distinct interleavings of a x-factors and b p-factors."""
    cache_key = (a, b, axis, id(algebra))
    cached = _SYM_CACHE.get(cache_key)
    if cached is not None:
        return cached
    from itertools import combinations

    total = OperatorPolynomial.zero(algebra)
    slots = a + b
    count = 0
    for x_positions in combinations(range(slots), a):
        chosen = set(x_positions)
        word = [("x" if i in chosen else "p", axis) for i in range(slots)]
        total = total + normal_order(word, algebra)
        count += 1
    result = total * Fraction(1, count)
    _SYM_CACHE[cache_key] = result
    return result
