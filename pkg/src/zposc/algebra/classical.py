"""Commuting polynomials in canonical variables and their Poisson bracket.

Monomials run over the six phase-space variables of the 3-D problem,
stored as exponent tuples (x1, p1, x2, p2, x3, p3); the 1-D oscillator
simply never touches axes 2 and 3.  Coefficients are exact (see coeff).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from ..errors import CapacityError
from .coeff import Coefficient, Rational

NAXES = 3
NVARS = 2 * NAXES

#: Default cap on total degree; products that would exceed it raise CapacityError.
DEFAULT_MAX_DEGREE = 16

_ZERO_KEY = (0,) * NVARS

VAR_NAMES = ("x1", "p1", "x2", "p2", "x3", "p3")


def var_index(kind: str, axis: int) -> int:
    """Index of x_axis or p_axis in the exponent tuple (axis in 1..3)."""
    if kind not in ("x", "p"):
        raise ValueError(f"kind must be 'x' or 'p', got {kind!r}")
    if not 1 <= axis <= NAXES:
        raise ValueError(f"axis must be in 1..{NAXES}, got {axis}")
    return 2 * (axis - 1) + (0 if kind == "x" else 1)


def _coerce(value: Union[Coefficient, Rational]) -> Coefficient:
    if isinstance(value, Coefficient):
        return value
    return Coefficient.make(value)


class CanonicalPolynomial:
    """Immutable sparse polynomial over the commuting canonical variables."""

    __slots__ = ("_terms",)

    max_degree = DEFAULT_MAX_DEGREE

    def __init__(self, terms: Mapping[tuple[int, ...], Coefficient] = ()):
        cleaned = {}
        for key, coeff in dict(terms).items():
            key = tuple(key)
            if len(key) != NVARS or any(e < 0 for e in key):
                raise ValueError(f"bad monomial key {key}")
            if not coeff.is_zero:
                cleaned[key] = coeff
        object.__setattr__(self, "_terms", cleaned)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls) -> "CanonicalPolynomial":
        return cls()

    @classmethod
    def scalar(cls, value: Union[Coefficient, Rational]) -> "CanonicalPolynomial":
        return cls({_ZERO_KEY: _coerce(value)})

    @classmethod
    def variable(cls, kind: str, axis: int) -> "CanonicalPolynomial":
        key = list(_ZERO_KEY)
        key[var_index(kind, axis)] = 1
        return cls({tuple(key): Coefficient.one()})

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterable[tuple[tuple[int, ...], Coefficient]]:
        return self._terms.items()

    def coefficient(self, key: tuple[int, ...]) -> Coefficient:
        return self._terms.get(tuple(key), Coefficient.zero())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(key) for key in self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalPolynomial) and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "CanonicalPolynomial") -> "CanonicalPolynomial":
        if not isinstance(other, CanonicalPolynomial):
            return NotImplemented
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged[key] + coeff if key in merged else coeff
        return CanonicalPolynomial(merged)

    def __neg__(self) -> "CanonicalPolynomial":
        return CanonicalPolynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "CanonicalPolynomial") -> "CanonicalPolynomial":
        return self + (-other)

    def __mul__(
        self, other: Union["CanonicalPolynomial", Coefficient, Rational]
    ) -> "CanonicalPolynomial":
        if isinstance(other, (Coefficient, int, Fraction)):
            c = _coerce(other)
            return CanonicalPolynomial({k: v * c for k, v in self._terms.items()})
        if not isinstance(other, CanonicalPolynomial):
            return NotImplemented
        if (deg := self.degree() + other.degree()) > self.max_degree:
            raise CapacityError(
                f"product degree {deg} exceeds the bound {self.max_degree}"
            )
        merged: dict[tuple[int, ...], Coefficient] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                key = tuple(a + b for a, b in zip(ka, kb))
                prod = ca * cb
                merged[key] = merged[key] + prod if key in merged else prod
        return CanonicalPolynomial(merged)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CanonicalPolynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        out = CanonicalPolynomial.scalar(1)
        for _ in range(exponent):
            out = out * self
        return out

    def diff(self, kind: str, axis: int) -> "CanonicalPolynomial":
        """Partial derivative with respect to x_axis or p_axis."""
        idx = var_index(kind, axis)
        merged: dict[tuple[int, ...], Coefficient] = {}
        for key, coeff in self._terms.items():
            e = key[idx]
            if e == 0:
                continue
            new_key = key[:idx] + (e - 1,) + key[idx + 1 :]
            term = coeff * e
            merged[new_key] = merged[new_key] + term if new_key in merged else term
        return CanonicalPolynomial(merged)

    # -- rendering ---------------------------------------------------------------

    def render(self) -> str:
        """Deterministic plain text: terms sorted by (total degree, exponents)."""
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=lambda k: (sum(k), k)):
            coeff = self._terms[key]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(VAR_NAMES, key)
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
        return f"CanonicalPolynomial({self.render()})"


def poisson_bracket(
    f: CanonicalPolynomial, g: CanonicalPolynomial
) -> CanonicalPolynomial:
    """Exact Poisson bracket sum_i (df/dx_i dg/dp_i - df/dp_i dg/dx_i)."""
    out = CanonicalPolynomial.zero()
    for axis in range(1, NAXES + 1):
        out = out + f.diff("x", axis) * g.diff("p", axis)
        out = out - f.diff("p", axis) * g.diff("x", axis)
    return out
