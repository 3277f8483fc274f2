"""Exact scalar coefficients: Gaussian rationals times powers of hbar.

A Coefficient is a finite sum  sum_k (a_k + i b_k) hbar^k  with a_k, b_k
exact rationals and k >= 0.  All arithmetic is exact; zero has a unique
representation (no stored terms), so equality of coefficients is equality
of canonical forms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


def _as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Coefficient:
    """Immutable exact scalar in Q(i)[hbar]."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, tuple[Fraction, Fraction]] = ()):
        cleaned = {}
        for k, (re, im) in dict(terms).items():
            if k < 0:
                raise ValueError(f"hbar power must be >= 0, got {k}")
            if re or im:
                cleaned[k] = (re, im)
        object.__setattr__(self, "_terms", tuple(sorted(cleaned.items())))

    # -- constructors ------------------------------------------------------

    @classmethod
    def make(cls, re: Rational = 0, im: Rational = 0, hbar_power: int = 0) -> "Coefficient":
        return cls({hbar_power: (_as_fraction(re), _as_fraction(im))})

    @classmethod
    def zero(cls) -> "Coefficient":
        return _ZERO

    @classmethod
    def one(cls) -> "Coefficient":
        return _ONE

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterable[tuple[int, Fraction, Fraction]]:
        for k, (re, im) in self._terms:
            yield k, re, im

    def evaluate(self, hbar: float) -> complex:
        """Numeric value with hbar substituted."""
        out = 0j
        for k, (re, im) in self._terms:
            out += complex(re, im) * hbar**k
        return out

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Coefficient") -> "Coefficient":
        if not isinstance(other, Coefficient):
            return NotImplemented
        merged = {k: (re, im) for k, (re, im) in self._terms}
        for k, (re, im) in other._terms:
            if k in merged:
                pre, pim = merged[k]
                merged[k] = (pre + re, pim + im)
            else:
                merged[k] = (re, im)
        return Coefficient(merged)

    def __neg__(self) -> "Coefficient":
        return Coefficient({k: (-re, -im) for k, (re, im) in self._terms})

    def __sub__(self, other: "Coefficient") -> "Coefficient":
        return self + (-other)

    def __mul__(self, other: Union["Coefficient", Rational]) -> "Coefficient":
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            return Coefficient({k: (re * f, im * f) for k, (re, im) in self._terms})
        if not isinstance(other, Coefficient):
            return NotImplemented
        merged: dict[int, tuple[Fraction, Fraction]] = {}
        for ka, (ra, ia) in self._terms:
            for kb, (rb, ib) in other._terms:
                k = ka + kb
                re = ra * rb - ia * ib
                im = ra * ib + ia * rb
                if k in merged:
                    pre, pim = merged[k]
                    merged[k] = (pre + re, pim + im)
                else:
                    merged[k] = (re, im)
        return Coefficient(merged)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Coefficient":
        if exponent < 0:
            raise ValueError("negative powers are not representable")
        out = _ONE
        for _ in range(exponent):
            out = out * self
        return out

    def conjugate(self) -> "Coefficient":
        return Coefficient({k: (re, -im) for k, (re, im) in self._terms})

    # -- identity ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coefficient) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Deterministic plain-text form, e.g. '3/2', 'i*hbar', '(1+2i)*hbar^2'."""
        if self.is_zero:
            return "0"
        parts = []
        for k, (re, im) in self._terms:
            parts.append(_render_term(k, re, im))
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self) -> str:
        return f"Coefficient({self.render()})"


def _render_scalar(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        if im.denominator != 1:
            return f"-({-im})i" if im < 0 else f"({im})i"
        return f"{im}i"
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imtxt = "i" if mag == 1 else f"({mag})i" if mag.denominator != 1 else f"{mag}i"
    return f"({re}{sign}{imtxt})"


def _render_term(k: int, re: Fraction, im: Fraction) -> str:
    scalar = _render_scalar(re, im)
    if k == 0:
        return scalar
    hbar = "hbar" if k == 1 else f"hbar^{k}"
    if scalar == "1":
        return hbar
    if scalar == "-1":
        return f"-{hbar}"
    if "/" in scalar and not scalar.startswith("("):
        scalar = f"({scalar})"
    return f"{scalar}*{hbar}"


_ZERO = Coefficient()
_ONE = Coefficient.make(1)

#: The imaginary unit.
I = Coefficient.make(im=1)
#: i * hbar, the fundamental commutator value.
I_HBAR = Coefficient.make(im=1, hbar_power=1)
#: hbar as a coefficient.
HBAR = Coefficient.make(1, hbar_power=1)
ONE = _ONE
ZERO = _ZERO
HALF = Coefficient.make(Fraction(1, 2))
