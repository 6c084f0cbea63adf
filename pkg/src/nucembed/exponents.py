"""Exact exponent algebra on (0, inf].

An exponent is stored through its reciprocal ``inv = 1/p`` as a
:class:`fractions.Fraction`, so ``inf`` is simply ``inv == 0`` and every
comparison or reciprocal identity is decided without rounding.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "Exponent",
    "ExponentError",
    "INF",
    "ONE",
    "TWO",
    "conjugate",
    "star_exponent",
    "tong_exponent",
    "parse_exponent",
    "as_exponent",
]


class ExponentError(ValueError):
    """An exponent is malformed or outside the admissible range."""


_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


@total_ordering
class Exponent:
    """An exponent ``p`` in ``(0, inf]`` with exact arithmetic.

    Values below 1 are allowed (quasi-norm contexts); use
    :meth:`require_banach` where the theory needs ``p >= 1``.
    """

    __slots__ = ("_inv",)

    def __init__(self, inv: Fraction | int):
        inv = Fraction(inv)
        if inv < 0:
            raise ExponentError(f"reciprocal exponent must be >= 0, got {inv}")
        self._inv = inv

    @classmethod
    def of(cls, value) -> "Exponent":
        """Build from a positive rational value or ``math.inf``."""
        if isinstance(value, Exponent):
            return value
        if isinstance(value, float):
            if value == math.inf:
                return INF
            if not value.is_integer():
                raise ExponentError(
                    f"decimal exponent {value!r} rejected; use an exact fraction or 'inf'"
                )
        if isinstance(value, str):
            return parse_exponent(value)
        value = Fraction(value)
        if value <= 0:
            raise ExponentError(f"exponent must be positive, got {value}")
        return cls(1 / value)

    @property
    def inv(self) -> Fraction:
        return self._inv

    @property
    def is_inf(self) -> bool:
        return self._inv == 0

    @property
    def value(self) -> Fraction | float:
        """The exponent itself: a Fraction, or ``math.inf``."""
        return math.inf if self.is_inf else 1 / self._inv

    @property
    def is_banach(self) -> bool:
        return self._inv <= 1

    def require_banach(self, what: str = "exponent") -> "Exponent":
        if not self.is_banach:
            raise ExponentError(
                f"{what} = {self} < 1: duality and nuclearity need Banach exponents in [1, inf]"
            )
        return self

    def __float__(self) -> float:
        return math.inf if self.is_inf else float(1 / self._inv)

    def __eq__(self, other) -> bool:
        if isinstance(other, Exponent):
            return self._inv == other._inv
        try:
            return self == Exponent.of(other)
        except (ExponentError, TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other) -> bool:
        other = Exponent.of(other)
        # larger reciprocal means smaller exponent
        return self._inv > other._inv

    def __hash__(self) -> int:
        return hash(("Exponent", self._inv))

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        v = 1 / self._inv
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __repr__(self) -> str:
        return f"Exponent({self})"


INF = Exponent(0)
ONE = Exponent(1)
TWO = Exponent(Fraction(1, 2))


def parse_exponent(text: str) -> Exponent:
    """Parse ``"inf"``, an integer, or a fraction ``"a/b"``.

    Decimal notation is rejected on purpose: ``0.333`` would silently move
    a boundary case across a strict inequality.
    """
    s = text.strip().lower()
    if s in ("inf", "infinity", "oo", "+inf"):
        return INF
    m = _FRACTION_RE.match(s)
    if not m:
        raise ExponentError(f"cannot parse exponent {text!r}; expected 'inf', 'n' or 'a/b'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ExponentError(f"zero denominator in exponent {text!r}")
    return Exponent.of(Fraction(num, den))


def as_exponent(value) -> Exponent:
    return Exponent.of(value)


def conjugate(r) -> Exponent:
    """Hoelder conjugate ``r'`` with ``1/r + 1/r' = 1``."""
    r = as_exponent(r).require_banach("r")
    return Exponent(1 - r.inv)


def star_exponent(r1, r2) -> Exponent:
    """Compactness exponent: ``1/r* = (1/r2 - 1/r1)_+``."""
    r1, r2 = as_exponent(r1), as_exponent(r2)
    return Exponent(max(r2.inv - r1.inv, Fraction(0)))


def tong_exponent(r1, r2) -> Exponent:
    """Nuclearity exponent: ``1/t = 1 - (1/r1 - 1/r2)_+`` for ``r1, r2 >= 1``."""
    r1 = as_exponent(r1).require_banach("r1")
    r2 = as_exponent(r2).require_banach("r2")
    return Exponent(1 - max(r1.inv - r2.inv, Fraction(0)))
