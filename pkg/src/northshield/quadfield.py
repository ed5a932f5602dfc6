"""Exact arithmetic in Z[√2] and Q(√2).

:class:`QuadInt` holds ``a + b√2`` with Python integer coefficients and
:class:`QuadRat` holds ``(a + b√2)/d`` in lowest terms with ``d > 0``.
Signs and orderings are decided with integer arithmetic only; floats appear
solely through :func:`to_float`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

SQRT2 = math.sqrt(2.0)


def _int_sign(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The element ``a + b√2`` of Z[√2]."""

    a: int
    b: int = 0

    def __add__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.a + other, self.b)
        if isinstance(other, QuadInt):
            return QuadInt(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b)

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, (int, QuadInt)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other: int) -> QuadInt:
        return (-self) + other

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.a * other, self.b * other)
        if isinstance(other, QuadInt):
            return QuadInt(
                self.a * other.a + 2 * self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QuadInt:
        return qi_pow(self, n)

    def conj(self) -> QuadInt:
        return QuadInt(self.a, -self.b)

    def norm(self) -> int:
        """Field norm ``a² − 2b²``."""
        return self.a * self.a - 2 * self.b * self.b

    def sign(self) -> int:
        return qi_sign(self)

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __lt__(self, other: QuadInt | int) -> bool:
        return qi_sign(self - other) < 0

    def __le__(self, other: QuadInt | int) -> bool:
        return qi_sign(self - other) <= 0

    def __gt__(self, other: QuadInt | int) -> bool:
        return qi_sign(self - other) > 0

    def __ge__(self, other: QuadInt | int) -> bool:
        return qi_sign(self - other) >= 0

    def __float__(self) -> float:
        return to_float(QuadRat(self))

    def __str__(self) -> str:
        return format_quad(self.a, self.b)

    def to_json(self) -> list[int]:
        return [self.a, self.b]

    @classmethod
    def from_json(cls, obj) -> QuadInt:
        a, b = _parse_pair(obj, "QuadInt")
        return cls(a, b)


ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)
ROOT2 = QuadInt(0, 1)
SILVER = QuadInt(1, 1)


def qi_add(x: QuadInt, y: QuadInt) -> QuadInt:
    return x + y


def qi_mul(x: QuadInt, y: QuadInt) -> QuadInt:
    return x * y


def qi_conj(x: QuadInt) -> QuadInt:
    return x.conj()


def qi_sign(x: QuadInt) -> int:
    """Exact sign of ``a + b√2`` by squaring and comparing."""
    sa, sb = _int_sign(x.a), _int_sign(x.b)
    if sa == sb or sb == 0:
        return sa
    if sa == 0:
        return sb
    # opposite signs: |a| vs |b|√2
    d = x.a * x.a - 2 * x.b * x.b
    # d == 0 is impossible for (a, b) != (0, 0) since √2 is irrational
    return sa if d > 0 else sb


def qi_pow(x: QuadInt, n: int) -> QuadInt:
    """``x**n`` by repeated squaring."""
    if n < 0:
        raise ValueError(f"negative exponent {n} is not defined in Z[√2]")
    result = ONE
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


Scalar = Union["QuadRat", QuadInt, int, Fraction]


@dataclass(frozen=True, slots=True, init=False)
class QuadRat:
    """The element ``num / den`` of Q(√2), always stored reduced with ``den > 0``."""

    num: QuadInt
    den: int

    def __init__(self, num: QuadInt | int, den: int = 1) -> None:
        if isinstance(num, int):
            num = QuadInt(num, 0)
        if den == 0:
            raise ZeroDivisionError("QuadRat with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num.a, num.b, den)
        if g > 1:
            num = QuadInt(num.a // g, num.b // g)
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def coerce(cls, x: Scalar) -> QuadRat:
        if isinstance(x, QuadRat):
            return x
        if isinstance(x, (QuadInt, int)):
            return cls(x)
        if isinstance(x, Rational):
            return cls(QuadInt(int(x.numerator), 0), int(x.denominator))
        raise TypeError(f"cannot interpret {type(x).__name__} as an element of Q(√2)")

    @classmethod
    def from_parts(cls, a: Fraction | int, b: Fraction | int = 0) -> QuadRat:
        """Build ``a + b√2`` from rational coefficients."""
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(
            QuadInt(a.numerator * (den // a.denominator), b.numerator * (den // b.denominator)),
            den,
        )

    @property
    def a(self) -> Fraction:
        return Fraction(self.num.a, self.den)

    @property
    def b(self) -> Fraction:
        return Fraction(self.num.b, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: Scalar) -> QuadRat:
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> QuadRat:
        return QuadRat(-self.num, self.den)

    def __sub__(self, other: Scalar) -> QuadRat:
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> QuadRat:
        return (-self) + other

    def __mul__(self, other: Scalar) -> QuadRat:
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> QuadRat:
        try:
            o = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero in Q(√2)")
        # x / (p/q) = x q conj(p) / N(p)
        n = o.num.norm()
        return QuadRat(self.num * o.num.conj() * o.den, self.den * n)

    def __rtruediv__(self, other: Scalar) -> QuadRat:
        return QuadRat.coerce(other) / self

    def __pow__(self, n: int) -> QuadRat:
        if n < 0:
            return QuadRat(1) / QuadRat(qi_pow(self.num, -n), self.den ** -n)
        return QuadRat(qi_pow(self.num, n), self.den**n)

    def sign(self) -> int:
        return qi_sign(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadRat):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (QuadInt, int, Fraction)):
            return self == QuadRat.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num.a, self.num.b, self.den))

    def __lt__(self, other: Scalar) -> bool:
        return qr_cmp(self, QuadRat.coerce(other)) < 0

    def __le__(self, other: Scalar) -> bool:
        return qr_cmp(self, QuadRat.coerce(other)) <= 0

    def __gt__(self, other: Scalar) -> bool:
        return qr_cmp(self, QuadRat.coerce(other)) > 0

    def __ge__(self, other: Scalar) -> bool:
        return qr_cmp(self, QuadRat.coerce(other)) >= 0

    def __float__(self) -> float:
        return to_float(self)

    def __str__(self) -> str:
        body = format_quad(self.num.a, self.num.b)
        if self.den == 1:
            return body
        if self.num.a and self.num.b:
            body = f"({body})"
        return f"{body}/{self.den}"

    def __repr__(self) -> str:
        return f"QuadRat({self.num.a}, {self.num.b}, den={self.den})"

    def to_json(self) -> dict:
        return {"num": [self.num.a, self.num.b], "den": self.den}

    @classmethod
    def from_json(cls, obj, field: str = "QuadRat") -> QuadRat:
        """Parse ``{"num": [a, b], "den": d}``; ``den`` and ``b`` are optional.

        A bare integer or ``[a, b]`` pair is also accepted.
        """
        if isinstance(obj, dict):
            unknown = set(obj) - {"num", "den"}
            if unknown or "num" not in obj:
                raise ValueError(f"{field}: expected keys 'num' and optional 'den', got {sorted(obj)}")
            a, b = _parse_pair(obj["num"], f"{field}.num")
            den = obj.get("den", 1)
            if not _is_int(den):
                raise TypeError(f"{field}.den: expected an integer, got {den!r}")
            if den <= 0:
                raise ValueError(f"{field}.den: must be positive, got {den}")
            return cls(QuadInt(a, b), den)
        a, b = _parse_pair(obj, field)
        return cls(QuadInt(a, b))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _parse_pair(obj, field: str) -> tuple[int, int]:
    if _is_int(obj):
        return obj, 0
    if not isinstance(obj, list) or not 1 <= len(obj) <= 2:
        raise TypeError(f"{field}: expected an integer or a list [a, b], got {obj!r}")
    if not all(_is_int(c) for c in obj):
        raise TypeError(f"{field}: coefficients must be integers, got {obj!r}")
    return obj[0], (obj[1] if len(obj) == 2 else 0)


def qr_cmp(x: QuadRat, y: QuadRat) -> int:
    """Return -1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    return qi_sign(x.num * y.den - y.num * x.den)


def to_float(x: QuadRat | QuadInt) -> float:
    """Double-precision value of ``(a + b√2)/den``.

    When ``a`` and ``b√2`` would cancel, the value is formed as
    ``N / (den·(a − b√2))`` with ``N = a² − 2b²`` exact, so the relative
    error stays within a few ulp in both regimes. Not a certified bound.
    """
    x = QuadRat.coerce(x)
    a, b, d = x.num.a, x.num.b, x.den
    if a == 0 or b == 0 or (a > 0) == (b > 0):
        return float(Fraction(a, d)) + float(Fraction(b, d)) * SQRT2
    denom = float(Fraction(a, d)) - float(Fraction(b, d)) * SQRT2
    return float(Fraction(x.num.norm(), d * d)) / denom


def format_quad(a: int, b: int) -> str:
    """Render ``a + b√2`` canonically: ``3``, ``29√2``, ``-√2``, ``3 - 2√2``."""
    if b == 0:
        return str(a)
    mag = "√2" if abs(b) == 1 else f"{abs(b)}√2"
    if a == 0:
        return mag if b > 0 else f"-{mag}"
    return f"{a} {'+' if b > 0 else '-'} {mag}"
