"""Dual-mode scalars.

Exact mode uses :class:`fractions.Fraction`; float mode uses Python floats.
The mode is carried by the values themselves: any float entering a
computation switches the result to float mode, and zero tests then use
:data:`ABS_TOL`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[Fraction, float]

ABS_TOL = 1e-9
REL_TOL = 1e-9


def is_float(value) -> bool:
    return isinstance(value, float) or type(value).__module__ == "numpy"


def is_exact(*values) -> bool:
    return not any(is_float(v) for v in values)


def set_tolerance(tol: float) -> None:
    """Set the float-mode zero tolerance (exact mode never uses it)."""
    global ABS_TOL, REL_TOL
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    ABS_TOL = REL_TOL = float(tol)


def is_zero(value, tol: float | None = None) -> bool:
    if is_float(value):
        return abs(value) < (ABS_TOL if tol is None else tol)
    return value == 0


def scalars_equal(a, b, tol: float | None = None) -> bool:
    if is_exact(a, b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=REL_TOL if tol is None else tol,
                        abs_tol=ABS_TOL)


def parse_scalar(text: str | int | float | Fraction) -> Scalar:
    """Parse ``"3/2"``, ``"2"`` or ``"0.5"``.

    Integer and ``p/q`` literals stay exact; anything with a decimal point or
    exponent becomes a float.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a scalar: {text!r}")
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip()
    if not s:
        raise ValueError("empty scalar literal")
    if any(c in s for c in ".eE") and "/" not in s:
        return float(s)
    return Fraction(s)


def format_scalar(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, QuadraticSurd):
        return str(value)
    return repr(float(value))


def to_exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {value!r}")


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n == s*s*d and d squarefree."""
    s, d, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    return s, d * n


def exact_sqrt(q: Fraction) -> "Fraction | QuadraticSurd":
    """Square root of a non-negative rational, exactly.

    Returns a Fraction when ``q`` is a rational square, else a
    :class:`QuadraticSurd` ``b*sqrt(d)``.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    num = q.numerator * q.denominator
    s, d = _squarefree_split(num)
    coeff = Fraction(s, q.denominator)
    if d == 1:
        return coeff
    return QuadraticSurd(Fraction(0), coeff, d)


class QuadraticSurd:
    """Exact element ``a + b*sqrt(d)`` of a real quadratic field.

    Only used where a solution family forces an irrational ratio between
    coordinates; it mixes freely with Fractions in the generic arithmetic.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d <= 1:
            raise ValueError("radicand must be a squarefree integer > 1")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    def _coerce(self, other):
        if is_float(other):
            return float(self)
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError("surds over different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) + other
        return QuadraticSurd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) - other
        return QuadraticSurd(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return other - float(self)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) * other
        return QuadraticSurd(
            self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) / other
        norm = o.a * o.a - o.b * o.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        conj = QuadraticSurd(o.a / norm, -o.b / norm, self.d)
        return self * conj

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return other / float(self)
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QuadraticSurd(1, 0, self.d)
        for _ in range(n):
            out = out * self
        return out

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) < other
        return (self - o).sign() < 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) > other
        return (self - o).sign() > 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, float):
            return float(self) == other
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        def root(b):
            return f"sqrt({self.d})" if b == 1 else f"{b}*sqrt({self.d})"
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return root(self.b) if self.b > 0 else "-" + root(-self.b)
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {root(abs(self.b))}"
