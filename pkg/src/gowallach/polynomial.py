"""Sparse multivariate polynomials with canonical text form.

Monomials are keyed by sorted ``(variable, exponent)`` tuples. Printing and
iteration follow lexicographic monomial order with respect to a given
variable order (basis order), so equal polynomials always print the same.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalar import QuadraticSurd, format_scalar, is_exact, is_zero

Key = tuple[tuple[str, int], ...]


class Polynomial:
    __slots__ = ("terms", "order")

    def __init__(self, terms: Mapping[Key, object], order: Sequence[str] = ()):
        self.terms = {k: v for k, v in terms.items() if not is_zero(v)}
        names = {name for key in self.terms for name, _ in key}
        known = list(order)
        self.order = tuple(known + sorted(names - set(known)))

    @staticmethod
    def monomial_key(powers: Mapping[str, int]) -> Key:
        merged: dict[str, int] = {}
        for name, e in powers.items():
            if e:
                merged[name] = merged.get(name, 0) + e
        return tuple(sorted(merged.items()))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[object, Mapping[str, int]]], order=()) -> "Polynomial":
        acc: dict[Key, object] = {}
        for coeff, powers in terms:
            key = cls.monomial_key(powers)
            acc[key] = acc.get(key, 0) + coeff
        return cls(acc, order)

    def _exponents(self, key: Key) -> tuple[int, ...]:
        pw = dict(key)
        return tuple(pw.get(v, 0) for v in self.order)

    def sorted_terms(self) -> list[tuple[Key, object]]:
        return sorted(self.terms.items(), key=lambda kv: self._exponents(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> list[str]:
        names = {name for key in self.terms for name, _ in key}
        return [v for v in self.order if v in names]

    def evaluate(self, values: Mapping[str, object]):
        total = 0
        for key, c in self.terms.items():
            t = c
            for name, e in key:
                t = t * values.get(name, 0) ** e
            total = total + t
        return total

    def gradient(self, values: Mapping[str, object]) -> dict[str, object]:
        grad: dict[str, object] = {}
        for key, c in self.terms.items():
            for i, (name, e) in enumerate(key):
                t = c * e
                for j, (other, f) in enumerate(key):
                    p = f - 1 if j == i else f
                    if p:
                        t = t * values.get(other, 0) ** p
                grad[name] = grad.get(name, 0) + t
        return grad

    def substitute_zero(self, names: Iterable[str]) -> "Polynomial":
        dead = set(names)
        return Polynomial(
            {k: v for k, v in self.terms.items() if not any(n in dead for n, _ in k)},
            self.order,
        )

    def normalized(self) -> "Polynomial":
        """Primitive integer form for rational coefficients, otherwise a unit
        leading coefficient (floats and quadratic surds)."""
        if not self.terms:
            return self
        lead = self.sorted_terms()[0][1]
        if any(isinstance(v, QuadraticSurd) for v in self.terms.values()):
            scaled = {k: v / lead for k, v in self.terms.items()}
            if all(not isinstance(v, QuadraticSurd) or v.b == 0 for v in scaled.values()):
                rational = {k: (v.a if isinstance(v, QuadraticSurd) else v) for k, v in scaled.items()}
                return Polynomial(rational, self.order).normalized()
            return Polynomial(scaled, self.order)
        if is_exact(*self.terms.values()) and all(
            isinstance(v, (int, Fraction)) for v in self.terms.values()
        ):
            vals = [Fraction(v) for v in self.terms.values()]
            den = math.lcm(*(v.denominator for v in vals))
            num = math.gcd(*(int(v * den) for v in vals))
            scale = Fraction(den, num) * (1 if lead > 0 else -1)
        else:
            scale = 1 / float(lead)
        return Polynomial({k: v * scale for k, v in self.terms.items()}, self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for n, (key, c) in enumerate(self.sorted_terms()):
            mono = "*".join(name if e == 1 else f"{name}^{e}" for name, e in
                            sorted(key, key=lambda ne: self.order.index(ne[0])))
            neg = (float(c) < 0)
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{format_scalar(mag)}*{mono}"
            else:
                body = format_scalar(mag)
            if n == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"
