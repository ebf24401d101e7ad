"""Dense univariate polynomials with exact rational coefficients.

Coefficients are stored lowest degree first as :class:`fractions.Fraction`
values, so every identity checked downstream is decided exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected on purpose: they would silently leak roundoff into
    the exact layer.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    return str(q)


class Polynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Polynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Polynomial.constant(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                c_str = str(c) if c.denominator == 1 else f"({c})"
                terms.append(f"{c_str}*{mono}" if mono else c_str)
        return " + ".join(terms).replace("+ -", "- ")

    # arithmetic

    def _lift(self, other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial.constant(other)

    def __add__(self, other) -> "Polynomial":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._lift(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            q = as_rational(other)
            return Polynomial(c * q for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Polynomial":
        q = as_rational(other)
        if q == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return Polynomial(c / q for c in self.coeffs)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = Polynomial.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division: returns (quotient, remainder)."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = divisor.degree
        lead = divisor.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for j, d in enumerate(divisor.coeffs):
                    rem[k + j] -= c * d
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def derivative(self, order: int = 1) -> "Polynomial":
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))]
        return Polynomial(c)

    # evaluation

    def __call__(self, s):
        """Evaluate by Horner's rule.

        Exact for Fraction/int arguments, float for floats, elementwise for
        numpy arrays.
        """
        if isinstance(s, np.ndarray):
            return self.evaluate_float(s)
        acc = Fraction(0) if isinstance(s, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * s + (c if isinstance(acc, Fraction) else float(c))
        return acc

    def evaluate_float(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        acc = np.zeros_like(s)
        for c in reversed(self.coeffs):
            acc = acc * s + float(c)
        return acc

    def evaluate_exact(self, points: Sequence[float]) -> np.ndarray:
        """Evaluate at float points in exact arithmetic, rounding once at the end.

        Avoids the cancellation that plain float Horner suffers for high-degree
        polynomials with large alternating coefficients.
        """
        out = np.empty(len(points))
        for i, p in enumerate(points):
            x = Fraction(float(p))
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            out[i] = float(acc)
        return out

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.coeffs), default=Fraction(0))

    def monic(self) -> "Polynomial":
        return self / self.leading

    def to_floats(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    # serialization

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(as_rational(c) for c in data)
