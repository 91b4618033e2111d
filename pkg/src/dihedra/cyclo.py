"""Exact arithmetic in cyclotomic rings Z[x]/(Phi_N).

Values like 4cos^2(k pi/m) live in Z[zeta_m]; deciding identities between
them reduces to comparing canonical residues mod Phi_L at a common level L.
No floating point is involved in any decision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from . import _kernels
from .arith import cyclotomic_poly, lcm, poly_divmod, totient

__all__ = [
    "RationalAngle",
    "CycloNumber",
    "cos_square_value",
    "angle_sum_condition",
    "product_condition",
    "discriminant_locus",
    "Discriminant",
]

_INT64_SAFE = 1 << 62
# largest level * phi(level) for which the power table is kept in memory
_TABLE_LIMIT = 4_000_000


@dataclass(frozen=True)
class RationalAngle:
    """A rational t taken mod 1, stored as num/den with 0 <= num < den."""

    num: int
    den: int

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("angle denominator is zero")
        f = Fraction(self.num, self.den) % 1
        object.__setattr__(self, "num", f.numerator)
        object.__setattr__(self, "den", f.denominator)

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        """Parse ``"k/m"`` or ``"k"``."""
        text = text.strip()
        try:
            if "/" in text:
                a, b = text.split("/")
                return cls(int(a), int(b))
            return cls(int(text), 1)
        except ValueError:
            raise ValueError(f"malformed fraction {text!r}; expected k/m") from None

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


# -- ring helpers --------------------------------------------------------


@lru_cache(maxsize=None)
def _modulus(level: int) -> tuple[int, ...]:
    return cyclotomic_poly(level).coeffs


@lru_cache(maxsize=256)
def _power_rows(level: int) -> tuple[tuple[int, ...], ...] | None:
    """Rows x^m mod Phi_level for 0 <= m < level, or None when too large."""
    deg = totient(level)
    if level * deg > _TABLE_LIMIT:
        return None
    phi = _modulus(level)
    row = [0] * deg
    row[0] = 1
    rows = []
    for _ in range(level):
        rows.append(tuple(row))
        lead = row[-1]
        row = [0] + row[:-1]
        if lead:
            for j in range(deg):
                row[j] -= lead * phi[j]
    return tuple(rows)


@lru_cache(maxsize=256)
def _power_table(level: int) -> tuple[np.ndarray, int] | None:
    rows = _power_rows(level)
    if rows is None:
        return None
    bound = max((abs(x) for r in rows for x in r), default=0)
    if bound >= 1 << 31:
        return None
    return np.array(rows, dtype=np.int64).reshape(level, totient(level)), bound


def _reduce(poly: dict[int, int] | list[int], level: int) -> tuple[int, ...]:
    """Canonical residue of a polynomial (dense list or sparse dict) mod Phi_level."""
    items = poly.items() if isinstance(poly, dict) else enumerate(poly)
    folded: dict[int, int] = {}
    for k, c in items:
        if c:
            k %= level
            folded[k] = folded.get(k, 0) + c
    deg = totient(level)
    rows = _power_rows(level)
    if rows is not None:
        out = [0] * deg
        for k, c in folded.items():
            if c:
                r = rows[k]
                for j in range(deg):
                    out[j] += c * r[j]
        return tuple(out)
    dense = [0] * (max(folded, default=0) + 1)
    for k, c in folded.items():
        dense[k] = c
    _, rem = poly_divmod(dense, _modulus(level))
    rem = list(rem) + [0] * (deg - len(rem))
    return tuple(rem[:deg])


@lru_cache(maxsize=65536)
def _lift(level: int, coeffs: tuple[int, ...], target: int) -> tuple[int, ...]:
    if target == level:
        return coeffs
    step = target // level
    return _reduce({j * step: c for j, c in enumerate(coeffs) if c}, target)


def _mul_coeffs(a: tuple[int, ...], b: tuple[int, ...], level: int) -> tuple[int, ...]:
    packed = _power_table(level)
    if packed is not None:
        table, tbound = packed
        ma = max(map(abs, a), default=0)
        mb = max(map(abs, b), default=0)
        width = min(len(a) + len(b) - 1, level)
        bound = 2 * ma * mb * min(len(a), len(b)) * width * max(tbound, 1)
        if bound < _INT64_SAFE:
            out = _kernels.polymulmod(
                np.array(a, dtype=np.int64), np.array(b, dtype=np.int64), table, level
            )
            return tuple(int(x) for x in out)
    prod: dict[int, int] = {}
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = prod.get(i + j, 0) + x * y
    return _reduce(prod, level)


Scalar = Union[int, "CycloNumber"]


class CycloNumber:
    """An element of Z[zeta_level] in the power basis of Z[x]/(Phi_level).

    Mixed-level operands are lifted to the lcm of their levels. Equality is
    exact and level-independent.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        if level < 1:
            raise ValueError("level must be >= 1")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != totient(level):
            raise ValueError(
                f"level {level} needs {totient(level)} coefficients, got {len(coeffs)}"
            )
        self.level = level
        self.coeffs = coeffs

    @classmethod
    def integer(cls, k: int) -> "CycloNumber":
        return cls(1, (k,))

    @classmethod
    def zeta(cls, level: int, power: int = 1) -> "CycloNumber":
        """zeta_level ** power."""
        return cls(level, _reduce({power: 1}, level))

    @classmethod
    def from_poly(cls, level: int, poly) -> "CycloNumber":
        """Reduce an arbitrary integer polynomial in zeta_level."""
        return cls(level, _reduce(list(poly), level))

    def lift(self, level: int) -> "CycloNumber":
        if level % self.level:
            raise ValueError(f"cannot lift level {self.level} to {level}")
        return CycloNumber(level, _lift(self.level, self.coeffs, level))

    def _pair(self, other: Scalar) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        if isinstance(other, int):
            other = CycloNumber.integer(other)
        elif not isinstance(other, CycloNumber):
            return NotImplemented
        L = lcm(self.level, other.level)
        return L, _lift(self.level, self.coeffs, L), _lift(other.level, other.coeffs, L)

    def __add__(self, other: Scalar) -> "CycloNumber":
        pair = self._pair(other)
        if pair is NotImplemented:
            return NotImplemented
        L, a, b = pair
        return CycloNumber(L, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "CycloNumber":
        pair = self._pair(other)
        if pair is NotImplemented:
            return NotImplemented
        L, a, b = pair
        return CycloNumber(L, [x - y for x, y in zip(a, b)])

    def __rsub__(self, other: Scalar) -> "CycloNumber":
        return (-self) + other

    def __neg__(self) -> "CycloNumber":
        return CycloNumber(self.level, [-x for x in self.coeffs])

    def __mul__(self, other: Scalar) -> "CycloNumber":
        if isinstance(other, int):
            return CycloNumber(self.level, [other * x for x in self.coeffs])
        pair = self._pair(other)
        if pair is NotImplemented:
            return NotImplemented
        L, a, b = pair
        return CycloNumber(L, _mul_coeffs(a, b, L))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycloNumber":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = CycloNumber.integer(1).lift(self.level)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        pair = self._pair(other) if isinstance(other, (int, CycloNumber)) else NotImplemented
        if pair is NotImplemented:
            return NotImplemented
        _, a, b = pair
        return a == b

    __hash__ = None

    def to_complex(self) -> complex:
        """Floating-point value at zeta = exp(2 pi i / level). Diagnostics only."""
        z = cmath.exp(2j * math.pi / self.level)
        return sum(c * z**j for j, c in enumerate(self.coeffs))

    def as_integer(self) -> int | None:
        """The rational integer this equals, if any."""
        if not any(self.coeffs[1:]):
            return self.coeffs[0]
        return None

    def __repr__(self) -> str:
        return f"CycloNumber(level={self.level}, coeffs={list(self.coeffs)})"


# -- the trigonometric identity ------------------------------------------


@lru_cache(maxsize=4096)
def _cos_square_coeffs(num: int, den: int) -> tuple[int, ...]:
    poly = {0: 2}
    for k in (num, (den - num) % den):
        poly[k] = poly.get(k, 0) + 1
    return _reduce(poly, den)


def cos_square_value(t: RationalAngle) -> CycloNumber:
    """4 cos^2(t pi) = 2 + zeta^num + zeta^-num, zeta a primitive den-th root."""
    return CycloNumber(t.den, _cos_square_coeffs(t.num, t.den))


def angle_sum_condition(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> bool:
    """True iff c = +-a +-b (mod 1) for some choice of signs."""
    fa, fb, fc = a.as_fraction(), b.as_fraction(), c.as_fraction()
    for ea in (1, -1):
        for eb in (1, -1):
            if (fc - ea * fa - eb * fb).denominator == 1:
                return True
    return False


class Discriminant(NamedTuple):
    value: CycloNumber
    common: CycloNumber | None


def _residual(a: RationalAngle, b: RationalAngle, c: RationalAngle):
    alpha, beta, gamma = cos_square_value(a), cos_square_value(b), cos_square_value(c)
    shift = 4 - alpha - beta - gamma
    return shift * shift - alpha * beta * gamma, shift


def discriminant_locus(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> Discriminant:
    """(4 - al - be - ga)^2 - al*be*ga, plus the double root 4 - al - be - ga when it vanishes."""
    value, shift = _residual(a, b, c)
    return Discriminant(value, shift if value.is_zero() else None)


def product_condition(a: RationalAngle, b: RationalAngle, c: RationalAngle) -> bool:
    """True iff al*be*ga == (4 - al - be - ga)^2 exactly."""
    return _residual(a, b, c)[0].is_zero()
