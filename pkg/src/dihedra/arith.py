"""Exact integer foundations.

Everything here works on Python ints, so there is no overflow at any size.
Polynomials are coefficient lists in ascending degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PrimeFactorization",
    "CyclotomicPoly",
    "IntMatrix",
    "is_prime",
    "factorize",
    "prime_set",
    "valuation",
    "totient",
    "moebius",
    "divisors",
    "divisor_count",
    "lcm",
    "xgcd",
    "inverse_mod",
    "poly_mul",
    "poly_divmod",
    "cyclotomic_poly",
    "smith_normal_form",
    "determinant",
    "h_double_prime_structure",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin; exact for every m < 3.3e24."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeFactorization:
    """Map prime -> exponent, with the factored value kept alongside."""

    value: int
    factors: Mapping[int, int] = field(default_factory=dict)

    def primes(self) -> frozenset[int]:
        return frozenset(self.factors)

    def product(self) -> int:
        out = 1
        for p, e in self.factors.items():
            out *= p**e
        return out

    def __iter__(self):
        return iter(sorted(self.factors.items()))


def _trial_divisors():
    yield from (2, 3, 5)
    p = 7
    while True:
        yield p
        yield p + 4
        p += 6


@lru_cache(maxsize=4096)
def _factor_items(m: int) -> tuple[tuple[int, int], ...]:
    out = []
    if m > 10**12 and is_prime(m):
        return ((m, 1),)
    for p in _trial_divisors():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
            if m > 10**12 and is_prime(m):
                break
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def factorize(m: int) -> PrimeFactorization:
    """Factor a positive integer by trial division.

    >>> dict(factorize(360).factors)
    {2: 3, 3: 2, 5: 1}
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"factorize needs a positive integer, got {m!r}")
    return PrimeFactorization(m, dict(_factor_items(m)))


def prime_set(m: int) -> frozenset[int]:
    """P(m): primes dividing |m|. P(1) is empty."""
    return frozenset(p for p, _ in _factor_items(abs(m)))


def valuation(p: int, m: int) -> int:
    """Exponent of the largest power of the prime ``p`` dividing ``m``."""
    if m == 0:
        raise ValueError("valuation of 0 is undefined")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def totient(m: int) -> int:
    if m < 1:
        raise ValueError("totient needs m >= 1")
    out = m
    for p, _ in _factor_items(m):
        out = out // p * (p - 1)
    return out


def moebius(m: int) -> int:
    if m < 1:
        raise ValueError("moebius needs m >= 1")
    items = _factor_items(m)
    if any(e > 1 for _, e in items):
        return 0
    return -1 if len(items) % 2 else 1


def divisors(m: int) -> list[int]:
    if m < 1:
        raise ValueError("divisors needs m >= 1")
    out = [1]
    for p, e in _factor_items(m):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def divisor_count(m: int) -> int:
    return math.prod(e + 1 for _, e in _factor_items(m))


def lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def inverse_mod(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


# -- polynomials ---------------------------------------------------------


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division by a polynomial whose leading coefficient is +-1."""
    b = _trim(list(b))
    lead = b[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must have leading coefficient +-1")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [0], _trim(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * lead
        if c:
            quot[k - db] = c
            for j in range(db + 1):
                rem[k - db + j] -= c * b[j]
    return _trim(quot), _trim(rem[:db] or [0])


@dataclass(frozen=True)
class CyclotomicPoly:
    index: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@lru_cache(maxsize=1024)
def _cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    # Phi_n = prod_{d | n} (x^d - 1)^mu(n/d): multiply the mu=+1 factors,
    # then divide out the mu=-1 factors.
    num, den = [1], [1]
    for d in divisors(n):
        mu = moebius(n // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = poly_mul(num, factor)
        else:
            den = poly_mul(den, factor)
    q, r = poly_divmod(num, den)
    if any(r):
        raise ArithmeticError(f"cyclotomic construction for n={n} left a remainder")
    return tuple(q)


def cyclotomic_poly(n: int) -> CyclotomicPoly:
    """The n-th cyclotomic polynomial, coefficients ascending."""
    if n < 1:
        raise ValueError("cyclotomic_poly needs n >= 1")
    return CyclotomicPoly(n, _cyclotomic_coeffs(n))


# -- integer matrices ----------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix, immutable."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, tuple(int(i == j) for i in range(size) for j in range(size)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls.from_rows(zip(*columns))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a = self.to_rows()
        bt = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            self.rows, other.cols, tuple(sum(x * y for x, y in zip(r, c)) for r in a for c in bt)
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols or k < 0:
            raise ValueError("powers need a square matrix and k >= 0")
        out, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(x * y for x, y in zip(r, v)) for r in self.to_rows())

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.rows, self.cols)))

    @property
    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) if self.rows == self.cols else False


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntMatrix):
        return M.to_rows()
    return [[int(x) for x in r] for r in M]


def smith_normal_form(M) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an integer matrix.

    The list has min(rows, cols) entries; zeros at the end mark a rank
    deficit. The cokernel of the row lattice in Z^cols is the direct sum of
    the Z/d_i (plus free summands for the missing rank).
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if m else (M.cols if isinstance(M, IntMatrix) else 0)
    k = min(m, n)
    diag = []
    t = 0
    while t < k:
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        rt, ri = A[t], A[i]
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                    if A[i][t]:
                        dirty = True
            rt = A[t]
            for j in range(t + 1, n):
                if rt[j]:
                    q = rt[j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if rt[j]:
                        dirty = True
            if not dirty:
                # pivot must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = A[t], A[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    diag += [0] * (k - len(diag))
    return tuple(diag)


def determinant(M) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    A = _as_rows(M)
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            ri, rk = A[i], A[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def h_double_prime_structure(p: int, q: int, r: int) -> tuple[int, int]:
    """Invariant factors (d, n) of <a, c | a^p = c^q = (ac)^r = 1, [a, c] = 1>.

    Relation rows are fixed as [p, 0], [0, q], [r, r]. Requires the triple to
    satisfy the pairwise-lcm condition.
    """
    from .triples import Triple, check_condition_C

    verdict = check_condition_C(Triple(p, q, r))
    if not verdict.c1:
        raise ValueError(
            f"({p}, {q}, {r}) violates the pairwise-lcm condition: "
            f"lcm pairs {lcm(p, q)}, {lcm(p, r)}, {lcm(q, r)} vs lcm {lcm(p, q, r)}"
        )
    d1, d2 = smith_normal_form([[p, 0], [0, q], [r, r]])
    return d1, d2
