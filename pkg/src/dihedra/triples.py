"""Arithmetic of integer triples.

Condition C on (a1, a2, a3):
  C1  every pairwise lcm equals n = lcm(a1, a2, a3);
  C2  not (n even and all three a_i carry the full power of 2 in n).
Condition D: integers c_i coprime to a_i with sum(c_i / a_i) an integer.

``solve_condition_D`` builds a D-witness constructively with an
arithmetic-progression sieve; ``enumerate_reduced`` is the brute-force
oracle it is checked against.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernels
from .arith import inverse_mod, lcm, prime_set, totient, valuation

__all__ = [
    "Triple",
    "ConditionC",
    "TripleDecomposition",
    "DSolution",
    "SieveState",
    "CountReport",
    "check_condition_C",
    "decompose",
    "ap_solve",
    "ap_intersect",
    "solve_condition_D",
    "enumerate_reduced",
    "count_reduced",
    "sieve_T_size",
    "bad_residues",
    "inclusion_exclusion",
]


@dataclass(frozen=True)
class Triple:
    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        for a in self:
            if not isinstance(a, int) or a < 2:
                raise ValueError(f"triple entries must be integers >= 2, got {tuple(self)}")

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))

    def __getitem__(self, i: int) -> int:
        return (self.a1, self.a2, self.a3)[i]

    @property
    def n(self) -> int:
        return lcm(self.a1, self.a2, self.a3)

    @classmethod
    def of(cls, values: Iterable[int]) -> "Triple":
        a1, a2, a3 = values
        return cls(int(a1), int(a2), int(a3))


@dataclass(frozen=True)
class ConditionC:
    c1: bool
    c2: bool

    @property
    def holds(self) -> bool:
        return self.c1 and self.c2

    def __bool__(self) -> bool:
        return self.holds


def check_condition_C(t: Triple) -> ConditionC:
    a1, a2, a3 = t
    n = t.n
    c1 = lcm(a1, a2) == lcm(a1, a3) == lcm(a2, a3) == n
    v = valuation(2, n)
    c2 = not (v >= 1 and all(valuation(2, a) == v for a in t))
    return ConditionC(c1, c2)


@dataclass(frozen=True)
class TripleDecomposition:
    triple: Triple
    n: int
    w: int
    b: tuple[int, int, int]
    P0: frozenset[int]
    P1: frozenset[int]
    Q: frozenset[int]
    Qi: tuple[frozenset[int], frozenset[int], frozenset[int]]

    @property
    def b1w(self) -> int:
        return self.b[0] * self.w


def decompose(t: Triple) -> TripleDecomposition:
    """n = b1 b2 b3 w with a1 = b2 b3 w (and cyclically); needs C1."""
    if not check_condition_C(t).c1:
        raise ValueError(f"{tuple(t)} violates C1; no decomposition n = b1 b2 b3 w")
    n = t.n
    w = math.gcd(*t)
    b = tuple(n // a for a in t)
    b1, b2, b3 = b
    Pw = prime_set(w)
    Pb = [prime_set(x) for x in b]
    P1 = Pb[0] | (Pb[1] & Pw) | (Pb[2] & Pw)
    P0 = prime_set(b1 * w) - P1
    Q = (Pb[0] & Pw) | (Pb[1] & Pw) | (Pb[2] & Pw)
    Qi = tuple(Pb[i] - Pw for i in range(3))
    dec = TripleDecomposition(t, n, w, b, P0, P1, Q, Qi)
    _check_decomposition(dec)
    return dec


def _check_decomposition(d: TripleDecomposition) -> None:
    b1, b2, b3 = d.b
    a1, a2, a3 = d.triple
    if d.n != b1 * b2 * b3 * d.w:
        raise ArithmeticError(f"n != b1 b2 b3 w for {tuple(d.triple)}")
    if (a1, a2, a3) != (b2 * b3 * d.w, b3 * b1 * d.w, b1 * b2 * d.w):
        raise ArithmeticError(f"a_i != b_j b_k w for {tuple(d.triple)}")
    if math.gcd(b1, b2) != 1 or math.gcd(b2, b3) != 1 or math.gcd(b1, b3) != 1:
        raise ArithmeticError(f"b_i not pairwise coprime for {tuple(d.triple)}")
    if d.P0 & d.P1 or (d.P0 | d.P1) != prime_set(b1 * d.w):
        raise ArithmeticError("P(b1 w) is not the disjoint union of P0 and P1")


# -- arithmetic progressions ----------------------------------------------


def ap_solve(a: int, b: int, c: int) -> int:
    """The residue rho0 in [0, b) with b | c + a*rho0 (needs gcd(a, b) = 1)."""
    if b <= 0:
        raise ValueError("modulus must be positive")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) != 1; the solution set is not a single class")
    if b == 1:
        return 0
    return (-c * inverse_mod(a, b)) % b


def ap_intersect(A: tuple[int, int], B: tuple[int, int]) -> tuple[int, int]:
    """Intersect the classes A = (a0 mod a) and B = (b0 mod b), gcd(a, b) = 1."""
    a0, a = A
    b0, b = B
    if math.gcd(a, b) != 1:
        raise ValueError(f"moduli {a} and {b} are not coprime")
    rho = ap_solve(a, b, a0 - b0)
    m = a * b
    return (a0 + rho * a) % m, m


# -- condition D ----------------------------------------------------------


@dataclass(frozen=True)
class DSolution:
    c1: int
    c2: int
    c3: int

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))

    def check(self, t: Triple) -> list[str]:
        """Return the list of violated invariants (empty when valid)."""
        problems = []
        n = t.n
        b = [n // a for a in t]
        c = tuple(self)
        if sum(bi * ci for bi, ci in zip(b, c)) != n:
            problems.append("sum b_i c_i != n")
        for i, (ci, ai) in enumerate(zip(c, t)):
            if math.gcd(ci, ai) != 1:
                problems.append(f"gcd(c{i + 1}, a{i + 1}) != 1")
        if not (0 < c[0] < t.a1 and 0 < c[1] < t.a2 and abs(c[2]) < t.a3):
            problems.append("outside the reduced box")
        return problems


@dataclass(frozen=True)
class SieveState:
    """Trace of one sieve run for a fixed c1."""

    decomposition: TripleDecomposition
    c1: int
    x0: int
    y0: int
    modulus: int
    bad_x: tuple[tuple[int, int], ...]
    bad_y: tuple[tuple[int, int], ...]
    rho: int | None = None

    @property
    def classes(self) -> tuple[tuple[int, int], ...]:
        return self.bad_x + self.bad_y


def _sieve(dec: TripleDecomposition, c1: int) -> SieveState:
    b1, b2, b3 = dec.b
    w = dec.w
    rhs = b1 * (b2 * b3 * w - c1)
    # b2 x + b3 y = rhs, x0 in [0, b3)
    x0 = (rhs * inverse_mod(b2, b3)) % b3 if b3 > 1 else 0
    y0, r = divmod(rhs - b2 * x0, b3)
    assert r == 0
    modulus = b1 * w
    Pm = prime_set(modulus)
    bad_x = tuple((ap_solve(b3, p, x0), p) for p in sorted(Pm - prime_set(b3)))
    bad_y = tuple((ap_solve(-b2, q, y0), q) for q in sorted(Pm - prime_set(b2)))
    for res, mod in bad_x + bad_y:
        if modulus % mod:
            raise ArithmeticError("sieve class modulus does not divide b1 w")
    return SieveState(dec, c1, x0, y0, modulus, bad_x, bad_y)


def _first_good(state: SieveState) -> int | None:
    classes = state.classes
    for rho in range(state.modulus):
        if all(rho % m != r for r, m in classes):
            return rho
    return None


def solve_condition_D(t: Triple) -> tuple[DSolution | None, SieveState | None]:
    """Construct a reduced D-witness, or return (None, trace) when none exists.

    c1 runs upward through the units mod a1; for each, the particular solution
    (x0, y0) of b2 x + b3 y = b1 (b2 b3 w - c1) is shifted by rho b3 / -rho b2
    with rho the first residue in [0, b1 w) avoiding every bad class. When C1
    fails there is no decomposition and the answer is (None, None).
    """
    if not check_condition_C(t).c1:
        return None, None
    dec = decompose(t)
    b1, b2, b3 = dec.b
    last = None
    for c1 in range(1, t.a1):
        if math.gcd(c1, t.a1) != 1:
            continue
        state = _sieve(dec, c1)
        rho = _first_good(state)
        if rho is None:
            last = state
            continue
        x = state.x0 + rho * b3
        y = state.y0 - rho * b2
        if math.gcd(x, b1) != 1 or math.gcd(y, b1) != 1:
            raise ArithmeticError(f"gcd(x, b1) or gcd(y, b1) != 1 for {tuple(t)}")
        sol = DSolution(c1, x, y)
        problems = sol.check(t)
        if problems:
            raise ArithmeticError(f"sieve produced an invalid solution for {tuple(t)}: {problems}")
        return sol, dataclasses.replace(state, rho=rho)
    return None, last


def enumerate_reduced(t: Triple) -> list[DSolution]:
    """Every reduced solution, by exhaustive scan of 0<c1<a1, 0<c2<a2, |c3|<a3."""
    rows = _kernels.reduced_solutions(t.a1, t.a2, t.a3)
    return [DSolution(int(r[0]), int(r[1]), int(r[2])) for r in rows]


# -- counting --------------------------------------------------------------


def _prod(factors: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for f in factors:
        out *= f
    return out


@dataclass(frozen=True)
class CountReport:
    proof_body: int
    statement: int

    @property
    def agree(self) -> bool:
        return self.proof_body == self.statement


def count_reduced(t: Triple) -> CountReport:
    """Closed-form count of reduced solutions.

    ``proof_body`` is phi(a1) b1 w prod_{P1}(p-1)/p prod_{P0}(s-2)/s, the
    value asserted against the oracle. ``statement`` is the simplified
    phi(n) w prod_{P0}(s-2)/s, reported so that disagreements can be logged.
    """
    if not check_condition_C(t):
        raise ValueError(f"{tuple(t)} violates condition C")
    d = decompose(t)
    p1 = _prod(Fraction(p - 1, p) for p in d.P1)
    p0 = _prod(Fraction(s - 2, s) for s in d.P0)
    body = totient(t.a1) * d.b1w * p1 * p0
    stmt = totient(d.n) * d.w * p0
    if body.denominator != 1 or stmt.denominator != 1:
        raise ArithmeticError(f"count formula not integral for {tuple(t)}")
    return CountReport(int(body), int(stmt))


def sieve_T_size(state: SieveState) -> int:
    """|T| = b1 w (1 - prod_{P1}(p-1)/p prod_{P0}(s-2)/s)."""
    d = state.decomposition
    p1 = _prod(Fraction(p - 1, p) for p in d.P1)
    p0 = _prod(Fraction(s - 2, s) for s in d.P0)
    size = state.modulus * (1 - p1 * p0)
    if size.denominator != 1:
        raise ArithmeticError("|T| is not an integer")
    return int(size)


def bad_residues(state: SieveState) -> set[int]:
    """T enumerated directly: residues in [0, b1 w) hit by some bad class."""
    return {rho for rho in range(state.modulus) if any(rho % m == r for r, m in state.classes)}


def inclusion_exclusion(sets: Sequence[Iterable]) -> int:
    """|E_1 u ... u E_k| by the alternating sum over intersections."""
    sets = [frozenset(s) for s in sets]
    total = 0
    for k in range(1, len(sets) + 1):
        sign = 1 if k % 2 else -1
        for combo in itertools.combinations(sets, k):
            total += sign * len(frozenset.intersection(*combo))
    return total
