"""Integer matrix representations of D_n built from cyclotomic polynomials.

The faithful rep acts on Z[x]/(Phi_n) in the power basis: g is
multiplication by x (the companion matrix of Phi_n), and s sends x^(i-1)
to -x^(1-i). No choice of starting vector is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import IntMatrix, cyclotomic_poly, determinant, divisors, poly_divmod, totient
from .dihedral import DihedralElement, all_elements, cyclic_subgroup_class_count

__all__ = [
    "RepMatrixPair",
    "RepEntry",
    "RepInventory",
    "companion_matrix",
    "reflection_matrix",
    "build_faithful_rep",
    "rep_of_element",
    "quotient_rep",
    "degree_one_reps",
    "rational_inventory",
    "charpoly",
    "kernel",
    "is_unimodular",
]


def companion_matrix(m: int) -> IntMatrix:
    """Matrix of multiplication by x on Z[x]/(Phi_m), columns = images of x^j."""
    phi = cyclotomic_poly(m).coeffs
    d = len(phi) - 1
    cols = []
    for j in range(d - 1):
        col = [0] * d
        col[j + 1] = 1
        cols.append(col)
    cols.append([-c for c in phi[:d]])
    return IntMatrix.from_columns(cols)


def _power_mod(k: int, m: int) -> list[int]:
    """Coefficients of x^(k mod m) reduced mod Phi_m, padded to phi(m)."""
    phi = cyclotomic_poly(m).coeffs
    d = len(phi) - 1
    k %= m
    mono = [0] * k + [1]
    _, rem = poly_divmod(mono, phi)
    rem = list(rem) + [0] * d
    return rem[:d]


def reflection_matrix(m: int) -> IntMatrix:
    """Column i (0-based) is -(x^(-i) mod Phi_m)."""
    d = totient(m)
    return IntMatrix.from_columns([[-c for c in _power_mod(-i, m)] for i in range(d)])


@dataclass(frozen=True)
class RepMatrixPair:
    n: int
    level: int
    G: IntMatrix
    S: IntMatrix

    @property
    def degree(self) -> int:
        return self.G.rows


@lru_cache(maxsize=None)
def _level_pair(n: int, level: int) -> RepMatrixPair:
    return RepMatrixPair(n, level, companion_matrix(level), reflection_matrix(level))


def build_faithful_rep(n: int) -> RepMatrixPair:
    if n < 3:
        raise ValueError(f"the faithful rep is built for n >= 3, got {n}")
    return _level_pair(n, n)


def rep_of_element(rep: RepMatrixPair, x: DihedralElement) -> IntMatrix:
    """Image of g^k s^refl, i.e. G^k S^refl."""
    if x.n != rep.n:
        raise ValueError(f"element of D_{x.n} given to a rep of D_{rep.n}")
    out = rep.G ** x.k
    return out @ rep.S if x.refl else out


def quotient_rep(n: int, e: int) -> RepMatrixPair:
    """Rep of D_n factoring through D_e: g -> companion of Phi_e. Kernel is <g^e>."""
    if e < 3 or n % e:
        raise ValueError(f"quotient level must be a divisor of {n} that is >= 3, got {e}")
    return _level_pair(n, e)


def kernel(rep: RepMatrixPair) -> frozenset[DihedralElement]:
    """Elements of D_n mapped to the identity, by enumeration."""
    return frozenset(x for x in all_elements(rep.n) if rep_of_element(rep, x).is_identity)


@dataclass(frozen=True)
class RepEntry:
    label: str
    degree: int
    kernel: str
    g: IntMatrix
    s: IntMatrix


def _scalar(x: int) -> IntMatrix:
    return IntMatrix(1, 1, (x,))


def degree_one_reps(n: int) -> list[RepEntry]:
    """R0 (trivial), R1 (s -> -1); for even n also R2 (g, s -> -1) and R1xR2 (g -> -1)."""
    if n < 3:
        raise ValueError("degree_one_reps needs n >= 3")
    out = [
        RepEntry("R0", 1, "D_n", _scalar(1), _scalar(1)),
        RepEntry("R1", 1, "<g>", _scalar(1), _scalar(-1)),
    ]
    if n % 2 == 0:
        out.append(RepEntry("R2", 1, "<g^2, gs>", _scalar(-1), _scalar(-1)))
        out.append(RepEntry("R1xR2", 1, "<g^2, s>", _scalar(-1), _scalar(1)))
    return out


@dataclass(frozen=True)
class RepInventory:
    n: int
    entries: tuple[RepEntry, ...]

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def rational_inventory(n: int) -> RepInventory:
    entries = degree_one_reps(n)
    for e in divisors(n):
        if e >= 3:
            rep = quotient_rep(n, e)
            label = "R_n" if e == n else f"R_{e}"
            entries.append(RepEntry(label, rep.degree, f"<g^{e}>", rep.G, rep.S))
    inv = RepInventory(n, tuple(entries))
    if len(inv) != cyclic_subgroup_class_count(n):
        raise ArithmeticError(f"inventory for n={n} has {len(inv)} entries")
    return inv


def charpoly(M: IntMatrix) -> tuple[int, ...]:
    """det(xI - M), ascending coefficients, by Faddeev-LeVerrier."""
    d = M.rows
    if d != M.cols:
        raise ValueError("charpoly needs a square matrix")
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    N = IntMatrix.identity(d)
    A = M
    for k in range(1, d + 1):
        AN = A @ N
        c = Fraction(-AN.trace(), k)
        coeffs[d - k] = c
        if c.denominator != 1:
            raise ArithmeticError("non-integral coefficient for an integer matrix")
        N = IntMatrix(d, d, tuple(x + (int(c) if i % (d + 1) == 0 else 0) for i, x in enumerate(AN.entries)))
    return tuple(int(c) for c in coeffs)


def is_unimodular(M: IntMatrix) -> bool:
    return abs(determinant(M)) == 1
