"""The dihedral group D_n = <g, s | g^n = s^2 = 1, s g s^-1 = g^-1>.

Elements are g^k s^refl, handled concretely as (k mod n, refl).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

from .arith import divisor_count
from .triples import Triple, check_condition_C, solve_condition_D

__all__ = [
    "DihedralElement",
    "identity",
    "rotation",
    "reflection",
    "dihedral_mul",
    "dihedral_inv",
    "element_order",
    "all_elements",
    "InvolutionClasses",
    "involution_classes",
    "conjugacy_orbit",
    "cyclic_subgroup_class_count",
    "cyclic_subgroup_classes",
    "InvolutionTriple",
    "involution_triple",
    "Subgroup",
    "generated_subgroup",
    "search_involution_triples",
]


@dataclass(frozen=True, order=True)
class DihedralElement:
    n: int
    k: int
    refl: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "k", self.k % self.n)
        object.__setattr__(self, "refl", self.refl & 1)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        return dihedral_mul(self, other)

    def __pow__(self, m: int) -> "DihedralElement":
        if self.refl:
            return self if m % 2 else identity(self.n)
        return DihedralElement(self.n, self.k * m)

    @property
    def is_rotation(self) -> bool:
        return not self.refl

    def inverse(self) -> "DihedralElement":
        return dihedral_inv(self)

    def __str__(self) -> str:
        if self.k == 0:
            return "s" if self.refl else "1"
        rot = "g" if self.k == 1 else f"g^{self.k}"
        return rot + ("s" if self.refl else "")


def identity(n: int) -> DihedralElement:
    return DihedralElement(n, 0, 0)


def rotation(n: int, k: int = 1) -> DihedralElement:
    return DihedralElement(n, k, 0)


def reflection(n: int, k: int = 0) -> DihedralElement:
    """g^k s."""
    return DihedralElement(n, k, 1)


def dihedral_mul(x: DihedralElement, y: DihedralElement) -> DihedralElement:
    if x.n != y.n:
        raise ValueError(f"cannot multiply elements of D_{x.n} and D_{y.n}")
    k = x.k - y.k if x.refl else x.k + y.k
    return DihedralElement(x.n, k, x.refl ^ y.refl)


def dihedral_inv(x: DihedralElement) -> DihedralElement:
    return x if x.refl else DihedralElement(x.n, -x.k)


def element_order(x: DihedralElement) -> int:
    if x.refl:
        return 2
    return x.n // math.gcd(x.n, x.k)


def all_elements(n: int) -> list[DihedralElement]:
    return [DihedralElement(n, k, e) for e in (0, 1) for k in range(n)]


def conjugacy_orbit(x: DihedralElement) -> frozenset[DihedralElement]:
    """Orbit of x under conjugation, by direct enumeration."""
    return frozenset(h * x * h.inverse() for h in all_elements(x.n))


@dataclass(frozen=True)
class InvolutionClasses:
    n: int
    classes: tuple[frozenset[DihedralElement], ...]
    central: DihedralElement | None


def involution_classes(n: int) -> InvolutionClasses:
    """Conjugacy classes of reflections, plus the central involution for even n.

    g^j (g^k s) g^-j = g^(k+2j) s, so for even n the parity of k is invariant.
    """
    if n < 3:
        raise ValueError("involution_classes needs n >= 3")
    if n % 2:
        return InvolutionClasses(n, (frozenset(reflection(n, k) for k in range(n)),), None)
    even = frozenset(reflection(n, k) for k in range(0, n, 2))
    odd = frozenset(reflection(n, k) for k in range(1, n, 2))
    return InvolutionClasses(n, (even, odd), rotation(n, n // 2))


def cyclic_subgroup_class_count(n: int) -> int:
    """Conjugacy classes of cyclic subgroups of D_n: tau(n) + 1 (odd n), tau(n) + 2 (even n)."""
    if n < 3:
        raise ValueError("cyclic_subgroup_class_count needs n >= 3")
    return divisor_count(n) + (2 if n % 2 == 0 else 1)


def cyclic_subgroup_classes(n: int) -> list[frozenset[frozenset[DihedralElement]]]:
    """Brute force: every cyclic subgroup <x>, grouped up to conjugacy."""
    subgroups = {generated_subgroup([x]).elements for x in all_elements(n)}
    group = all_elements(n)
    classes: list[frozenset[frozenset[DihedralElement]]] = []
    seen: set[frozenset[DihedralElement]] = set()
    for H in sorted(subgroups, key=lambda h: (len(h), sorted(h))):
        if H in seen:
            continue
        orbit = frozenset(frozenset(h * x * h.inverse() for x in H) for h in group)
        seen |= orbit
        classes.append(orbit)
    return classes


@dataclass(frozen=True)
class Subgroup:
    n: int
    elements: frozenset[DihedralElement]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: DihedralElement) -> bool:
        return x in self.elements


def generated_subgroup(elems: Iterable[DihedralElement]) -> Subgroup:
    """Closure of the given elements under multiplication."""
    elems = list(elems)
    if not elems:
        raise ValueError("need at least one generator (the group order is unknown otherwise)")
    n = elems[0].n
    if any(x.n != n for x in elems):
        raise ValueError("generators live in different dihedral groups")
    seen = {identity(n)}
    frontier = [identity(n)]
    while frontier:
        nxt = []
        for x in frontier:
            for gen in elems:
                y = x * gen
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(n, frozenset(seen))


@dataclass(frozen=True)
class InvolutionTriple:
    triple: Triple
    n: int
    solution: tuple[int, int, int]
    adjusted: tuple[int, int, int]
    s1: DihedralElement
    s2: DihedralElement
    s3: DihedralElement

    @property
    def involutions(self) -> tuple[DihedralElement, DihedralElement, DihedralElement]:
        return self.s1, self.s2, self.s3

    def product_orders(self) -> tuple[int, int, int]:
        """(order s1 s2, order s1 s3, order s2 s3), designed to be (a2, a3, a1)."""
        return (
            element_order(self.s1 * self.s2),
            element_order(self.s1 * self.s3),
            element_order(self.s2 * self.s3),
        )

    def pairs_generate_rotations(self) -> bool:
        g1, g2, g3 = self.s2 * self.s3, self.s1 * self.s3, self.s1 * self.s2
        full = generated_subgroup([rotation(self.n)]).elements
        return all(
            generated_subgroup(pair).elements == full
            for pair in ((g1, g2), (g1, g3), (g2, g3))
        )


def involution_triple(t: Triple) -> InvolutionTriple:
    """Three reflections whose pairwise products have orders a2, a3, a1.

    A D-solution (c1, c2, c3) is turned into b1 c1 - b2 c2' + b3 c3 = 0 mod n
    by c2' = -c2 mod a2; then s1 = s, s2 = s g^(b2 c2'), s3 = s g^(b3 c3).
    """
    if not check_condition_C(t):
        raise ValueError(f"{tuple(t)} violates condition C; no such involutions exist")
    n = t.n
    if n < 3:
        raise ValueError("dihedral groups here need n >= 3")
    sol, _ = solve_condition_D(t)
    c1, c2, c3 = sol
    b1, b2, b3 = (n // a for a in t)
    c2_adj = (-c2) % t.a2
    if (b1 * c1 - b2 * c2_adj + b3 * c3) % n:
        raise ArithmeticError("sign adjustment broke the congruence")
    s = reflection(n, 0)
    s2 = s * rotation(n, b2 * c2_adj)
    s3 = s * rotation(n, b3 * c3)
    out = InvolutionTriple(t, n, (c1, c2, c3), (c1, c2_adj, c3), s, s2, s3)
    expected = (t.a2, t.a3, t.a1)
    if out.product_orders() != expected:
        raise ArithmeticError(f"product orders {out.product_orders()} != {expected}")
    return out


def search_involution_triples(t: Triple, n: int | None = None) -> list[tuple[int, int, int]]:
    """Exhaustive search in D_n for reflections realizing the triple.

    Returns every (k1, k2, k3) with s_i = g^(k_i) s such that, for some
    assignment of (a1, a2, a3) to the three products, each s_i s_j has the
    assigned order and every pair of the products generates <g>. n defaults
    to lcm(a1, a2, a3).

    s_i s_j = g^(k_i - k_j) depends only on differences, so k1 = 0 is fixed
    without loss (conjugating by a rotation shifts all k_i together, and
    conjugation preserves orders and generation). The search is over the
    remaining n^2 pairs, filtered by the orders of the individual products.
    """
    n = t.n if n is None else n
    if n < 3:
        return []
    order = [n // math.gcd(n, d) for d in range(n)]
    found = []
    targets = set(itertools.permutations(tuple(t)))
    by_order: dict[int, list[int]] = {}
    for d, o in enumerate(order):
        by_order.setdefault(o, []).append(d)
    for a12, a13, a23 in targets:
        for k2 in by_order.get(a12, ()):
            for k3 in by_order.get(a13, ()):
                # products: s1s2 = g^-k2, s1s3 = g^-k3, s2s3 = g^(k2-k3)
                if order[(k2 - k3) % n] != a23:
                    continue
                orders = (a12, a13, a23)
                if all(math.lcm(x, y) == n for x, y in itertools.combinations(orders, 2)):
                    found.append((0, k2, k3))
    return sorted(set(found))
