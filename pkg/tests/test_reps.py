import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from dihedra.arith import IntMatrix, cyclotomic_poly, determinant, moebius
from dihedra.dihedral import DihedralElement, cyclic_subgroup_class_count, identity, reflection, rotation
from dihedra.reps import (
    build_faithful_rep,
    charpoly,
    degree_one_reps,
    kernel,
    quotient_rep,
    rational_inventory,
    rep_of_element,
)


@pytest.mark.parametrize(
    "n, G, S",
    [
        (3, [[0, -1], [1, -1]], [[-1, 1], [0, 1]]),
        (4, [[0, -1], [1, 0]], [[-1, 0], [0, 1]]),
        (6, [[0, -1], [1, 1]], [[-1, -1], [0, 1]]),
    ],
)
def test_faithful_rep_examples(n, G, S):
    rep = build_faithful_rep(n)
    assert rep.G.to_rows() == G and rep.S.to_rows() == S
    Gm, Sm = sympy.Matrix(G), sympy.Matrix(S)
    assert Sm * Sm == sympy.eye(2)
    assert Sm * Gm * Sm == Gm.inv()


def test_rejects_small_n():
    with pytest.raises(ValueError):
        build_faithful_rep(2)


@pytest.mark.parametrize("n", range(3, 41))
def test_relations(n):
    rep = build_faithful_rep(n)
    G, S = rep.G, rep.S
    assert rep.degree == len(cyclotomic_poly(n).coeffs) - 1
    powers = [IntMatrix.identity(rep.degree)]
    for _ in range(n):
        powers.append(powers[-1] @ G)
    assert powers[n].is_identity
    assert not any(P.is_identity for P in powers[1:n])
    assert (S @ S).is_identity
    assert S @ G @ S == powers[n - 1]
    assert G.trace() == moebius(n)
    assert abs(determinant(G)) == 1 == abs(determinant(S))


@pytest.mark.parametrize("n", [3, 5, 8, 12, 15, 21, 30, 40])
def test_charpoly_against_sympy(n):
    G = build_faithful_rep(n).G
    x = sympy.symbols("x")
    want = sympy.Matrix(G.to_rows()).charpoly(x).all_coeffs()[::-1]
    assert list(charpoly(G)) == want == list(cyclotomic_poly(n).coeffs)


@given(st.integers(3, 24).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, n - 1), st.integers(0, 1), st.integers(0, n - 1), st.integers(0, 1))))
def test_homomorphism(args):
    n, k1, e1, k2, e2 = args
    rep = build_faithful_rep(n)
    x, y = DihedralElement(n, k1, e1), DihedralElement(n, k2, e2)
    assert rep_of_element(rep, x * y) == rep_of_element(rep, x) @ rep_of_element(rep, y)


def test_rep_of_element_examples():
    rep = build_faithful_rep(6)
    assert rep_of_element(rep, identity(6)).is_identity
    assert rep_of_element(rep, rotation(6, 6)).is_identity
    s, g = reflection(6), rotation(6)
    assert rep_of_element(rep, s * g * s.inverse()) == rep.G ** 5
    with pytest.raises(ValueError):
        rep_of_element(rep, rotation(5))


def test_faithful_kernel_trivial():
    for n in (3, 4, 6, 10):
        assert kernel(build_faithful_rep(n)) == {identity(n)}


@pytest.mark.parametrize("n, e, ks", [(6, 3, {0, 3}), (12, 4, {0, 4, 8}), (6, 6, {0})])
def test_quotient_kernels(n, e, ks):
    rep = quotient_rep(n, e)
    assert {x.k for x in kernel(rep)} == ks
    assert all(not x.refl for x in kernel(rep))


def test_quotient_rejects_bad_level():
    with pytest.raises(ValueError):
        quotient_rep(6, 4)
    with pytest.raises(ValueError):
        quotient_rep(6, 2)


@pytest.mark.parametrize("n, count", [(5, 2), (6, 4)])
def test_degree_one_reps(n, count):
    reps = degree_one_reps(n)
    assert len(reps) == count
    for r in reps:
        g, s = r.g[0, 0], r.s[0, 0]
        assert g in (1, -1) and s in (1, -1)
        assert g**n == 1 and s * g * s == g  # g^n = 1, sgs^-1 = g^-1 (g = +-1)
    assert len({(r.g[0, 0], r.s[0, 0]) for r in reps}) == count


@pytest.mark.parametrize("n, degrees", [(3, [1, 1, 2]), (4, [1, 1, 1, 1, 2]), (6, [1, 1, 1, 1, 2, 2])])
def test_inventory_examples(n, degrees):
    assert rational_inventory(n).degrees == degrees


def test_inventory_counts():
    for n in range(3, 41):
        inv = rational_inventory(n)
        assert len(inv) == cyclic_subgroup_class_count(n)
        # divisors e >= 3 contribute n - phi(1) - phi(2 if n even) since sum of phi(e) over e | n is n
        linear = 4 if n % 2 == 0 else 2
        assert sum(inv.degrees) == linear + n - (2 if n % 2 == 0 else 1)
