import math
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dihedra.arith import smith_normal_form, totient
from dihedra.dihedral import DihedralElement, element_order, identity, reflection, rotation
from dihedra.lattice import (
    AffineElement,
    DegenerateLabeling,
    Verdict,
    action_matrix,
    affine_identity,
    affine_inv,
    affine_order,
    evaluate_program,
    evaluate_word,
    expand_word,
    generation_witnesses,
    quotient_closure_size,
    recheck_report,
    standard_generators,
    verify_generation,
)


@st.composite
def affine(draw, n=None):
    n = draw(st.integers(3, 30)) if n is None else n
    v = draw(st.lists(st.integers(-9, 9), min_size=totient(n), max_size=totient(n)))
    h = DihedralElement(n, draw(st.integers(0, n - 1)), draw(st.integers(0, 1)))
    return AffineElement(n, tuple(v), h)


def test_examples():
    n = 6
    a = AffineElement.translation(n, (1, 2))
    b = AffineElement.translation(n, (3, -1))
    assert a * b == AffineElement.translation(n, (4, 1))
    s = AffineElement.point(reflection(n))
    assert (s * s).is_identity


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        AffineElement(6, (1, 2, 3), identity(6))
    with pytest.raises(ValueError):
        affine_identity(5) * affine_identity(6)


@given(st.data())
def test_semidirect_axioms(data):
    n = data.draw(st.integers(3, 30))
    x, y, z = (data.draw(affine(n)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert (x * affine_inv(x)).is_identity and (affine_inv(x) * x).is_identity
    assert x * affine_identity(n) == x


@given(affine())
def test_inverse_formula(x):
    M_inv = action_matrix(x.h.inverse())
    assert affine_inv(x).v == tuple(-c for c in M_inv.apply(x.v))


def _order_by_powers(x: AffineElement, cap: int) -> int | float:
    y = x
    for k in range(1, cap + 1):
        if y.is_identity:
            return k
        y = y * x
    return math.inf


@given(affine())
def test_order_law(x):
    f = element_order(x.h)
    got = affine_order(x)
    if x.h == identity(x.n):
        assert got == (1 if not any(x.v) else math.inf)
    elif not x.h.refl:
        assert got == f
    else:
        fixed = not any(a + b for a, b in zip(x.v, action_matrix(x.h).apply(x.v)))
        assert got == (2 if fixed else math.inf)
    # direct powers agree (4 f steps are enough to see a finite order)
    assert _order_by_powers(x, 4 * f) == got


def test_order_examples():
    assert affine_order(AffineElement.point(rotation(7))) == 7
    assert affine_order(AffineElement.translation(7, (1, 0, 0, 0, 0, 0))) == math.inf


@pytest.mark.parametrize("t, orders", [((2, 3, 6), (2, 3, 6)), ((6, 15, 10), (6, 15, 10))])
def test_standard_generators(t, orders):
    gd = standard_generators(*t)
    s1, s2, s3 = gd.sigma
    assert (affine_order(s1 * s2), affine_order(s1 * s3), affine_order(s2 * s3)) == orders
    for x in gd.sigma:
        assert affine_order(x) == 2  # the seed makes sigma3 an involution
    assert math.gcd(gd.k[0], gd.labeled[0]) == math.gcd(gd.k[1], gd.labeled[1]) == 1
    assert math.gcd(gd.k[2], gd.labeled[2]) == 1


def test_standard_generators_236_values():
    gd = standard_generators(2, 3, 6)
    assert (gd.u, gd.v, gd.seed_exponent, gd.seed_choice) == (3, 2, 2, "involution")


def test_relabeling_moves_low_valuation_to_q():
    assert standard_generators(6, 10, 15).labeled == (6, 15, 10)
    assert standard_generators(4, 4, 2).labeled == (4, 2, 4)
    assert standard_generators(3, 3, 3).labeled == (3, 3, 3)


def test_standard_generators_rejects_non_C():
    with pytest.raises(ValueError):
        standard_generators(2, 2, 2)


def test_evaluate_word_basics():
    gd = standard_generators(6, 15, 10)
    assert evaluate_word(gd, "").is_identity
    assert evaluate_word(gd, "s1 s1").is_identity
    assert evaluate_word(gd, "s1 s2") == AffineElement.point(rotation(30, gd.u))
    with pytest.raises(ValueError):
        evaluate_word(gd, "s4")
    with pytest.raises(ValueError):
        evaluate_word(gd, "w0")


def test_witnesses_degenerate():
    gd = standard_generators(2, 3, 6)
    with pytest.raises(DegenerateLabeling) as exc:
        generation_witnesses(gd)
    assert exc.value.r1 == 1


@pytest.mark.parametrize("t", [(6, 15, 10), (6, 10, 15), (12, 15, 20)])
def test_witnesses_reevaluate(t):
    gd = standard_generators(*t)
    certs = generation_witnesses(gd)
    assert certs[0].word == "s1 s2"
    values = evaluate_program(gd, certs)
    assert all(v == c.target for v, c in zip(values, certs))
    labels = [c.label for c in certs]
    for needed in ("(0, g)", "(0, s)", "(e, 1)"):
        assert needed in labels
    d = totient(gd.n)
    basis_targets = {c.target.v for c in certs if c.label.startswith("(x^")}
    assert basis_targets == {tuple(int(i == j) for i in range(d)) for j in range(d)}


def test_expanded_words_evaluate_without_references():
    gd = standard_generators(6, 15, 10)
    certs = generation_witnesses(gd)
    # the late basis certificates expand to ~10^5 tokens; the earlier ones cover every rule
    for i, c in enumerate(certs[:12]):
        word = expand_word(certs, i)
        assert all(tok.removesuffix("^-1") in ("s1", "s2", "s3") for tok in word)
        assert evaluate_word(gd, word) == c.target


def test_expand_word_limit():
    gd = standard_generators(6, 15, 10)
    certs = generation_witnesses(gd)
    with pytest.raises(OverflowError):
        expand_word(certs, len(certs) - 1, limit=100)


@pytest.mark.parametrize("t", [(6, 15, 10), (6, 10, 15), (12, 15, 20), (4, 4, 2), (3, 3, 3)])
def test_verify_generated(t):
    rep = verify_generation(*t)
    assert rep.verdict is Verdict.GENERATED
    assert rep.index == 1 and rep.point_group_order == 2 * rep.n
    assert recheck_report(rep) == []


def test_verify_236_obstructed():
    rep = verify_generation(2, 3, 6)
    assert rep.verdict is Verdict.OBSTRUCTED
    assert (rep.prime, rep.index, rep.invariant_factors) == (2, 4, (2, 2))
    qw = rep.quotient_witness
    assert (qw.prime, qw.closure_size, qw.full_size) == (2, 12, 48)
    assert recheck_report(rep) == []
    assert verify_generation(2, 3, 6) == rep


def test_236_translation_subgroup_by_search():
    """Independent of the verifier: a bounded word search finds translations
    spanning 2*Lambda, and the mod-2 image has exactly |D_6| elements, so the
    translation subgroup is exactly 2*Lambda."""
    gd = standard_generators(2, 3, 6)
    n = gd.n
    start = affine_identity(n)
    seen = {start}
    queue = deque([start])
    found = []
    while queue and len(seen) < 4000:
        x = queue.popleft()
        for s in gd.sigma:
            y = x * s
            if y not in seen and max(map(abs, y.v)) <= 6:
                seen.add(y)
                queue.append(y)
                if y.is_translation and any(y.v):
                    found.append(y.v)
    assert smith_normal_form(found) == (2, 2)
    assert all(a % 2 == 0 for v in found for a in v)

    mod2 = {(tuple(a % 2 for a in x.v), x.h) for x in seen}
    assert len(mod2) == 12 == quotient_closure_size(gd, 2)
