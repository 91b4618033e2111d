"""The affine group Lambda x| D_n, Lambda = Z[x]/(Phi_n) with D_n acting through
the faithful integer rep.

Elements are pairs (v, h) with (v1, h1)(v2, h2) = (v1 + M(h1) v2, h1 h2).
Three generators are built from a condition-D solution, and whether they
generate the whole group is decided exactly: Schreier generators give the
translation subgroup, Smith normal form gives its index.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .arith import (
    IntMatrix,
    inverse_mod,
    prime_set,
    smith_normal_form,
    totient,
    valuation,
    xgcd,
)
from .dihedral import (
    DihedralElement,
    element_order,
    generated_subgroup,
    identity,
    reflection,
    rotation,
)
from .reps import build_faithful_rep, rep_of_element
from .triples import Triple, check_condition_C, decompose, solve_condition_D

__all__ = [
    "AffineElement",
    "affine_identity",
    "affine_mul",
    "affine_inv",
    "affine_order",
    "action_matrix",
    "GeneratorData",
    "standard_generators",
    "WordCertificate",
    "parse_word",
    "evaluate_word",
    "evaluate_program",
    "expand_word",
    "DegenerateLabeling",
    "generation_witnesses",
    "Verdict",
    "QuotientWitness",
    "GenerationReport",
    "verify_generation",
    "quotient_closure_size",
    "recheck_report",
]

Vector = tuple[int, ...]


@lru_cache(maxsize=64)
def _action_rows(n: int) -> tuple[tuple[Vector, ...], ...]:
    """Rows of M(g^k s^e) for index 2k + e, as tuples of row tuples."""
    rep = build_faithful_rep(n)
    out = []
    for k in range(n):
        for e in (0, 1):
            M = rep_of_element(rep, DihedralElement(n, k, e))
            out.append(tuple(tuple(r) for r in M.to_rows()))
    return tuple(out)


def action_matrix(h: DihedralElement) -> IntMatrix:
    return IntMatrix.from_rows(_action_rows(h.n)[2 * h.k + h.refl])


def _act(h: DihedralElement, v: Vector) -> Vector:
    rows = _action_rows(h.n)[2 * h.k + h.refl]
    return tuple(sum(a * b for a, b in zip(r, v)) for r in rows)


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _scale(c: int, v: Vector) -> Vector:
    return tuple(c * a for a in v)


@dataclass(frozen=True)
class AffineElement:
    n: int
    v: Vector
    h: DihedralElement

    def __post_init__(self):
        if self.h.n != self.n:
            raise ValueError("point part lives in a different dihedral group")
        v = tuple(int(x) for x in self.v)
        if len(v) != totient(self.n):
            raise ValueError(f"translation must have length phi({self.n}) = {totient(self.n)}")
        object.__setattr__(self, "v", v)

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return affine_mul(self, other)

    def inverse(self) -> "AffineElement":
        return affine_inv(self)

    def __pow__(self, m: int) -> "AffineElement":
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        out = affine_identity(self.n)
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    @property
    def is_translation(self) -> bool:
        return self.h == identity(self.n)

    @property
    def is_identity(self) -> bool:
        return self.is_translation and not any(self.v)

    @classmethod
    def translation(cls, n: int, v: Sequence[int]) -> "AffineElement":
        return cls(n, tuple(v), identity(n))

    @classmethod
    def point(cls, h: DihedralElement) -> "AffineElement":
        return cls(h.n, (0,) * totient(h.n), h)


def affine_identity(n: int) -> AffineElement:
    return AffineElement.point(identity(n))


def affine_mul(x: AffineElement, y: AffineElement) -> AffineElement:
    if x.n != y.n:
        raise ValueError(f"cannot multiply elements at levels {x.n} and {y.n}")
    return AffineElement(x.n, _add(x.v, _act(x.h, y.v)), x.h * y.h)


def affine_inv(x: AffineElement) -> AffineElement:
    hi = x.h.inverse()
    return AffineElement(x.n, _scale(-1, _act(hi, x.v)), hi)


@lru_cache(maxsize=4096)
def _norm_rows(h: DihedralElement) -> tuple[Vector, ...]:
    """Rows of sum_{j < order(h)} M(h)^j."""
    f = element_order(h)
    d = totient(h.n)
    acc = [[0] * d for _ in range(d)]
    p = identity(h.n)
    for _ in range(f):
        rows = _action_rows(h.n)[2 * p.k + p.refl]
        for i in range(d):
            for j in range(d):
                acc[i][j] += rows[i][j]
        p = p * h
    return tuple(tuple(r) for r in acc)


def affine_order(x: AffineElement) -> int | float:
    """order(h) when sum_{j<f} M(h)^j v vanishes, else math.inf."""
    f = element_order(x.h)
    w = tuple(sum(a * b for a, b in zip(r, x.v)) for r in _norm_rows(x.h))
    return f if not any(w) else math.inf


# -- the three generators --------------------------------------------------


def _power_vector(n: int, i: int) -> Vector:
    """Coordinates of x^i mod Phi_n."""
    e1 = (1,) + (0,) * (totient(n) - 1)
    return _act(rotation(n, i), e1)


@dataclass(frozen=True)
class GeneratorData:
    triple: tuple[int, int, int]  # as given
    labeled: tuple[int, int, int]  # (p, q, r) after relabeling
    n: int
    p1: int
    q1: int
    r1: int
    d: int
    solution: tuple[int, int, int]
    u: int
    v: int
    k: tuple[int, int, int]
    seed_exponent: int
    seed_choice: str  # "involution" or "literal"
    e: Vector
    sigma: tuple[AffineElement, AffineElement, AffineElement]


def _relabel(t: Triple) -> tuple[int, int, int]:
    """For even n put the entry with the smaller 2-adic valuation in the middle."""
    a = tuple(t)
    n = t.n
    if n % 2:
        return a
    vn = valuation(2, n)
    low = [i for i in range(3) if valuation(2, a[i]) < vn]
    if len(low) != 1:
        raise ArithmeticError(f"{a}: expected exactly one entry below v2(n)")
    i = low[0]
    rest = [a[j] for j in range(3) if j != i]
    return rest[0], a[i], rest[1]


def standard_generators(p: int, q: int, r: int) -> GeneratorData:
    t = Triple(p, q, r)
    if not check_condition_C(t):
        raise ValueError(f"{(p, q, r)} violates condition C")
    lab = Triple(*_relabel(t))
    dec = decompose(lab)
    n = dec.n
    p1, q1, r1 = dec.b
    sol, _ = solve_condition_D(lab)
    c1, c2, c3 = sol
    u = (-p1 * c1) % n
    v = (q1 * c2) % n
    k = (-c1, c2, -c3)
    g = math.gcd(2, n)
    if (-v) % g == 0:
        i = ((-v // g) * inverse_mod(2 // g, n // g)) % (n // g) if n // g > 1 else 0
        choice = "involution"
    else:
        i = 1
        choice = "literal"
    e = _power_vector(n, i)
    s = reflection(n, 0)
    zero = (0,) * totient(n)
    sig = (
        AffineElement(n, zero, s),
        AffineElement(n, zero, s * rotation(n, u)),
        AffineElement(n, e, s * rotation(n, v)),
    )
    gd = GeneratorData(
        (p, q, r), tuple(lab), n, p1, q1, r1, dec.w, tuple(sol), u, v, k, i, choice, e, sig
    )
    got = (affine_order(sig[0] * sig[1]), affine_order(sig[0] * sig[2]), affine_order(sig[1] * sig[2]))
    if got != tuple(lab):
        raise ArithmeticError(f"generator product orders {got} != {tuple(lab)}")
    return gd


# -- words and certificates -----------------------------------------------

_TOKEN = re.compile(r"^(s[123]|w\d+)(?:\^(-?\d+))?$")


def parse_word(word: str | Sequence[str]) -> list[tuple[str, int]]:
    tokens = word.split() if isinstance(word, str) else list(word)
    out = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"unknown token {tok!r}")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return out


def _fmt(name: str, exp: int) -> str:
    return name if exp == 1 else f"{name}^{exp}"


def evaluate_word(
    gd: GeneratorData, word: str | Sequence[str], refs: Sequence[AffineElement] = ()
) -> AffineElement:
    """Left-to-right product; ``wK`` tokens refer to refs[K]."""
    out = affine_identity(gd.n)
    for name, exp in parse_word(word):
        if name[0] == "s":
            base = gd.sigma[int(name[1]) - 1]
        else:
            idx = int(name[1:])
            if idx >= len(refs):
                raise ValueError(f"reference {name} to a certificate not yet defined")
            base = refs[idx]
        out = out * base**exp
    return out


@dataclass(frozen=True)
class WordCertificate:
    label: str
    target: AffineElement
    word: str


def evaluate_program(gd: GeneratorData, certs: Sequence[WordCertificate]) -> list[AffineElement]:
    """Evaluate certificates in order, each word seeing only earlier results."""
    values: list[AffineElement] = []
    for c in certs:
        values.append(evaluate_word(gd, c.word, values))
    return values


def expand_word(certs: Sequence[WordCertificate], index: int, limit: int = 10**6) -> list[str]:
    """Inline every reference, leaving only s1/s2/s3 tokens (with +-1 exponents)."""
    cache: dict[int, list[str]] = {}

    def invert(w: list[str]) -> list[str]:
        return [t[:-3] if t.endswith("^-1") else t + "^-1" for t in reversed(w)]

    def expand(i: int) -> list[str]:
        if i in cache:
            return cache[i]
        out: list[str] = []
        for name, exp in parse_word(certs[i].word):
            base = [name] if name[0] == "s" else expand(int(name[1:]))
            piece = base if exp > 0 else invert(base)
            out.extend(piece * abs(exp))
            if len(out) > limit:
                raise OverflowError(f"expanded word exceeds {limit} tokens")
        cache[i] = out
        return out

    return expand(index)


def _centered(x: int, n: int) -> int:
    """Representative of x mod n in (-n/2, n/2], keeping expanded words short."""
    x %= n
    return x - n if x > n // 2 else x


class DegenerateLabeling(ValueError):
    def __init__(self, triple, q1: int, r1: int):
        self.triple, self.q1, self.r1 = triple, q1, r1
        super().__init__(
            f"{triple}: the certificate chain needs q1 >= 2 and r1 >= 2, got q1={q1}, r1={r1}"
        )


def generation_witnesses(gd: GeneratorData) -> list[WordCertificate]:
    """Certificates, in dependency order, that the generators reach (0, g), (0, s)
    and a translation by every basis vector of Lambda.

    Each word may use s1, s2, s3 and earlier certificates wK (with integer
    exponents). Every target is checked against its word before returning.
    """
    if gd.q1 < 2 or gd.r1 < 2:
        raise DegenerateLabeling(gd.labeled, gd.q1, gd.r1)
    n, p = gd.n, gd.labeled[0]
    certs: list[WordCertificate] = []
    values: list[AffineElement] = []

    def add(label: str, target: AffineElement, word: str) -> int:
        got = evaluate_word(gd, word, values)
        if got != target:
            raise ArithmeticError(f"certificate {label!r} does not evaluate to its target")
        certs.append(WordCertificate(label, target, word))
        values.append(got)
        return len(certs) - 1

    def rot(k: int) -> AffineElement:
        return AffineElement.point(rotation(n, k))

    def trans(v: Vector) -> AffineElement:
        return AffineElement.translation(n, v)

    w_u = add("(0, g^u)", rot(gd.u), "s1 s2")
    k1 = (gd.u // gd.p1) % p
    m = inverse_mod(k1, p) if p > 1 else 0
    w_rho = add("(0, g^p1)", rot(gd.p1), f"w{w_u}^{m}")
    w_y = add("(e, g^-v)", AffineElement(n, gd.e, rotation(n, -gd.v)), "s3 s1")

    t_cache: dict[int, int] = {}

    def t_k(k: int) -> int:
        if k not in t_cache:
            target = trans(_add(_act(rotation(n, gd.p1 * k), gd.e), _scale(-1, gd.e)))
            t_cache[k] = add(
                f"t_{k}", target, f"w{w_rho}^{k} w{w_y} w{w_rho}^{-k} w{w_y}^-1"
            )
        return t_cache[k]

    def geometric(count: int, step: int, label: str) -> int:
        refs = [t_k(step * j) for j in range(1, count)]
        return add(label, trans(_scale(-count, gd.e)), " ".join(f"w{i}" for i in refs))

    w_q = geometric(gd.q1, gd.r1 * gd.d, "-q1 e")
    w_r = geometric(gd.r1, gd.q1 * gd.d, "-r1 e")
    g0, a, b = xgcd(gd.q1, gd.r1)
    if g0 != 1:
        raise ArithmeticError("q1 and r1 are not coprime")
    w_e = add("(e, 1)", trans(gd.e), f"w{w_q}^{-a} w{w_r}^{-b}")
    w_v = add("(0, g^v)", rot(gd.v), f"s1^-1 s3^-1 w{w_e}")

    g_uv = math.gcd(gd.u, gd.v, n)
    if g_uv != 1:
        raise ArithmeticError(f"gcd(u, v, n) = {g_uv}; <g^u, g^v> is not all of <g>")
    # a' u + b' v = 1 mod n
    h, a1, b1 = xgcd(gd.u, gd.v)
    scale = inverse_mod(h, n)
    a1, b1 = _centered(a1 * scale, n), _centered(b1 * scale, n)
    w_g = add("(0, g)", rot(1), f"w{w_u}^{a1} w{w_v}^{b1}")
    add("(0, s)", AffineElement.point(reflection(n, 0)), "s1")

    d = totient(n)
    for j in range(d):
        shift = _centered(j - gd.seed_exponent, n)
        basis = tuple(int(i == j) for i in range(d))
        add(f"(x^{j}, 1)", trans(basis), f"w{w_g}^{shift} w{w_e} w{w_g}^{-shift}")
    return certs


# -- generation verifier ---------------------------------------------------


class Verdict(str, Enum):
    GENERATED = "generated"
    OBSTRUCTED = "obstructed"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class QuotientWitness:
    """Closure of the generator images in (Lambda / prime Lambda) x| D_n."""

    prime: int
    closure_size: int
    full_size: int


@dataclass(frozen=True)
class GenerationReport:
    triple: tuple[int, int, int]
    labeled: tuple[int, int, int]
    n: int
    verdict: Verdict
    point_group_order: int
    rank: int
    invariant_factors: tuple[int, ...]
    index: int | None  # None when the translation part has lower rank
    prime: int | None
    mod_prime_rank: int | None
    seed_choice: str
    seed_exponent: int
    schreier_words: tuple[str, ...]
    quotient_witness: QuotientWitness | None
    certificates: tuple[WordCertificate, ...] | None = None
    diagnostics: tuple[str, ...] = field(default_factory=tuple)


def _invert_tokens(word: list[str]) -> list[str]:
    return [t[:-3] if t.endswith("^-1") else t + "^-1" for t in reversed(word)]


def _transversal(gd: GeneratorData) -> dict[DihedralElement, tuple[AffineElement, list[str]]]:
    """For every reachable point h, some element of <sigma> over h and its word (BFS)."""
    start = affine_identity(gd.n)
    out = {start.h: (start, [])}
    queue = deque([start.h])
    while queue:
        h = queue.popleft()
        x, w = out[h]
        for i, sig in enumerate(gd.sigma):
            y = x * sig
            if y.h not in out:
                out[y.h] = (y, w + [f"s{i + 1}"])
                queue.append(y.h)
    return out


def _rank_mod(rows: Iterable[Vector], prime: int) -> int:
    basis: dict[int, list[int]] = {}
    for r in rows:
        r = [x % prime for x in r]
        for piv, b in basis.items():
            if r[piv]:
                c = r[piv]
                r = [(x - c * y) % prime for x, y in zip(r, b)]
        nz = next((i for i, x in enumerate(r) if x), None)
        if nz is None:
            continue
        inv = pow(r[nz], -1, prime)
        r = [(x * inv) % prime for x in r]
        for piv, b in list(basis.items()):
            if b[nz]:
                c = b[nz]
                basis[piv] = [(x - c * y) % prime for x, y in zip(b, r)]
        basis[nz] = r
    return len(basis)


def _submodule_rank(rows: list[Vector], n: int, prime: int) -> int:
    """Rank mod prime of the D_n-submodule generated by ``rows``."""
    gens = (rotation(n, 1), reflection(n, 0))
    span = list(rows)
    rank = _rank_mod(span, prime)
    while True:
        span = span + [_act(h, r) for h in gens for r in span]
        new = _rank_mod(span, prime)
        if new == rank:
            return rank
        rank = new


def quotient_closure_size(gd: GeneratorData, prime: int, limit: int = 2_000_000) -> int:
    """Order of the image of <sigma> in (Lambda / prime Lambda) x| D_n, by BFS."""
    n = gd.n

    def reduce(x: AffineElement) -> tuple[Vector, int, int]:
        return tuple(a % prime for a in x.v), x.h.k, x.h.refl

    gens = gd.sigma
    start = affine_identity(n)
    seen = {reduce(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                y = AffineElement(n, tuple(a % prime for a in y.v), y.h)
                key = reduce(y)
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise OverflowError("quotient closure exceeds the enumeration limit")
        frontier = nxt
    return len(seen)


def verify_generation(
    p: int, q: int, r: int, *, certificates: bool = True, quotient_limit: int = 200_000
) -> GenerationReport:
    """Decide whether sigma1, sigma2, sigma3 generate all of Lambda x| D_n.

    The point parts must generate D_n. The translation subgroup of <sigma> is
    then generated by the Schreier elements t s (transversal of t s)^-1, and
    its index in Lambda is read off its Smith normal form. When the index is
    not 1, a prime where the D_n-submodule mod that prime is proper is
    reported as the obstruction.
    """
    gd = standard_generators(p, q, r)
    n = gd.n
    d = totient(n)
    diags: list[str] = []
    points = generated_subgroup([s.h for s in gd.sigma])
    trans = _transversal(gd)

    schreier_vecs: list[Vector] = []
    schreier_words: list[str] = []
    for h, (x, w) in sorted(trans.items(), key=lambda kv: (kv[0].refl, kv[0].k)):
        for i, sig in enumerate(gd.sigma):
            y = x * sig
            z, wz = trans[y.h]
            t = y * z.inverse()
            if not t.is_translation:
                raise ArithmeticError("Schreier element has nontrivial point part")
            if any(t.v):
                schreier_vecs.append(t.v)
                schreier_words.append(" ".join(w + [f"s{i + 1}"] + _invert_tokens(wz)))

    if schreier_vecs:
        sf = smith_normal_form(schreier_vecs)
        sf = tuple(sf) + (0,) * (d - len(sf))
    else:
        sf = (0,) * d
    rank = sum(1 for x in sf if x)
    index = math.prod(sf) if rank == d else None

    certs = None
    if certificates:
        try:
            certs = tuple(generation_witnesses(gd))
        except DegenerateLabeling as exc:
            diags.append(str(exc))

    prime = None
    mod_rank = None
    if points.order != 2 * n:
        verdict = Verdict.OBSTRUCTED
        diags.append(f"point parts generate a subgroup of order {points.order} < {2 * n}")
    elif index == 1:
        verdict = Verdict.GENERATED
    else:
        candidates = sorted(prime_set(index)) if index is not None else [2]
        for pi in candidates:
            rk = _submodule_rank(schreier_vecs, n, pi)
            if rk < d:
                prime, mod_rank = pi, rk
                break
        verdict = Verdict.OBSTRUCTED if prime is not None else Verdict.INCONCLUSIVE

    witness = None
    wp = prime if prime is not None else 2
    full = wp**d * 2 * n
    if full <= quotient_limit:
        witness = QuotientWitness(wp, quotient_closure_size(gd, wp), full)

    return GenerationReport(
        triple=(p, q, r),
        labeled=gd.labeled,
        n=n,
        verdict=verdict,
        point_group_order=points.order,
        rank=rank,
        invariant_factors=sf,
        index=index,
        prime=prime,
        mod_prime_rank=mod_rank,
        seed_choice=gd.seed_choice,
        seed_exponent=gd.seed_exponent,
        schreier_words=tuple(schreier_words),
        quotient_witness=witness,
        certificates=certs,
        diagnostics=tuple(diags),
    )


def recheck_report(report: GenerationReport) -> list[str]:
    """Independently re-derive the checkable parts of a report; returns problems."""
    problems: list[str] = []
    gd = standard_generators(*report.triple)
    d = totient(gd.n)
    vecs = []
    for w in report.schreier_words:
        x = evaluate_word(gd, w)
        if not x.is_translation:
            problems.append(f"Schreier word {w!r} is not a translation")
        vecs.append(x.v)
    sf = smith_normal_form(vecs) if vecs else ()
    sf = tuple(sf) + (0,) * (d - len(sf))
    if sf != report.invariant_factors:
        problems.append(f"invariant factors {sf} != reported {report.invariant_factors}")
    if report.quotient_witness is not None:
        qw = report.quotient_witness
        size = quotient_closure_size(gd, qw.prime)
        if size != qw.closure_size:
            problems.append(f"quotient closure {size} != reported {qw.closure_size}")
        if report.verdict is Verdict.GENERATED and size != qw.full_size:
            problems.append("generation reported but the quotient closure is proper")
        if report.verdict is Verdict.OBSTRUCTED and qw.prime == report.prime and size == qw.full_size:
            problems.append("obstruction reported but the quotient closure is full")
    if report.certificates:
        values = evaluate_program(gd, report.certificates)
        for c, v in zip(report.certificates, values):
            if v != c.target:
                problems.append(f"certificate {c.label!r} does not re-evaluate")
    return problems
