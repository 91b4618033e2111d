"""Command-line entry point: ``dihedra <command> ...``.

Exit codes: 0 ok, 1 usage or validation error, 2 discrepancy found.
"""
from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from typing import Any, Sequence

from . import _kernels
from .arith import h_double_prime_structure
from .cyclo import (
    CycloNumber,
    RationalAngle,
    angle_sum_condition,
    cos_square_value,
    discriminant_locus,
    product_condition,
)
from .dihedral import DihedralElement, involution_triple
from .lattice import (
    AffineElement,
    DegenerateLabeling,
    GenerationReport,
    affine_order,
    generation_witnesses,
    standard_generators,
    verify_generation,
)
from .reps import build_faithful_rep, rational_inventory
from .triples import (
    Triple,
    bad_residues,
    check_condition_C,
    count_reduced,
    sieve_T_size,
    solve_condition_D,
)

EXIT_OK, EXIT_USAGE, EXIT_DISCREPANCY = 0, 1, 2
JOBS_ENV = "DIHEDRA_JOBS"


class UsageError(Exception):
    pass


# -- serialization ---------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, DihedralElement):
        return str(obj)
    if isinstance(obj, AffineElement):
        return {"v": list(obj.v), "h": str(obj.h)}
    if isinstance(obj, CycloNumber):
        return {"level": obj.level, "coeffs": list(obj.coeffs)}
    if isinstance(obj, RationalAngle):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "infinite"
    return obj


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"))


@dataclasses.dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict
    discrepancy_flags: list[dict]
    timing: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


class Emitter:
    def __init__(self, json_mode: bool, stream=None):
        self.json_mode = json_mode
        self.stream = stream or sys.stdout

    def record(self, obj: Any) -> None:
        print(dumps(obj, pretty=not self.json_mode), file=self.stream)

    def text(self, line: str) -> None:
        print(line, file=self.stream)


# -- triple audit (shared by classify, count, sweep) -----------------------


def audit_triple(t: tuple[int, int, int], oracle: bool = True) -> dict:
    """Batch record: C verdicts, D solution, formula and oracle counts, discrepancies."""
    T = Triple(*t)
    cond = check_condition_C(T)
    sol, state = solve_condition_D(T)
    rec: dict[str, Any] = {
        "triple": list(t),
        "C1": cond.c1,
        "C2": cond.c2,
        "solution": list(sol) if sol is not None else None,
        "count_formula": None,
    }
    flags = []
    oracle_count = _kernels.reduced_count(*t) if oracle else None
    if oracle:
        rec["count_oracle"] = oracle_count
    if cond.holds != (sol is not None) or (oracle and cond.holds != (oracle_count > 0)):
        flags.append({"kind": "equivalence",
                      "details": f"C={cond.holds} D={sol is not None} oracle={oracle_count}"})
    if cond.holds:
        cr = count_reduced(T)
        rec["count_formula"] = cr.proof_body
        rec["count_statement"] = cr.statement
        if oracle and cr.proof_body != oracle_count:
            flags.append({"kind": "count_proof_body",
                          "details": f"formula {cr.proof_body} != oracle {oracle_count}"})
        if not cr.agree:
            flags.append({"kind": "count_statement_formula",
                          "details": f"statement {cr.statement} != proof body {cr.proof_body}"})
    if state is not None:
        closed, direct = sieve_T_size(state), len(bad_residues(state))
        if closed != direct:
            flags.append({"kind": "sieve_T_size",
                          "details": f"c1={state.c1}: closed form {closed} != direct {direct}"})
    rec["discrepancy_flags"] = flags
    return rec


def _audit_chunk(triples: list[tuple[int, int, int]]) -> list[dict]:
    return [audit_triple(t) for t in triples]


def _chunks(items: list, size: int) -> list[list]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def run_sweep(triples: list[tuple[int, int, int]], jobs: int) -> list[dict]:
    """Audit triples, optionally across processes; output keeps input order."""
    if jobs <= 1 or len(triples) < 2000:
        return _audit_chunk(triples)
    parts = _chunks(triples, max(1, len(triples) // (jobs * 8)))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for part in pool.map(_audit_chunk, parts) for r in part]


# -- argument helpers --------------------------------------------------------


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _angle(text: str) -> RationalAngle:
    try:
        return RationalAngle.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _triple(values: Sequence[int]) -> Triple:
    try:
        return Triple(*values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_triples(path: str) -> list[tuple[int, int, int]]:
    fh = sys.stdin if path == "-" else open(path)
    out = []
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                vals = tuple(int(x) for x in parts)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: malformed integer in {line!r}") from None
            if len(vals) != 3:
                raise UsageError(f"{path}:{lineno}: expected three integers, got {len(vals)}")
            out.append(tuple(_triple(vals)))
    return out


def _jobs(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{JOBS_ENV} must be an integer, got {env!r}") from None
    return 1


# -- commands ----------------------------------------------------------------


def cmd_classify(args, out: Emitter) -> int:
    t = _triple(args.triple)
    rec = audit_triple(tuple(t), oracle=False)
    rec["C"] = rec["C1"] and rec["C2"]
    rec["D"] = rec["solution"] is not None
    out.record({k: rec[k] for k in ("triple", "C1", "C2", "C", "D", "solution")})
    return EXIT_OK


def cmd_count(args, out: Emitter) -> int:
    t = _triple(args.triple)
    if not check_condition_C(t):
        raise UsageError(f"{tuple(t)} violates condition C; the count formula does not apply")
    rec = audit_triple(tuple(t), oracle=args.oracle)
    rec.pop("solution")
    out.record(rec)
    return EXIT_DISCREPANCY if rec["discrepancy_flags"] else EXIT_OK


def cmd_sweep(args, out: Emitter) -> int:
    start = time.perf_counter()
    if args.input:
        triples = _read_triples(args.input)
        inputs = {"file": args.input, "count": len(triples)}
    else:
        if args.max is None:
            raise UsageError("sweep needs --max N or --in FILE")
        if args.max < 2:
            raise UsageError("--max must be at least 2")
        rng = range(2, args.max + 1)
        triples = list(itertools.product(rng, rng, rng))
        inputs = {"max": args.max}
    jobs = _jobs(args.jobs)
    records = run_sweep(triples, jobs)
    emit_records = args.records or bool(args.input)
    flags = []
    kinds: dict[str, int] = {}
    for rec in records:
        if emit_records:
            out.record(rec)
        for f in rec["discrepancy_flags"]:
            flags.append({"input": rec["triple"], **f})
            kinds[f["kind"]] = kinds.get(f["kind"], 0) + 1
    outputs = {
        "triples": len(records),
        "condition_C": sum(1 for r in records if r["C1"] and r["C2"]),
        "equivalence_mismatches": kinds.get("equivalence", 0),
        "count_proof_body_mismatches": kinds.get("count_proof_body", 0),
        "count_statement_formula_mismatches": kinds.get("count_statement_formula", 0),
        "sieve_T_size_mismatches": kinds.get("sieve_T_size", 0),
    }
    report = RunReport(
        "sweep", inputs, outputs, flags,
        {"elapsed_s": round(time.perf_counter() - start, 3), "jobs": jobs,
         "backend": _kernels.BACKEND},
    )
    if out.json_mode:
        out.record({"report": report.to_dict()})
    else:
        for k, v in outputs.items():
            out.text(f"{k:38s} {v}")
        out.text(f"{'discrepancy_flags':38s} {len(flags)}")
        out.text(f"{'elapsed_s':38s} {report.timing['elapsed_s']}")
    return EXIT_DISCREPANCY if flags else EXIT_OK


def cmd_involutions(args, out: Emitter) -> int:
    t = _triple(args.triple)
    if not check_condition_C(t):
        raise UsageError(f"{tuple(t)} violates condition C; no such involutions exist")
    it = involution_triple(t)
    out.record({
        "triple": list(t),
        "n": it.n,
        "solution": list(it.solution),
        "adjusted": list(it.adjusted),
        "involutions": [str(x) for x in it.involutions],
        "product_orders": {"s1s2": it.product_orders()[0], "s1s3": it.product_orders()[1],
                           "s2s3": it.product_orders()[2]},
        "pairs_generate_rotations": it.pairs_generate_rotations(),
    })
    return EXIT_OK


def _matrix_text(name: str, rows: list[list[int]]) -> list[str]:
    width = max((len(str(x)) for r in rows for x in r), default=1)
    return [f"{name if i == 0 else ' ' * len(name)} [{' '.join(str(x).rjust(width) for x in r)}]"
            for i, r in enumerate(rows)]


def cmd_repr(args, out: Emitter) -> int:
    if args.n < 3:
        raise UsageError("repr needs N >= 3")
    rep = build_faithful_rep(args.n)
    rec: dict[str, Any] = {"n": args.n, "degree": rep.degree,
                           "G": rep.G.to_rows(), "S": rep.S.to_rows()}
    if args.inventory:
        inv = rational_inventory(args.n)
        rec["inventory"] = [
            {"label": e.label, "degree": e.degree, "kernel": e.kernel,
             "g": e.g.to_rows(), "s": e.s.to_rows()}
            for e in inv.entries
        ]
    if out.json_mode:
        out.record(rec)
        return EXIT_OK
    out.text(f"n = {args.n}, degree = {rep.degree}")
    for line in _matrix_text("G =", rec["G"]) + _matrix_text("S =", rec["S"]):
        out.text(line)
    if args.inventory:
        out.text(f"{'label':8s} {'degree':>6s}  kernel")
        for e in rec["inventory"]:
            out.text(f"{e['label']:8s} {e['degree']:6d}  {e['kernel']}")
    return EXIT_OK


def cmd_snf(args, out: Emitter) -> int:
    p, q, r = args.triple
    if not check_condition_C(_triple((p, q, r))).c1:
        raise UsageError(f"{(p, q, r)} violates C1")
    d, n = h_double_prime_structure(p, q, r)
    out.record({"triple": [p, q, r], "relations": [[p, 0], [0, q], [r, r]],
                "invariant_factors": [d, n], "gcd": math.gcd(p, q, r), "lcm": math.lcm(p, q, r)})
    return EXIT_OK


def cmd_identity(args, out: Emitter) -> int:
    a, b, c = args.angles
    disc = discriminant_locus(a, b, c)
    out.record({
        "angles": [str(a), str(b), str(c)],
        "cos_square": [cos_square_value(x) for x in (a, b, c)],
        "angle_sum_condition": angle_sum_condition(a, b, c),
        "product_condition": product_condition(a, b, c),
        "discriminant": disc.value,
        "double_root": disc.common,
    })
    return EXIT_OK


def cmd_witnesses(args, out: Emitter) -> int:
    t = _triple(args.triple)
    if not check_condition_C(t):
        raise UsageError(f"{tuple(t)} violates condition C")
    gd = standard_generators(*t)
    try:
        certs = generation_witnesses(gd)
    except DegenerateLabeling as exc:
        raise UsageError(str(exc)) from None
    out.record({
        "triple": list(t), "labeled": list(gd.labeled), "n": gd.n,
        "u": gd.u, "v": gd.v, "seed_exponent": gd.seed_exponent, "seed_choice": gd.seed_choice,
        "certificates": [{"index": i, "label": c.label, "word": c.word, "target": c.target}
                         for i, c in enumerate(certs)],
    })
    return EXIT_OK


def cmd_verify(args, out: Emitter) -> int:
    t = _triple(args.triple)
    if not check_condition_C(t):
        raise UsageError(f"{tuple(t)} violates condition C")
    rep: GenerationReport = verify_generation(*t)
    rec = to_jsonable(rep)
    if not args.full:
        rec.pop("schreier_words")
        rec["certificates"] = None if rep.certificates is None else len(rep.certificates)
    out.record(rec)
    return EXIT_OK


def cmd_order(args, out: Emitter) -> int:
    from .arith import totient

    n = args.n
    if n < 3:
        raise UsageError("order needs N >= 3")
    try:
        vec = [int(x) for x in args.vec.split(",")] if args.vec else [0] * totient(n)
    except ValueError:
        raise UsageError(f"malformed vector {args.vec!r}") from None
    if len(vec) != totient(n):
        raise UsageError(f"vector must have phi({n}) = {totient(n)} entries")
    x = AffineElement(n, tuple(vec), DihedralElement(n, args.rot, int(args.refl)))
    out.record({"n": n, "element": x, "order": affine_order(x)})
    return EXIT_OK


# -- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dihedra", description="Integer triples, dihedral groups and lattices.")
    parser.add_argument("--json", action="store_true", help="compact line-delimited JSON output")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="compact line-delimited JSON output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add = lambda name, **kw: sub.add_parser(name, parents=[common], **kw)  # noqa: E731

    def triple_cmd(name, fn, help_):
        p = add(name, help=help_)
        p.add_argument("triple", nargs=3, type=_int, metavar="A")
        p.set_defaults(fn=fn)
        return p

    triple_cmd("classify", cmd_classify, "conditions C and D with a reduced solution")
    p = triple_cmd("count", cmd_count, "closed-form count of reduced solutions")
    p.add_argument("--oracle", action="store_true", help="also count by exhaustive scan")

    p = add("sweep", help="audit every triple in a range or file")
    p.add_argument("--max", type=_int)
    p.add_argument("--jobs", type=_int, help=f"worker processes (default ${JOBS_ENV} or 1)")
    p.add_argument("--in", dest="input", metavar="FILE", help="one triple per line; '-' for stdin")
    p.add_argument("--records", action="store_true", help="emit a record per triple")
    p.set_defaults(fn=cmd_sweep)

    triple_cmd("involutions", cmd_involutions, "three reflections realizing the triple")

    p = add("repr", help="the faithful integer rep of D_N")
    p.add_argument("n", type=_int, metavar="N")
    p.add_argument("--inventory", action="store_true")
    p.set_defaults(fn=cmd_repr)

    p = add("snf", help="invariant factors of <a,b | pa, qb, r(a+b)>")
    p.add_argument("triple", nargs=3, type=_int, metavar="A")
    p.set_defaults(fn=cmd_snf)

    p = add("identity", help="angle-sum vs cosine-product condition")
    p.add_argument("angles", nargs=3, type=_angle, metavar="K/M")
    p.set_defaults(fn=cmd_identity)

    triple_cmd("witnesses", cmd_witnesses, "word certificates for the generation chain")
    p = triple_cmd("verify", cmd_verify, "decide generation of the affine group")
    p.add_argument("--full", action="store_true", help="include Schreier words and certificates")

    p = add("order", help="order of an affine element (v, g^K s^E)")
    p.add_argument("n", type=_int, metavar="N")
    p.add_argument("--rot", type=_int, default=0, metavar="K")
    p.add_argument("--refl", action="store_true")
    p.add_argument("--vec", metavar="V1,V2,...")
    p.set_defaults(fn=cmd_order)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args, Emitter(args.json))
    except UsageError as exc:
        print(f"dihedra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
