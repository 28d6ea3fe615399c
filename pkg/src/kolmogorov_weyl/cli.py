"""Command-line front end.

Every subcommand builds a :class:`Report` and prints it as text or, with
``--json``, as JSON.  Exit status: 0 for pass or info, 1 when a
verification fails, 2 for usage and domain errors.  Wall-clock timing
goes to stderr (``--timing``) so stdout stays byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import diffop, solutions, weyl
from .errors import DomainError
from .linalg import BACKEND

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class Report:
    command: list
    outcome: str
    payload: dict
    lines: list = field(default_factory=list)
    timing: float = 0.0

    def to_json(self) -> dict:
        return {"command": self.command, "outcome": self.outcome, "payload": self.payload}

    def render(self) -> str:
        return "\n".join(self.lines + [f"outcome: {self.outcome}"]) + "\n"

    @property
    def exit_code(self) -> int:
        return 1 if self.outcome == FAIL else 0


def _q(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mark(ok: bool) -> str:
    return "ok" if ok else "FAIL"


def parse_operator_expr(text: str) -> weyl.WeylElem:
    return weyl.parse_weyl(text)


# -- subcommands -------------------------------------------------------------

def cmd_relations(args) -> Report:
    lines, checks = [], []
    P = {g: weyl.WeylElem.gen(g) for g in weyl.GENS}
    expected = {("P3", "P0"): 3, ("P1", "P2"): 1, ("P3", "P2"): 0, ("P3", "P1"): 0, ("P2", "P0"): 0, ("P1", "P0"): 0}
    lines.append("presentation:")
    for (a, b), want in expected.items():
        got = weyl.weyl_commutator(P[a], P[b])
        ok = got == want
        checks.append({"kind": "presentation", "pair": [a, b], "value": str(got), "expected": str(want), "pass": ok})
        lines.append(f"  [{a},{b}] = {got}  {_mark(ok)}")
    lines.append("structure constants:")
    rows = diffop.structure_constants_check()
    nonzero = 0
    for r in rows:
        a, b = r["pair"]
        exp = " + ".join(f"{_q(c)}*{n}" for n, c in sorted(r["expected"].items())) or "0"
        nonzero += bool(r["expected"])
        checks.append({"kind": "structure", "pair": [a, b], "expected": exp, "pass": r["pass"]})
        if r["expected"]:
            lines.append(f"  [{a},{b}] = {exp}  {_mark(r['pass'])}")
    n_pass = sum(r["pass"] for r in rows)
    lines.append(f"  {n_pass}/{len(rows)} ordered pairs match ({nonzero} nonzero, {len(rows) - nonzero} zero)")
    lines.append("hat operators:")
    for h in diffop.hat_identities():
        ok = h["reduce_ok"] and h["identity_ok"]
        checks.append(
            {
                "kind": "hat",
                "name": h["name"],
                "reduced": str(h["reduced"]),
                "quotient": str(h["quotient"]),
                "pass": ok,
            }
        )
        lines.append(f"  {h['name']} = ({h['quotient']}) o F + {h['reduced']}  {_mark(ok)}")
    ok = all(c["pass"] for c in checks)
    return Report([], PASS if ok else FAIL, {"checks": checks}, lines)


def cmd_normal_form(args) -> Report:
    a = parse_operator_expr(args.expr)
    return Report([], INFO, {"element": a.to_json(), "text": str(a), "degree": _deg(a.degree())}, [str(a)])


def _deg(d):
    return None if d == float("-inf") else d


def cmd_realize(args) -> Report:
    a = parse_operator_expr(args.expr)
    op = diffop.realize(a)
    return Report(
        [], INFO, {"operator": op.to_json(), "text": str(op), "order": _deg(op.order())}, [str(op)]
    )


def cmd_dims(args) -> Report:
    if args.max_n < 0:
        raise DomainError("--max-n must be non-negative")
    rows, lines = [], ["n enumerated closed sum layer"]
    ok = True
    for n in range(args.max_n + 1):
        enum = len(weyl.basis_ord(n))
        closed = weyl.dim_ord_closed(n)
        total = weyl.dim_ord_sum(n)
        layer = weyl.dim_layer_closed(n)
        good = enum == closed == total and layer == closed - weyl.dim_ord_closed(n - 1)
        ok &= good
        rows.append({"n": n, "enumerated": enum, "closed": closed, "sum": total, "layer": layer, "pass": good})
        lines.append(f"{n} {enum} {closed} {total} {layer}")
    return Report([], PASS if ok else FAIL, {"rows": rows}, lines)


def cmd_basis(args) -> Report:
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    elems = weyl.basis_ord(args.n) if args.kind == "ord" else weyl.basis_deg(args.n)
    lines = [str(e) for e in elems] + [f"size: {len(elems)}"]
    return Report([], INFO, {"kind": args.kind, "n": args.n, "size": len(elems), "elements": [e.to_json() for e in elems]}, lines)


def cmd_polysols(args) -> Report:
    if args.n < 0:
        raise DomainError("--n must be non-negative")
    labels = solutions.solution_labels(args.n)
    basis = solutions.poly_solution_basis(args.n)
    items, lines = [], []
    ok = True
    for (k, l), u in zip(labels, basis):
        res = solutions.residual(u)
        ok &= res.is_zero()
        items.append({"k": k, "l": l, "solution": u.to_json(), "text": str(u), "residual_zero": res.is_zero()})
        lines.append(f"(P3)^{k}(P2)^{l} 1 = {u}")
    full_rank = solutions.span_rank(basis) == len(basis)
    ok &= full_rank and len(basis) == (args.n + 1) * (args.n + 2) // 2
    lines.append(f"size: {len(basis)}  residuals zero: {_mark(all(i['residual_zero'] for i in items))}  rank: {_mark(full_rank)}")
    return Report([], PASS if ok else FAIL, {"n": args.n, "size": len(basis), "full_rank": full_rank, "solutions": items}, lines)


def cmd_apply(args) -> Report:
    a = parse_operator_expr(args.op)
    u = solutions.parse_exppoly(args.sol)
    v = solutions.apply_op(diffop.realize(a), u)
    res_in = solutions.residual(u).is_zero()
    res_out = solutions.residual(v).is_zero()
    lines = [str(v), f"input solves the equation: {res_in}", f"output solves the equation: {res_out}"]
    outcome = FAIL if (res_in and not res_out) else INFO
    return Report([], outcome, {"result": v.to_json(), "text": str(v), "input_residual_zero": res_in, "output_residual_zero": res_out}, lines)


def cmd_group_act(args) -> Report:
    g = solutions.GroupParams(args.alpha, args.beta, args.l0, args.l1, args.l2, args.l3, args.sigma)
    h = solutions.parse_exppoly(args.sol)
    v = solutions.group_act(g, h)
    res_in = solutions.residual(h).is_zero()
    res_out = solutions.residual(v).is_zero()
    lines = [str(v), f"input solves the equation: {res_in}", f"output solves the equation: {res_out}"]
    outcome = FAIL if res_in != res_out else (PASS if res_in else INFO)
    payload = {"params": g.as_dict(), "result": v.to_json(), "text": str(v), "input_residual_zero": res_in, "output_residual_zero": res_out}
    return Report([], outcome, payload, lines)


def cmd_check(args) -> Report:
    u = solutions.parse_exppoly(args.sol)
    res = solutions.residual(u)
    return Report([], PASS if res.is_zero() else FAIL, {"residual": res.to_json(), "text": str(res)}, [f"residual: {res}"])


def cmd_casimir(args) -> Report:
    c = weyl.casimir()
    op = diffop.realize(c)
    comm = {
        name: weyl.weyl_commutator(c, f()).is_zero()
        for name, f in (("hatPt", weyl.hat_pt), ("hatD", weyl.hat_d), ("hatK", weyl.hat_k))
    }
    center_ok = all(comm.values())
    ok = center_ok and c.degree() == 4 and op.order() == 3 and diffop.commutes_with_F(op)
    lines = [
        f"C = {c}",
        f"realized: {op}",
        f"degree: {c.degree()}",
        f"order: {op.order()}",
    ] + [f"[C,{n}] = 0: {_mark(v)}" for n, v in comm.items()]
    payload = {
        "element": c.to_json(),
        "text": str(c),
        "realized": op.to_json(),
        "realized_text": str(op),
        "degree": c.degree(),
        "order": op.order(),
        "commutes": comm,
    }
    return Report([], PASS if ok else FAIL, payload, lines)


def cmd_grading(args) -> Report:
    a = parse_operator_expr(args.expr)
    parts = weyl.grading_decompose(a)
    lines = [f"weight {w}: {e}" for w, e in parts.items()]
    return Report([], INFO, {"components": [{"weight": w, "element": e.to_json()} for w, e in parts.items()]}, lines)


def cmd_centralizer(args) -> Report:
    a, b = parse_operator_expr(args.a), parse_operator_expr(args.b)
    br = weyl.weyl_commutator(a, b)
    ok = br.is_zero()
    return Report([], PASS if ok else FAIL, {"commutator": br.to_json(), "text": str(br), "commute": ok}, [f"[a,b] = {br}"])


def cmd_kernel_decomp(args) -> Report:
    r = solutions.kernel_power_check(args.a, args.b, args.r, args.n)
    payload = {k: (list(v) if isinstance(v, tuple) else v) for k, v in r.items()}
    lines = [f"{k}: {v}" for k, v in payload.items()]
    return Report([], PASS if r["pass"] else FAIL, payload, lines)


def cmd_solve_determining(args) -> Report:
    start = time.monotonic()
    cap = args.degree_cap if args.degree_cap is not None else 4 * args.n
    first = solutions.solve_determining(args.n, cap)
    expected = weyl.dim_ord_closed(args.n)
    payload = {"n": args.n, "degree_cap": cap, "dimension": first["dimension"], "expected": expected, "unknowns": first["unknowns"]}
    lines = [f"n={args.n} cap={cap} dimension={first['dimension']} expected={expected}"]
    budget = args.budget_seconds
    if budget is not None and time.monotonic() - start > budget:
        payload["incomplete"] = True
        lines.append("incomplete: budget spent before the stabilization check")
        return Report([], INFO, payload, lines)
    second = solutions.solve_determining(args.n, cap + 1)
    payload["dimension_cap_plus_1"] = second["dimension"]
    lines.append(f"cap={cap + 1} dimension={second['dimension']}")
    ok = first["dimension"] == second["dimension"] == expected
    return Report([], PASS if ok else FAIL, payload, lines)


def cmd_lie_closure(args) -> Report:
    if args.sample_generators:
        gens = weyl.sample_generators()
    else:
        if not args.gens:
            raise DomainError("give generator expressions or --sample-generators")
        gens = [parse_operator_expr(g) for g in args.gens]
    r = weyl.lie_closure(gens, args.degree_cap, args.iter_cap, budget_seconds=args.budget_seconds)
    payload = {k: v for k, v in r.items() if k != "basis"}
    payload["generators"] = [str(g) for g in gens]
    lines = [f"{k}: {v}" for k, v in payload.items() if k != "generators"]
    if not r["complete"]:
        payload["incomplete"] = True
        lines.append("incomplete: budget expired")
    return Report([], INFO, payload, lines)


# -- argument parsing ----------------------------------------------------------

def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")
    common.add_argument("--budget-seconds", type=float, default=argparse.SUPPRESS, help="time budget for long commands")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS, help="print wall time to stderr")

    p = argparse.ArgumentParser(prog="kolmogorov-weyl", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", default=False)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--timing", action="store_true", default=False)
    sub = p.add_subparsers(dest="cmd", required=True, metavar="command")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("relations", cmd_relations, "check the defining relations and structure constants")
    add("normal-form", cmd_normal_form, "normal form of an operator expression").add_argument("expr")
    add("realize", cmd_realize, "realize an expression as a differential operator").add_argument("expr")
    add("dims", cmd_dims, "dimension table of the order filtration").add_argument("--max-n", type=int, required=True)
    sp = add("basis", cmd_basis, "basis of the order or degree filtration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kind", choices=("ord", "deg"), default="ord")
    add("polysols", cmd_polysols, "polynomial solution basis").add_argument("--n", type=int, required=True)
    sp = add("apply", cmd_apply, "apply a realized expression to a solution")
    sp.add_argument("op")
    sp.add_argument("sol")
    sp = add("group-act", cmd_group_act, "act on a solution by a point symmetry (gamma = 0)")
    for name, default in (("--alpha", "1"), ("--beta", "0"), ("--l0", "0"), ("--l1", "0"), ("--l2", "0"), ("--l3", "0"), ("--sigma", "1")):
        sp.add_argument(name, type=_frac, default=Fraction(default))
    sp.add_argument("sol")
    add("check", cmd_check, "residual of a candidate solution").add_argument("sol")
    add("casimir", cmd_casimir, "the Casimir element and its realization")
    add("grading", cmd_grading, "split an expression by grading weight").add_argument("expr")
    sp = add("centralizer-check", cmd_centralizer, "check that two expressions commute")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("kernel-decomp", cmd_kernel_decomp, "kernel decomposition on polynomial solutions")
    sp.add_argument("--a", choices=("P0", "P1"), required=True)
    sp.add_argument("--b", choices=("P3", "P2"), required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("solve-determining", cmd_solve_determining, "solve the determining equations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--degree-cap", type=int, default=None)
    sp = add("lie-closure", cmd_lie_closure, "truncated Lie closure of generators")
    sp.add_argument("--degree-cap", type=int, required=True)
    sp.add_argument("--iter-cap", type=int, required=True)
    sp.add_argument("--sample-generators", action="store_true")
    sp.add_argument("gens", nargs="*")
    return p


def main(argv: list | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    start = time.monotonic()
    try:
        report = args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.command = argv
    report.timing = time.monotonic() - start
    if args.json:
        sys.stdout.write(json.dumps(report.to_json(), indent=2) + "\n")
    else:
        sys.stdout.write(report.render())
    if args.timing:
        print(f"elapsed: {report.timing:.3f}s (elimination backend: {BACKEND})", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
