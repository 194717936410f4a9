"""Command line interface: ``codepth3 classify | corpus | verify``.

Exit codes: 0 success, 1 input error or failed corpus expectation,
2 ideal rejected by the codepth-3 gate, 3 unclassified invariants,
4 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .audit import run_audit
from .exactlin import DEFAULT_CHARACTERISTIC
from .parsing import (
    BadCharacteristic,
    IdealSpec,
    IdealSyntaxError,
    UnknownVariable,
    parse_ideal,
    parse_ideal_file,
)
from .polyring import NotHomogeneous
from .quotient import QuotientRing, UnboundedSocleSearch
from .toralg import Computation, PipelineError, analyze

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_REJECTED = 2
EXIT_UNCLASSIFIED = 3
EXIT_INVARIANT = 4

CORPUS_NAMES = ("g1", "g2", "g3", "g4", "b1", "b2", "b3", "b4")
INPUT_ERRORS = (IdealSyntaxError, UnknownVariable, NotHomogeneous, BadCharacteristic, OSError, ValueError)


class ExpectationMismatch(RuntimeError):
    def __init__(self, name: str, fields: list[str]):
        super().__init__(f"{name}: mismatch in {', '.join(fields)}")
        self.name = name
        self.fields = fields


def data_dir():
    return resources.files("codepth3") / "data"


def load_corpus_text(name: str) -> str:
    return (data_dir() / f"{name}.ideal").read_text()


def default_expectations() -> dict:
    return json.loads((data_dir() / "expectations.json").read_text())


def _overrides(args) -> dict:
    out = {"char": args.char, "order": args.order, "max_degree": args.max_degree}
    if getattr(args, "vars", None):
        out["names"] = tuple(v.strip() for v in args.vars.split(","))
    return out


def load_input(args) -> tuple[IdealSpec, list]:
    if args.ideal is not None:
        names = tuple(v.strip() for v in (args.vars or "x,y,z").split(","))
        spec, polys = parse_ideal(
            args.ideal, names, args.char or DEFAULT_CHARACTERISTIC, args.order or "degrevlex"
        )
        spec.max_degree = args.max_degree
        return spec, polys
    if args.file is None:
        raise ValueError("give an ideal file or --ideal")
    if args.file in CORPUS_NAMES and not Path(args.file).exists():
        text = load_corpus_text(args.file)
    else:
        text = Path(args.file).read_text()
    return parse_ideal_file(text, _overrides(args))


def compute(spec: IdealSpec, polys) -> Computation:
    if len(spec.names) != 3:
        raise ValueError(f"need exactly 3 variables, got {len(spec.names)}")
    R = QuotientRing(spec.ring(), polys)
    return analyze(R, spec.max_degree, spec.generators)


# ---------- rendering ----------

def _combo(coords, prefix: str, field) -> str:
    parts = []
    for k, c in enumerate(coords):
        c = field.signed(int(c))
        if not c:
            continue
        name = f"{prefix}{k + 1}"
        term = name if abs(c) == 1 else f"{abs(c)}*{name}"
        parts.append(("- " if c < 0 else "+ ") + term)
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def render_tables(comp: Computation) -> str:
    H, T = comp.H, comp.tables
    f = comp.R.field
    lines = []
    for i, prefix in ((1, "e"), (2, "f"), (3, "g")):
        lines.append(f"H{i} representatives:")
        for k, u in enumerate(H.reps[i]):
            lines.append(f"  {prefix}{k + 1} [deg {u.j}] = {u}")
    lines.append("products H1*H1 (a < b, nonzero):")
    for a in range(H.rank(1)):
        for b in range(a + 1, H.rank(1)):
            if T.t11[a, b].any():
                lines.append(f"  e{a + 1}*e{b + 1} = {_combo(T.t11[a, b], 'f', f)}")
    lines.append("products H1*H2 (nonzero):")
    for a in range(H.rank(1)):
        for b in range(H.rank(2)):
            if T.t12[a, b].any():
                lines.append(f"  e{a + 1}*f{b + 1} = {_combo(T.t12[a, b], 'g', f)}")
    return "\n".join(lines)


def render_text(comp: Computation) -> str:
    r = comp.report
    lines = [
        f"ideal:   ({', '.join(r.ideal)})",
        f"char:    {r.char}",
        f"order:   {r.order}",
        f"gate:    {r.gate}",
    ]
    if r.eligible:
        lines += [
            f"mu(I):   {r.mu}",
            f"type:    {r.type}",
            f"ranks:   H1={r.ranks[0]} H2={r.ranks[1]} H3={r.ranks[2]}",
            f"hilbert: {' '.join(map(str, r.hilbert))}",
            f"pqr:     ({r.pqr[0]}, {r.pqr[1]}, {r.pqr[2]})",
            f"class:   {r.label}",
            "checks:  " + " ".join(f"{k}={v}" for k, v in r.checks.items()),
        ]
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2)


# ---------- subcommands ----------

def cmd_classify(args) -> int:
    try:
        spec, polys = load_input(args)
        comp = compute(spec, polys)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PipelineError, UnboundedSocleSearch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    r = comp.report
    if not args.quiet:
        if args.json:
            print(dump_json(r.to_json()))
        else:
            print(render_text(comp))
            if args.tables and r.eligible:
                print(render_tables(comp))
    if not r.eligible:
        print(f"rejected: {r.gate}", file=sys.stderr)
        return EXIT_REJECTED
    if not r.label.classified:
        print(f"unclassified: (p, q, r) = {tuple(r.pqr)}", file=sys.stderr)
        return EXIT_UNCLASSIFIED
    if r.failed_checks():
        print(f"invariant violation: {', '.join(r.failed_checks())}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def compare_expectation(name: str, comp: Computation, expected: dict) -> list[str]:
    r = comp.report
    bad = []
    if not r.eligible:
        return ["gate"]
    if "class" in expected and r.label.to_json() != expected["class"]:
        bad.append("class")
    for key in ("type", "mu", "ranks"):
        if key in expected and getattr(r, key) != expected[key]:
            bad.append(key)
    if "hilbert" in expected:
        want = expected["hilbert"]
        if comp.R.hilbert_values(len(want) - 1) != want:
            bad.append("hilbert")
    return bad


def run_corpus(char=None, order=None, expectations: dict | None = None, max_degree=None) -> list[dict]:
    expectations = default_expectations() if expectations is None else expectations
    results = []
    for name in CORPUS_NAMES:
        spec, polys = parse_ideal_file(
            load_corpus_text(name), {"char": char, "order": order, "max_degree": max_degree}
        )
        comp = compute(spec, polys)
        bad = compare_expectation(name, comp, expectations.get(name, {}))
        results.append({"name": name, "pass": not bad, "mismatches": bad, "report": comp.report.to_json()})
    return results


def cmd_corpus(args) -> int:
    try:
        expectations = None
        if args.expectations:
            expectations = json.loads(Path(args.expectations).read_text())
        results = run_corpus(args.char, args.order, expectations, args.max_degree)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    passed = sum(r["pass"] for r in results)
    if not args.quiet:
        if args.json:
            print(dump_json({"passed": passed, "total": len(results), "results": results}))
        else:
            print(f"{'ideal':<6} {'class':<7} {'type':<5} {'mu':<4} {'ranks':<12} result")
            for res in results:
                rep = res["report"]
                label = rep["class"]
                cls = "-" if label is None else (
                    label["name"] if label["param"] is None else f"{label['name']}({label['param']})"
                )
                ranks = "-" if rep["ranks"] is None else ",".join(map(str, rep["ranks"]))
                verdict = "pass" if res["pass"] else "FAIL " + ",".join(res["mismatches"])
                print(f"{res['name']:<6} {cls:<7} {str(rep['type']):<5} {str(rep['mu']):<4} {ranks:<12} {verdict}")
            print(f"{passed}/{len(results)} pass")
    for res in results:
        if not res["pass"]:
            print(f"mismatch: {res['name']}: {', '.join(res['mismatches'])}", file=sys.stderr)
    return EXIT_OK if passed == len(results) else EXIT_INPUT


def cmd_verify(args) -> int:
    try:
        spec, polys = load_input(args)
        comp = compute(spec, polys)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PipelineError, UnboundedSocleSearch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not comp.report.eligible:
        print(f"rejected: {comp.report.gate}", file=sys.stderr)
        return EXIT_REJECTED
    checks = run_audit(comp, seed=args.seed)
    h = comp.report.ranks
    euler = f"1 - {h[0]} + {h[1]} - {h[2]} = {1 - h[0] + h[1] - h[2]}"
    if not args.quiet:
        if args.json:
            print(dump_json({"checks": {k: ("pass" if v else "fail") for k, v in checks.items()}, "euler_sum": euler}))
        else:
            for k, v in checks.items():
                suffix = f"  ({euler})" if k == "euler" else ""
                print(f"{k:<34} {'PASS' if v else 'FAIL'}{suffix}")
    failed = [k for k, v in checks.items() if not v]
    if failed:
        print(f"InvariantViolation: {', '.join(failed)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _add_input_args(p: argparse.ArgumentParser):
    p.add_argument("file", nargs="?", help="ideal file, or a corpus name (g1..g4, b1..b4)")
    p.add_argument("--ideal", help="inline generator list, e.g. 'x^2, y^2, z^2'")
    p.add_argument("--vars", help="comma-separated variable names for --ideal (default x,y,z)")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--char", type=int, help=f"field characteristic (default {DEFAULT_CHARACTERISTIC})")
    p.add_argument("--order", choices=["degrevlex", "deglex"], help="monomial order")
    p.add_argument("--max-degree", type=int, dest="max_degree", help="cap on internal degrees scanned")
    p.add_argument("--json", action="store_true", help="JSON to stdout")
    p.add_argument("--quiet", action="store_true", help="no stdout; exit code only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codepth3",
        description="Koszul homology algebras and Tor-algebra classes of k[x,y,z]/I.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one ideal")
    _add_input_args(p)
    _add_common(p)
    p.add_argument("--tables", action="store_true", help="print representatives and multiplication tables")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("corpus", help="run the built-in g1..g4, b1..b4 corpus against expectations")
    _add_common(p)
    p.add_argument("--expectations", help="JSON file replacing the built-in expectations")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("verify", help="run the invariant suite on one ideal")
    _add_input_args(p)
    _add_common(p)
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
