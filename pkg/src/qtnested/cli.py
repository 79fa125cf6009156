"""Command line interface.

Exit codes: 0 success or Proved, 1 Refuted or check failure, 2 Unknown,
64 usage error, 65 malformed input, 74 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .completion import completion_upto, decompose
from .formula import FormulaSyntaxError, format_formula, parse_formula
from .kernel import Family, Proof, SystemSpec, check
from .latex import proof_latex
from .prover import Budget, Proved, Refuted, prove
from .rewriter import CutStats, eliminate_cuts
from .semantics import find_countermodel
from .sequent import form_of, parse_sequent, seq
from .serialize import (
    FormatError,
    model_to_dot,
    model_to_json,
    model_to_text,
    proof_from_json,
    proof_to_json,
    proof_to_text,
)
from .translate import (
    HilbertError,
    check_hilbert,
    collapse_completion,
    hilbert_from_json,
    hilbert_to_nested,
    k_to_4,
)

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_IO = 64, 65, 74

SYSTEMS = {
    "k": (Family.K, False),
    "k-hat": (Family.K, True),
    "4": (Family.FOUR, False),
    "4-hat": (Family.FOUR, True),
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def axiom_list(text: str) -> frozenset[int]:
    if text.strip() in ("", "-", "none"):
        return frozenset()
    try:
        xs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"axioms must be comma-separated integers, got {text!r}") from None
    bad = [x for x in xs if x <= 1]
    if bad:
        raise argparse.ArgumentTypeError(f"axiom indices must exceed 1, got {bad}")
    return frozenset(xs)


def system_of(args, cut: bool | None = None) -> SystemSpec:
    family, completed = SYSTEMS[args.system]
    allow = args.cut if cut is None else cut
    if allow and family is Family.FOUR:
        raise CliError("cut is only available in the k and k-hat systems", EXIT_USAGE)
    return SystemSpec(family, args.axioms, completed, allow, getattr(args, "cut_rank", None))


# ---------------------------------------------------------------------------
# I/O helpers


def read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EXIT_IO) from None


def read_json(path: str):
    text = read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}", EXIT_DATA) from None


def write_text(path: str | None, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}", EXIT_IO) from None


def load_proof(path: str) -> Proof:
    try:
        return proof_from_json(read_json(path))
    except FormatError as e:
        raise CliError(f"{path}: {e}", EXIT_DATA) from None


def parse_goal(text: str):
    try:
        if "[" in text.replace("[]", "") or "," in text or text.strip() in ("{}", "∅"):
            return parse_sequent(text)
        return seq(parse_formula(text))
    except FormulaSyntaxError as e:
        raise CliError(f"goal: {e}", EXIT_DATA) from None


def emit_proof(p: Proof, sys_: SystemSpec, args):
    report = check(p, sys_)
    if not report.ok:
        raise AssertionError(f"refusing to emit a proof that fails to check: {report}")
    fmt = args.format
    if fmt == "latex":
        text = proof_latex(p, standalone=getattr(args, "standalone", False))
    elif fmt == "text":
        text = proof_to_text(p)
    else:
        text = json.dumps(proof_to_json(p), indent=1 if args.pretty else None, ensure_ascii=False)
    write_text(getattr(args, "out", None), text)


def info(args, msg: str):
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_prove(args) -> int:
    sys_ = system_of(args, cut=False)
    goal = parse_goal(args.goal)
    budget = Budget(steps=args.budget) if args.budget else Budget.from_env()
    res = prove(goal, sys_, budget)
    if isinstance(res, Proved):
        info(args, f"proved in {sys_.describe()}: height {res.proof.height}, {res.proof.node_count} nodes")
        emit_proof(res.proof, sys_, args)
        return EXIT_OK
    if isinstance(res, Refuted):
        info(args, f"refuted in {sys_.describe()}")
        write_model(res.model, res.world, args)
        return EXIT_FAIL
    info(args, f"unknown: {res.reason}")
    return EXIT_UNKNOWN


def write_model(model, world, args):
    if args.format == "text":
        text = model_to_text(model, world)
    elif args.format == "dot":
        text = model_to_dot(model, world)
    else:
        text = json.dumps(model_to_json(model, world))
    write_text(getattr(args, "out", None), text)


def cmd_check(args) -> int:
    sys_ = system_of(args)
    p = load_proof(args.input)
    report = check(p, sys_)
    if report.ok:
        print(f"ok: {format_formula(form_of(p.conclusion))} in {sys_.describe()}, height {p.height}, cut rank {p.cut_rank}")
        return EXIT_OK
    for v in report.violations:
        print(f"violation at {v}")
    return EXIT_FAIL


def cmd_elim_cut(args) -> int:
    sys_in = SystemSpec(Family.K, args.axioms, True, True)
    p = load_proof(args.input)
    report = check(p, sys_in)
    if not report.ok:
        for v in report.violations:
            print(f"violation at {v}", file=sys.stderr)
        return EXIT_FAIL
    stats = CutStats()
    out = eliminate_cuts(p, sys_in, stats)
    info(args, f"{p.cut_count} cuts of rank up to {p.cut_rank} eliminated with {stats.reductions} reductions")
    emit_proof(out, sys_in.with_(cut_allowed=False), args)
    return EXIT_OK


def cmd_translate(args) -> int:
    xs = args.axioms
    src, dst = args.source, args.target
    if src == "hilbert":
        try:
            h = hilbert_from_json(read_json(args.input))
            check_hilbert(h, xs)
        except (HilbertError, FormulaSyntaxError) as e:
            raise CliError(f"{args.input}: {e}", EXIT_DATA) from None
        p = hilbert_to_nested(h, xs)
        if dst == "k":
            emit_proof(p, SystemSpec(Family.K, xs, False, True), args)
            return EXIT_OK
        p = eliminate_cuts(p, SystemSpec(Family.K, xs, True, True))
        src = "k-hat"
    else:
        p = load_proof(args.input)
        family, completed = SYSTEMS[src]
        report = check(p, SystemSpec(family, xs, completed))
        if not report.ok:
            for v in report.violations:
                print(f"violation at {v}", file=sys.stderr)
            return EXIT_FAIL
    if dst == src or (src == "k" and dst == "k-hat"):
        emit_proof(p, SystemSpec(*SYSTEMS[dst][:1], xs, SYSTEMS[dst][1]), args)
        return EXIT_OK
    if SYSTEMS[src][0] is Family.K and dst in ("4", "4-hat"):
        p = k_to_4(p)
        if dst == "4":
            p = collapse_completion(p, xs)
        emit_proof(p, SystemSpec(Family.FOUR, xs, dst == "4-hat"), args)
        return EXIT_OK
    if src == "4-hat" and dst == "4":
        p = collapse_completion(p, xs)
        emit_proof(p, SystemSpec(Family.FOUR, xs, False), args)
        return EXIT_OK
    raise CliError(f"no translation from {src} to {dst}", EXIT_USAGE)


def cmd_completion(args) -> int:
    if not args.axioms:
        raise CliError("completion needs a nonempty --axioms list", EXIT_USAGE)
    if args.decompose is not None:
        split = decompose(args.axioms, args.decompose)
        if split is None:
            print(f"{args.decompose}: no decomposition (raw axiom or not in the completion)")
            return EXIT_FAIL
        m, l = split
        print(f"{args.decompose} = {m} + {l} - 1")
        return EXIT_OK
    print(" ".join(map(str, sorted(completion_upto(args.axioms, args.upto)))))
    return EXIT_OK


def cmd_countermodel(args) -> int:
    goal = parse_goal(args.goal)
    found = find_countermodel(form_of(goal), args.axioms, args.max_worlds)
    if found is None:
        info(args, f"no countermodel with at most {args.max_worlds} worlds")
        return EXIT_FAIL
    write_model(*found, args)
    return EXIT_OK


def cmd_render(args) -> int:
    p = load_proof(args.input)
    if args.format == "latex":
        text = proof_latex(p, standalone=args.standalone)
    elif args.format == "text":
        text = proof_to_text(p)
    else:
        text = json.dumps(proof_to_json(p), indent=1 if args.pretty else None, ensure_ascii=False)
    write_text(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qtnested", description="Nested sequent tools for K with quasi-transitivity axioms.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, system=True, fmt=("json", "latex", "text")):
        p.add_argument("--axioms", type=axiom_list, default=frozenset(), help="comma-separated indices, each > 1")
        if system:
            p.add_argument("--system", choices=sorted(SYSTEMS), default="k-hat")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--pretty", action="store_true", help="indent JSON output")
        p.add_argument("--standalone", action="store_true", help="wrap LaTeX in a document")
        p.add_argument("--quiet", action="store_true", help="no progress messages on stderr")

    p = sub.add_parser("prove", help="search for a cut-free proof")
    common(p, fmt=("json", "latex", "text", "dot"))
    p.add_argument("--goal", required=True, help="formula or sequent")
    p.add_argument("--budget", type=int, help="step budget (default from QTNESTED_BUDGET)")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check", help="check a JSON proof")
    common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cut", action="store_true", help="allow cut")
    p.add_argument("--cut-rank", type=int, help="bound on cut formula degree")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("elim-cut", help="eliminate cuts from a DiaK proof")
    common(p, system=False)
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_elim_cut)

    p = sub.add_parser("translate", help="translate between proof systems")
    common(p, system=False)
    p.add_argument("--from", dest="source", choices=["hilbert", *sorted(SYSTEMS)], required=True)
    p.add_argument("--to", dest="target", choices=sorted(SYSTEMS), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("completion", help="list completion members")
    p.add_argument("--axioms", type=axiom_list, required=True)
    p.add_argument("--upto", type=int, default=30)
    p.add_argument("--decompose", type=int, help="print the split n = m + l - 1 used for n")
    p.set_defaults(func=cmd_completion)

    p = sub.add_parser("countermodel", help="bounded countermodel search")
    common(p, system=False, fmt=("json", "dot", "text"))
    p.add_argument("--goal", required=True)
    p.add_argument("--max-worlds", type=int, default=4)
    p.set_defaults(func=cmd_countermodel)

    p = sub.add_parser("render", help="render a JSON proof")
    common(p, system=False, fmt=("latex", "text", "json"))
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"qtnested: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        # bad environment values such as QTNESTED_BUDGET
        print(f"qtnested: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
