"""Command-line interface.

Exit codes: 0 for an affirmative answer (valid, ok, agreement), 1 for a
negative one (refuted, proof error, mismatch), 2 for usage and internal
errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .decide import LogicMode, decide, verdict_from_json
from .formula import Formula, FormulaSyntaxError, closure, parse, render
from .kripke import ModelError, describe, extensions, is_deterministic, model_from_json

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _default_budget() -> int:
    raw = os.environ.get("RECMODAL_BUDGET")
    if raw is None:
        from .recfun.machine import DEFAULT_BUDGET

        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"RECMODAL_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise UsageError("RECMODAL_BUDGET must be positive")
    return value


def _formula(args) -> Formula:
    text = args.formula
    if getattr(args, "file", None):
        text = Path(args.file).read_text()
    if text is None:
        raise UsageError("give a formula inline or with --file")
    return parse(text.strip())


def _dump(data) -> str:
    return json.dumps(data, indent=2)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _model_and_meta(path: str):
    """A model file, or a verdict file written by ``decide``."""
    data = _load_json(path)
    if isinstance(data, dict) and "verdict" in data:
        if data["verdict"] != "refuted":
            raise UsageError(f"{path} holds a 'valid' verdict and no model")
        v = verdict_from_json(data)
        return v.model, data
    return model_from_json(data), {}


# -- commands ----------------------------------------------------------------

def cmd_decide(args) -> int:
    phi = _formula(args)
    mode = LogicMode.parse(args.logic)
    verdict = decide(phi, mode)
    if not verdict.valid:
        out = {"formula": render(phi), "logic": mode.value, **verdict.to_json()}
        Path(args.output).write_text(_dump(out) + "\n")
    if args.json:
        print(_dump({"formula": render(phi), "logic": mode.value, **verdict.to_json()}))
    elif verdict.valid:
        print("valid")
    else:
        print(f"refuted at {verdict.world} in a {len(verdict.model.worlds)}-world model; countermodel written to {args.output}")
    return EXIT_YES if verdict.valid else EXIT_NO


def cmd_check_model(args) -> int:
    model, meta = _model_and_meta(args.model)
    text = args.formula if args.formula is not None else meta.get("formula")
    if text is None:
        raise UsageError("no formula given and the file does not record one")
    phi = parse(text)
    logic = args.logic or meta.get("logic", "r")
    mode = LogicMode.parse(logic)
    if mode.deterministic and not is_deterministic(model):
        print(f"model is not deterministic, so it is not a model of logic {mode.value}")
        return EXIT_NO
    universal = mode is LogicMode.RFORALL
    true_at = extensions(model, phi, universal)[phi]
    world = args.world or meta.get("world")
    if world is not None and world not in model.worlds:
        raise UsageError(f"unknown world {world!r}")
    targets = [world] if world is not None else list(model.worlds)
    failing = [w for w in targets if w not in true_at]
    if args.verbose:
        print(describe(model))
    print(_dump({"formula": render(phi), "logic": mode.value, "forced_at": sorted(true_at), "failing": failing}))
    if failing:
        print(f"not forced at {', '.join(failing)}")
        return EXIT_NO
    print("forced" if world is not None else "valid in the model")
    return EXIT_YES


def _proof_path(name: str) -> Path:
    from .hilbert import PROOF_DIR

    path = Path(name)
    if path.exists():
        return path
    shipped = PROOF_DIR / path.name
    if shipped.is_file():
        return shipped
    raise UsageError(f"no such proof file: {name}")


def cmd_check_proof(args) -> int:
    from .hilbert import check_proof, load_proof

    proof = load_proof(_proof_path(args.proof))
    if args.logic:
        proof.logic = LogicMode.parse(args.logic)
    if proof.logic is LogicMode.RFORALL:
        raise UsageError("proofs are checked in logic r or rd")
    report = check_proof(proof)
    print(report)
    if report.ok:
        hyps = ", ".join(render(h) for h in proof.hypotheses)
        print(f"{hyps} |-[{proof.logic.value}] {render(report.conclusion)}" if hyps else f"|-[{proof.logic.value}] {render(report.conclusion)}")
    return EXIT_YES if report.ok else EXIT_NO


def cmd_realize(args) -> int:
    from .recfun.realize import amb_free, realize, save_bundle

    model, _ = _model_and_meta(args.model)
    bundle = realize(model, args.budget)
    save_bundle(bundle, args.output)
    kind = "deterministic" if amb_free(bundle) else "nondeterministic"
    print(f"realized {len(model.worlds)} worlds as {kind} codes; bundle written to {args.output}")
    return EXIT_YES


def cmd_verify_realization(args) -> int:
    from .recfun.realize import load_bundle, verify_realization

    bundle = load_bundle(args.bundle)
    if args.budget_given:
        bundle.budget = args.budget
    phi = _formula(args)
    universal = LogicMode.parse(args.logic or "r") is LogicMode.RFORALL
    report = verify_realization(bundle, closure(phi), universal)
    print(_dump(report.to_json()))
    print("agreement" if report.ok else f"{len(report.mismatches)} mismatches")
    return EXIT_YES if report.ok else EXIT_NO


def cmd_eval(args) -> int:
    from .recfun.machine import eval_program
    from .recfun.sexpr import parse as parse_sexpr, render as render_sexpr

    def read(text):
        return parse_sexpr(Path(text[1:]).read_text() if text.startswith("@") else text)

    res = eval_program(read(args.code), read(args.input), args.budget, mode="det" if args.det else "nondet")
    for v in sorted(render_sexpr(v) for v in res.values):
        print(v)
    if res.budget_exhausted:
        print(f"budget of {args.budget} steps exhausted on some branch", file=sys.stderr)
    if res.branch_overflow:
        print("branch limit reached", file=sys.stderr)
    if res.definitely_divergent:
        print("diverges", file=sys.stderr)
    return EXIT_YES if res.conclusive else EXIT_NO


def cmd_corpus(args) -> int:
    from .corpus import format_table, generate_corpus, run_corpus

    if args.file:
        lines = Path(args.file).read_text().splitlines()
        formulas = [parse(s) for s in lines if s.strip() and not s.lstrip().startswith("#")]
    else:
        formulas = generate_corpus(args.count, args.seed)
    modes = args.logic or ["r"]
    rows = run_corpus(formulas, modes, oracle_bound=args.bound, realize_models=not args.no_realize, budget=args.budget)
    if args.json:
        print(_dump([a.row() for a in rows]))
    else:
        print(format_table(rows))
    return EXIT_YES if all(a.ok for a in rows) else EXIT_NO


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="recmodal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    logic_choices = [m.value for m in LogicMode]

    def budget_arg(sp):
        sp.add_argument("--budget", type=int, default=None, help="evaluation steps per branch (default: $RECMODAL_BUDGET or 10000)")

    d = sub.add_parser("decide", help="decide validity of a formula")
    d.add_argument("formula", nargs="?")
    d.add_argument("--file", help="read the formula from a file")
    d.add_argument("--logic", choices=logic_choices, default="r")
    d.add_argument("--output", "-o", default="countermodel.json", help="where to write a countermodel")
    d.add_argument("--json", action="store_true", help="print the verdict as JSON")
    d.set_defaults(func=cmd_decide)

    c = sub.add_parser("check-model", help="model-check a formula in a model or verdict file")
    c.add_argument("model")
    c.add_argument("formula", nargs="?")
    c.add_argument("--world")
    c.add_argument("--logic", choices=logic_choices)
    c.add_argument("--verbose", "-v", action="store_true")
    c.set_defaults(func=cmd_check_model)

    cp = sub.add_parser("check-proof", help="check a proof file")
    cp.add_argument("proof")
    cp.add_argument("--logic", choices=["r", "rd"], help="override the logic named in the file")
    cp.set_defaults(func=cmd_check_proof)

    r = sub.add_parser("realize", help="turn a finite model into program codes")
    r.add_argument("model")
    r.add_argument("--output", "-o", default="bundle.json")
    budget_arg(r)
    r.set_defaults(func=cmd_realize)

    v = sub.add_parser("verify-realization", help="compare code membership with forcing")
    v.add_argument("bundle")
    v.add_argument("formula", nargs="?")
    v.add_argument("--file")
    v.add_argument("--logic", choices=logic_choices)
    budget_arg(v)
    v.set_defaults(func=cmd_verify_realization)

    e = sub.add_parser("eval", help="run a program code on an input")
    e.add_argument("code", help="s-expression text, or @file")
    e.add_argument("input", nargs="?", default="nil")
    e.add_argument("--det", action="store_true", help="reject amb")
    budget_arg(e)
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("corpus", help="run formulas through decide, the oracle and realization")
    k.add_argument("--file", help="one formula per line")
    k.add_argument("--count", type=int, default=200)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--logic", choices=logic_choices, action="append")
    k.add_argument("--bound", type=int, default=3, help="oracle world bound (0 disables)")
    k.add_argument("--no-realize", action="store_true")
    k.add_argument("--json", action="store_true")
    budget_arg(k)
    k.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from .hilbert import ProofFormatError
    from .recfun.machine import EvalError
    from .recfun.realize import RealizationError
    from .recfun.sexpr import SexprSyntaxError

    try:
        args.budget_given = getattr(args, "budget", None) is not None
        if getattr(args, "budget", 0) is None:
            args.budget = _default_budget()
        if getattr(args, "budget", 1) <= 0:
            raise UsageError("--budget must be positive")
        return args.func(args)
    except (UsageError, FormulaSyntaxError, SexprSyntaxError, ModelError, ProofFormatError, OSError) as exc:
        print(f"recmodal {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (RealizationError, EvalError, ValueError) as exc:
        print(f"recmodal {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
