"""Command-line entry point: ``pfisterlab <command> ...``.

Every command prints one JSON report (sorted keys) except ``formula gen``,
``formula print``, ``formula parse`` and ``census export`` without ``--csv``,
which print their payload directly so it can be piped.

Exit codes: 0 decided, 1 usage or input error, 2 undecided within the
configured limits, 3 internal disagreement between methods.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from . import __version__
from .census import CensusStore, ENV_VAR, run_census
from .curves import TEMPLATES, CurveFamily, template_for, threshold_from_records
from .errors import (BudgetExceeded, Inconclusive, InternalDisagreement, NoEtalePointFound,
                     PfisterLabError, ScanCeilingExceeded)
from .fields import FiniteField, RationalFunctionField, field_make, parse_element

SCHEMA_VERSION = 1
SEED = 0

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED, EXIT_DISAGREE = 0, 1, 2, 3
_UNDECIDED = (BudgetExceeded, Inconclusive, NoEtalePointFound, ScanCeilingExceeded)


class _Usage(Exception):
    pass


def report(command: str, inputs: dict, verdict, witness=None, seconds: float = 0.0, **extra) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command, "inputs": inputs, "verdict": verdict,
           "witness": witness, "timing": {"seconds": round(seconds, 6)}, "version": __version__,
           "seed": SEED}
    out.update(extra)
    return out


def _emit(doc: dict, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _split(text: str) -> List[str]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise _Usage(f"malformed list {text!r}")
    return parts


# -- isotropy -------------------------------------------------------------------------------


def cmd_isotropy(args) -> tuple:
    from .qforms import DiagonalForm, isotropy_bounded_search, isotropy_finite

    F = field_make(args.field)
    q = DiagonalForm(F, tuple(parse_element(F, c) for c in _split(args.form)))
    inputs = {"field": F.descriptor, "form": q.to_json(), "bound": args.bound}
    if isinstance(F, FiniteField):
        res = isotropy_finite(q)
        if res.found:
            return EXIT_OK, "Witness", [str(x) for x in res.vector], {}
        return EXIT_OK, "Anisotropic", None, {}
    if not isinstance(F, RationalFunctionField):
        raise _Usage(f"isotropy needs a finite field or a rational function field, got {F.descriptor}")
    if args.bound is None:
        raise _Usage("--bound is required over a function field")
    res = isotropy_bounded_search(q, args.bound)
    if res.found:
        return EXIT_OK, "Witness", [str(x) for x in res.witness], {"inputs": inputs}
    return EXIT_UNDECIDED, "NoneFound", None, {"inputs": inputs, "nodes": res.nodes}


# -- independence ---------------------------------------------------------------------------


def cmd_independent(args) -> tuple:
    from .independence import independent

    K = field_make(args.field)
    if not isinstance(K, RationalFunctionField):
        raise _Usage("--field must be a rational function field such as GF(5)(t1,t2)")
    u = [parse_element(K, e) for e in _split(args.elements)]
    rep = independent(u, max_degree=args.max_degree, ell=args.char2_ell)
    doc = rep.to_json()
    return EXIT_OK, rep.verdict, doc["witness"], {"method": rep.method, "methods": doc["methods"]}


# -- census ---------------------------------------------------------------------------------


def cmd_census(args) -> tuple:
    store = CensusStore(args.store)
    if args.action == "compact":
        return EXIT_OK, "Compacted", None, {"records": store.compact(), "store": str(store.path)}
    if args.action == "export":
        if args.csv in (None, "-"):
            store.export_csv(sys.stdout)
            return None
        with open(args.csv, "w", newline="") as fh:
            n = store.export_csv(fh)
        return EXIT_OK, "Exported", None, {"records": n, "csv": args.csv, "store": str(store.path)}
    before = len(store.records())
    records = run_census(args.family, args.qmax, store, args.jobs)
    th = threshold_from_records(args.family, records, args.qmax)
    extra = {"store": str(store.path), "records": len(records), "new_records": len(store.records()) - before,
             "threshold": th.to_json()}
    return EXIT_OK, {"m": th.m, "m_prime": th.m_prime}, {"failures": th.failures}, extra


# -- formulas -------------------------------------------------------------------------------


def _read_formula(args) -> str:
    text = args.formula if args.formula is not None else sys.stdin.read()
    if not text.strip():
        raise _Usage("no formula given (use --formula or standard input)")
    return text.strip()


def _family(args):
    if args.template:
        return CurveFamily(args.template)
    if args.char is None:
        raise _Usage("give --template or --char to pick the curve family")
    return CurveFamily(template_for(args.char))


def _generate(args):
    from . import formula as fm

    kind = args.kind
    if kind == "trdeg":
        return fm.gen_trdeg_sentence(args.e, args.n, fold_ceiling=args.fold_ceiling)
    fam = _family(args)
    if kind == "sa":
        return fm.gen_Sa_membership(fam)
    if kind == "sa-prime":
        return fm.gen_Sa_prime_membership(fam, args.m)
    if kind == "constants":
        return fm.gen_constants_formula(fam, args.m)
    return fm.gen_finite_or_antimordellic_sentence(fam, args.m)


def _assignment(text: Optional[str], F) -> dict:
    out = {}
    if not text:
        return out
    for item in _split(text):
        if "=" not in item:
            raise _Usage(f"assignment {item!r} is not of the form name=value")
        name, value = (s.strip() for s in item.split("=", 1))
        out[name] = parse_element(F, value)
    return out


def cmd_formula(args):
    from . import formula as fm

    if args.action == "gen":
        phi = _generate(args)
        if args.json:
            _emit(fm.to_json(phi))
        else:
            sys.stdout.write(fm.pretty_print(phi) + "\n")
        return None
    text = _read_formula(args)
    phi = fm.parse(text)
    if args.action == "print":
        sys.stdout.write(fm.pretty_print(fm.canonical(phi) if args.canonical else phi) + "\n")
        return None
    if args.action == "parse":
        _emit(fm.to_json(phi))
        return None
    F = field_make(args.field)
    ev = fm.Evaluator(F, subfield=args.subfield, budget=args.budget)
    assignment = _assignment(args.assign, F)
    inputs = {"field": F.descriptor, "formula": fm.pretty_print(phi),
              "assignment": {k: str(v) for k, v in sorted(assignment.items())}, "budget": args.budget,
              "subfield": args.subfield}
    try:
        value = ev.evaluate(phi, assignment)
    except BudgetExceeded as exc:
        return EXIT_UNDECIDED, "BudgetExceeded", None, {"inputs": inputs, "reason": str(exc)}
    return EXIT_OK, "true" if value else "false", None, {
        "inputs": inputs, "estimate": ev.estimate(phi), "work": ev.work,
        "quantifiers": fm.quantifier_count(phi), "size": fm.size(phi)}


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pfisterlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"pfisterlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    iso = sub.add_parser("isotropy", help="decide or search for a zero of a diagonal form")
    iso.add_argument("--field", required=True, help="e.g. GF(3), GF(9), GF(5)(t1,t2)")
    iso.add_argument("--form", required=True, help="comma-separated diagonal coefficients")
    iso.add_argument("--bound", type=int, default=None, help="degree bound over a function field")

    ind = sub.add_parser("independent", help="algebraic independence with a certificate")
    ind.add_argument("--field", required=True, help="rational function field, e.g. GF(5)(t1,t2)")
    ind.add_argument("--elements", required=True, help="comma-separated rational functions")
    ind.add_argument("--char2-ell", type=int, default=3, dest="char2_ell")
    ind.add_argument("--max-degree", type=int, default=3, dest="max_degree")

    cen = sub.add_parser("census", help="S_a' census over finite fields, stored as JSON lines")
    cen.add_argument("action", nargs="?", choices=("run", "compact", "export"), default="run")
    cen.add_argument("--family", default="auto", choices=("auto",) + TEMPLATES)
    cen.add_argument("--qmax", type=int, default=101)
    cen.add_argument("--store", default=None, help=f"JSON-lines path (default: ${ENV_VAR} or ./pfisterlab-census.jsonl)")
    cen.add_argument("--jobs", type=int, default=1)
    cen.add_argument("--csv", default=None, help="export target (default: standard output)")

    fo = sub.add_parser("formula", help="generate, print, parse or evaluate formulas")
    fsub = fo.add_subparsers(dest="action", required=True)
    gen = fsub.add_parser("gen")
    gen.add_argument("kind", choices=("sa", "sa-prime", "constants", "trdeg", "finite-or-antimordellic"))
    gen.add_argument("--template", choices=TEMPLATES)
    gen.add_argument("--char", type=int, help="pick the template for this characteristic")
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--e", type=int, default=1)
    gen.add_argument("--n", type=int, default=0)
    gen.add_argument("--fold-ceiling", type=int, default=3, dest="fold_ceiling")
    gen.add_argument("--json", action="store_true")
    for name in ("print", "parse", "eval"):
        sp = fsub.add_parser(name)
        sp.add_argument("--formula", default=None, help="formula text (default: standard input)")
        if name == "print":
            sp.add_argument("--canonical", action="store_true", help="rename bound variables")
        if name == "eval":
            sp.add_argument("--field", required=True)
            sp.add_argument("--assign", default=None, help="name=value,... for free variables")
            sp.add_argument("--budget", type=float, default=1e14)
            sp.add_argument("--subfield", type=int, default=None,
                            help="degree d of the subfield GF(p^d) read by InSub (default: prime field)")
    return p


_COMMANDS = {"isotropy": cmd_isotropy, "independent": cmd_independent, "census": cmd_census,
             "formula": cmd_formula}


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command"}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    command = args.command if args.command != "formula" else f"formula {args.action}"
    start = time.perf_counter()
    inputs = _inputs(args)
    try:
        out = _COMMANDS[args.command](args)
    except InternalDisagreement as exc:
        _emit(report(command, inputs, "InternalDisagreement", None, time.perf_counter() - start, reason=str(exc)))
        return EXIT_DISAGREE
    except _UNDECIDED as exc:
        _emit(report(command, inputs, type(exc).__name__, None, time.perf_counter() - start, reason=str(exc)))
        return EXIT_UNDECIDED
    except (PfisterLabError, ValueError, _Usage) as exc:
        _emit(report(command, inputs, "InputError", None, time.perf_counter() - start,
                     reason=f"{type(exc).__name__}: {exc}"))
        return EXIT_INPUT
    if out is None:
        return EXIT_OK
    code, verdict, witness, extra = out
    extra = dict(extra)
    inputs = extra.pop("inputs", inputs)
    _emit(report(command, inputs, verdict, witness, time.perf_counter() - start, **extra))
    return code


def run() -> int:
    try:
        return main()
    except BrokenPipeError:
        # reader closed early, e.g. piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
