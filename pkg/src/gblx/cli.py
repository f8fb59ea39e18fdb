"""Command-line entry point: ``gblx <subcommand> ...``.

Exit codes: 0 when the check passes or the construction succeeds, 1 when a
check fails (the report carries a witness), 2 for usage and input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import syntax as sx
from .algebra import (
    algebra_from_json,
    algebra_to_json,
    classify,
    direct_product,
    godel_chain,
    identity_modal,
    lambda_table,
    load_algebra,
    lukasiewicz_chain,
    trivial_algebra,
)
from .errors import GblxError
from .filters import (
    check_cep,
    enumerate_congruences,
    enumerate_ifilters,
    generate_filter,
    generated_subalgebra,
    lambda_power,
    lddt_witness,
    partition_blocks,
)
from .posetprod import (
    build_labeled_product,
    build_modal_product,
    check_conucleus,
    conucleus_image,
    load_poset,
    poset_from_json,
)
from .proofs import check_derivation, load_derivation, soundness_spotcheck
from .semantics import Equation, is_valid, semantic_consequence
from .suites import SUITES, run_suite


class UsageError(GblxError):
    pass


# ---------------------------------------------------------------- helpers

def split_elements(text):
    """Split a comma-separated element list, ignoring commas inside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    last = "".join(cur).strip()
    if last or out:
        out.append(last)
    if any(not e for e in out):
        raise UsageError(f"empty element in list {text!r}")
    return out


def elements(A, text):
    return [A.index(e) for e in split_elements(text)] if text else []


def names(A, xs):
    return [A.carrier[int(x)] for x in xs]


def signature(A):
    return [k for k in A.modals if k not in ("P", "F")]


def write_json(data, path):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None


def emit_algebra(A, args, extra=None):
    data = algebra_to_json(A)
    if args.output:
        write_json(data, args.output)
        report = {"written": args.output, "name": A.name, "size": A.n}
    else:
        report = data
    if extra:
        report.update(extra)
    return 0, report


# ---------------------------------------------------------------- commands

def cmd_algebra_check(args):
    A = load_algebra(args.algebra)
    tense = args.expect == "s4tmv"
    report = classify(A, tense=tense)
    flags = {
        "RL": report.is_rl, "GBL": report.is_gbl, "BL": report.is_bl, "MV": report.is_mv,
        "S4MV": report.is_s4mv, "S4tMV": report.is_s4tmv,
    }
    out = {"name": A.name, "size": A.n, "flags": flags, "modal": report.modal}
    if report.failures:
        law, w = report.first_counterexample
        out["first_counterexample"] = {"law": law, "witness": [int(v) for v in w]}
        out["failures"] = {k: list(v) for k, v in report.failures.items()}
    wanted = {"rl": "RL", "gbl": "GBL", "bl": "BL", "mv": "MV", "s4mv": "S4MV", "s4tmv": "S4tMV"}
    ok = bool(flags[wanted[args.expect]])
    out["expect"] = wanted[args.expect]
    return (0 if ok else 1), out


def cmd_algebra_make(args):
    if args.lukasiewicz is not None:
        A = lukasiewicz_chain(args.lukasiewicz)
    elif args.godel is not None:
        A = godel_chain(args.godel)
    else:
        A = trivial_algebra()
    if args.box == "identity":
        A = identity_modal(A, "box")
    if args.tense == "identity":
        A = identity_modal(A, *(list(A.modals) + ["G", "H"]))
    return emit_algebra(A, args)


def cmd_product(args):
    factors = [load_algebra(p) for p in args.factors]
    return emit_algebra(direct_product(factors, name=args.name), args)


def cmd_poset_product(args):
    P = load_poset(args.poset)
    factors = [load_algebra(p) for p in args.factors]
    if args.modal == "none":
        lp = build_labeled_product(P, factors)
        A = lp.product if not args.name else lp.product.reduct(args.name)
    else:
        mp = build_modal_product(P, factors, name=args.name)
        lp = mp.labeled
        A = mp.s4mv if args.modal == "box" else mp.s4tmv
    extra = {}
    if args.map:
        write_json({"poset": list(P.elements), "tuples": lp.tuples.tolist()}, args.map)
        extra["map"] = args.map
    return emit_algebra(A, args, extra)


def cmd_conucleus_image(args):
    A = load_algebra(args.algebra)
    if args.table:
        g = json.loads(args.table)
    elif args.modal:
        g = args.modal
    else:
        raise UsageError("give --modal NAME or --table JSON")
    bad = check_conucleus(A, g)
    if bad:
        return 1, {"conucleus": False, "failures": {k: list(v) for k, v in bad.items()}}
    C = conucleus_image(A, g, name=args.name)
    return emit_algebra(C, args, {"conucleus": True})


def cmd_translate(args):
    f = sx.parse(args.formula)
    out = sx.translate(f, "box" if args.mode == "M" else "G")
    return 0, sx.to_text(out)


def cmd_validate(args):
    A = load_algebra(args.algebra)
    eq = Equation.parse(args.equation, signature(A))
    ok, w = is_valid(A, eq)
    report = {"algebra": A.name, "equation": str(eq), "valid": ok}
    if not ok:
        report["witness"] = {f"p{v}": A.carrier[x] for v, x in w.items()}
    return (0 if ok else 1), report


def cmd_consequence(args):
    job = read_json(args.job)
    if not isinstance(job, dict) or "algebras" not in job or "conclusion" not in job:
        raise UsageError("job file needs 'algebras' and 'conclusion'")
    base = Path(args.job).parent
    algebras = []
    for item in job["algebras"]:
        algebras.append(algebra_from_json(item) if isinstance(item, dict) else load_algebra(base / item))
    sig = job.get("modals")
    if sig is None:
        sig = signature(algebras[0]) if algebras else []
    premises = [Equation.parse(p, sig) for p in job.get("premises", [])]
    conclusion = Equation.parse(job["conclusion"], sig)
    ok, w = semantic_consequence(algebras, premises, conclusion)
    report = {"holds": ok, "algebras": len(algebras)}
    if not ok:
        A, h = w
        report["witness"] = {"algebra": A.name, "assignment": {f"p{v}": A.carrier[x] for v, x in h.items()}}
    return (0 if ok else 1), report


def cmd_filters(args):
    A = load_algebra(args.algebra)
    if args.generate is not None:
        return 0, {"generated": names(A, sorted(generate_filter(A, elements(A, args.generate))))}
    fs = enumerate_ifilters(A)
    return 0, {"algebra": A.name, "count": len(fs), "filters": [names(A, sorted(f)) for f in fs]}


def cmd_congruences(args):
    A = load_algebra(args.algebra)
    cs = enumerate_congruences(A)
    return 0, {
        "algebra": A.name,
        "count": len(cs),
        "congruences": [[names(A, b) for b in partition_blocks(t)] for t in cs],
    }


def cmd_cep(args):
    B = load_algebra(args.ambient)
    if args.subalgebra:
        A = load_algebra(args.subalgebra)
        if args.embedding is None:
            raise UsageError("--embedding is required with --subalgebra")
        emb = np.array([B.index(e) for e in split_elements(args.embedding)])
    else:
        A, emb = generated_subalgebra(B, elements(B, args.generators or ""))
    r = check_cep(A, B, emb)
    report = {"subalgebra": A.name, "size": A.n, "passed": r.passed, "filters_checked": r.filters_checked}
    if r.witness:
        report["witness"] = {
            k: [A.carrier[x] for x in v] if k == "filter" else names(B, v) for k, v in r.witness.items()
        }
    return (0 if r.passed else 1), report


def cmd_lddt(args):
    A = load_algebra(args.algebra)
    gamma, delta = elements(A, args.gamma), elements(A, args.delta)
    psi = A.index(args.psi)
    r = lddt_witness(A, gamma, delta, psi, args.max_product, args.max_block)
    report = {"status": r.status, "blocks": r.blocks, "elements": names(A, r.elements)}
    return (0 if r.found else 1), report


def cmd_lambda(args):
    A = load_algebra(args.algebra)
    if args.element is None:
        return 0, {"lambda": names(A, lambda_table(A))}
    x = A.index(args.element)
    return 0, {"element": args.element, "power": args.power, "value": A.carrier[lambda_power(A, x, args.power)]}


def cmd_proof_check(args):
    d = load_derivation(args.derivation)
    r = check_derivation(d)
    report = {"logic": d.logic.name, "steps": len(d.steps), "valid": r.valid}
    if not r.valid:
        report.update({"bad_step": r.bad_step, "reason": r.reason})
        return 1, report
    if args.soundness:
        s = soundness_spotcheck(d, d.logic, [load_algebra(p) for p in args.soundness])
        report["soundness"] = {"holds": s.holds, "algebras": s.algebras, "witness": s.witness}
        if not s.holds:
            return 1, report
    return 0, report


def _corpus_items(paths):
    items = []
    for p in paths:
        data = read_json(p)
        for entry in (data if isinstance(data, list) else [data]):
            if isinstance(entry, dict) and "poset" in entry:
                factors = [algebra_from_json(f) for f in entry.get("factors", [])]
                items.append(build_modal_product(poset_from_json(entry["poset"]), factors, entry.get("name")))
            else:
                items.append(algebra_from_json(entry))
    return items


def cmd_suite(args):
    items = _corpus_items(args.corpus) if args.corpus is not None else None
    r = run_suite(args.name, items, seed=args.seed)
    return (0 if r.passed else 1), r.as_dict()


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="gblx", description="Finite-model toolkit for modal many-valued logics.")
    p.add_argument("--human", action="store_true", help="plain-text report instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        sp.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
        return sp

    s = add("algebra-check", cmd_algebra_check, "classify an algebra file")
    s.add_argument("algebra")
    s.add_argument("--expect", choices=["rl", "gbl", "bl", "mv", "s4mv", "s4tmv"], default="rl",
                   help="class whose flag decides the exit code (default rl)")

    s = add("algebra-make", cmd_algebra_make, "build a standard algebra")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--lukasiewicz", type=int, metavar="N")
    g.add_argument("--godel", type=int, metavar="N")
    g.add_argument("--trivial", action="store_true")
    s.add_argument("--box", choices=["identity"])
    s.add_argument("--tense", choices=["identity"], help="add G = H = identity")
    s.add_argument("-o", "--output")

    s = add("product", cmd_product, "direct product of algebra files")
    s.add_argument("factors", nargs="+")
    s.add_argument("--name")
    s.add_argument("-o", "--output")

    s = add("poset-product", cmd_poset_product, "product over a poset with sigma and delta modals")
    s.add_argument("poset")
    s.add_argument("factors", nargs="+")
    s.add_argument("--modal", choices=["box", "tense", "none"], default="box",
                   help="box = sigma; tense = G sigma and H ~delta~; none = plain product")
    s.add_argument("--map", help="write the index-to-tuple map here")
    s.add_argument("--name")
    s.add_argument("-o", "--output")

    s = add("conucleus-image", cmd_conucleus_image, "algebra of fixpoints of a conucleus")
    s.add_argument("algebra")
    s.add_argument("--modal")
    s.add_argument("--table", help="unary table as a JSON list")
    s.add_argument("--name")
    s.add_argument("-o", "--output")

    s = add("translate", cmd_translate, "print the M or T translation of a formula")
    s.add_argument("formula")
    s.add_argument("--mode", choices=["M", "T"], default="M")

    s = add("validate", cmd_validate, "decide an equation in an algebra")
    s.add_argument("algebra")
    s.add_argument("equation")

    s = add("consequence", cmd_consequence, "finite equational consequence from a job file")
    s.add_argument("job")

    s = add("filters", cmd_filters, "enumerate I-filters or generate one")
    s.add_argument("algebra")
    s.add_argument("--generate", metavar="ELEMS")

    s = add("congruences", cmd_congruences, "enumerate congruences")
    s.add_argument("algebra")

    s = add("cep", cmd_cep, "check congruence extension for an embedded subalgebra")
    s.add_argument("ambient")
    s.add_argument("--generators", metavar="ELEMS")
    s.add_argument("--subalgebra")
    s.add_argument("--embedding", metavar="ELEMS", help="ambient images of the subalgebra elements")

    s = add("lddt", cmd_lddt, "search a deduction-detachment witness")
    s.add_argument("algebra")
    s.add_argument("--gamma", default="")
    s.add_argument("--delta", default="")
    s.add_argument("--psi", required=True)
    s.add_argument("--max-product", type=int, default=4)
    s.add_argument("--max-block", type=int, default=4)

    s = add("lambda", cmd_lambda, "the product of all modal images, or its powers")
    s.add_argument("algebra")
    s.add_argument("element", nargs="?")
    s.add_argument("--power", type=int, default=1)

    s = add("proof-check", cmd_proof_check, "check a derivation file")
    s.add_argument("derivation")
    s.add_argument("--soundness", nargs="+", metavar="ALGEBRA")

    s = add("suite", cmd_suite, "run a property suite over the corpus")
    s.add_argument("name", choices=sorted(SUITES))
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--corpus", nargs="*", metavar="FILE", help="override the corpus with JSON files")
    return p


def _human(report, indent=0):
    pad = "  " * indent
    if isinstance(report, str):
        return pad + report
    lines = []
    for k, v in report.items():
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.append(_human(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def run(argv=None):
    """Parse ``argv``, run the command, print the report; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "seed", "unset") is None:
        from .suites import DEFAULT_SEED
        args.seed = DEFAULT_SEED
    try:
        code, report = args.func(args)
    except (GblxError, OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    if isinstance(report, str):
        print(report)
    elif args.human:
        print(_human(report))
    else:
        print(json.dumps(report, indent=2, default=str))
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
