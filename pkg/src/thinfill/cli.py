"""Batch command-line front end.

Every command reads documents in the flat text format, writes one structured
document to standard output (the input schema plus a ``result`` section, or
a freshly produced document), and keeps diagnostics on standard error.
Exit codes: 0 success, 1 domain error (including inconclusive budgets),
2 malformed input or usage.
"""

from __future__ import annotations

import argparse
import sys

from . import documents as docs
from .chain import homology, normalized_chains, validate_chain
from .crossed import CrossedComplex, ab_cr, cr_homology, u_cr, validate_crossed_complex
from .doldkan import GammaRep
from .errors import DocumentError, ThinfillError
from .presentations import abelianization, group_order_bounded
from .sset import pi1_presentation, universal_cover, validate_sset
from .strictify import coskeletal_theorem_check, strict_invariants, unit_comparison
from .tcomplex import (
    ab_st,
    cothin_pairs,
    eta_iso,
    marked_from_tcomplex,
    ndk_build,
    tcomplex_validate,
    thin_closure,
    u_st,
)

DEFAULT_DMAX = 4
DEFAULT_BUDGET = 100_000


class _Exit(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load(path, kinds):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise _Exit(2, f"cannot read {path}: {e}")
    doc = docs.parse_document(text)
    if doc.kind not in kinds:
        raise _Exit(2, f"{path}: expected one of {kinds}, got {doc.kind!r}")
    return doc


def _doc_with_results(doc, results):
    text = docs.serialize_document(doc)
    return text + "".join(f"result {line}\n" for line in results)


def _group_lines(prefix, groups):
    return [f"{prefix} {n}: {g}" for n, g in groups]


def _sset_of(doc):
    return doc.payload if doc.kind == "simplicial_set" else doc.payload.sset


def cmd_validate(args):
    doc = _load(args.path, docs.KINDS)
    report = []
    if doc.kind in ("simplicial_set", "t_complex"):
        X = _sset_of(doc)
        bound = X.data_bound()
        if args.dmax is not None and bound is not None and args.dmax > bound:
            raise ThinfillError(
                f"requested dimension {args.dmax} exceeds the truncation bound {bound}")
        report = [f"{v.kind} {v.cell} {v.detail}" for v in validate_sset(X)]
        if doc.kind == "t_complex" and not report:
            dmax = args.dmax if args.dmax is not None else (bound or DEFAULT_DMAX)
            report = [f"axiom{v.axiom} at a {v.horn.n}-horn (k={v.horn.k}): {v.detail}"
                      for v in tcomplex_validate(doc.payload, dmax)]
    elif doc.kind == "chain_complex":
        report = validate_chain(doc.payload)
    elif doc.kind == "crossed_complex":
        report = validate_crossed_complex(doc.payload)
    lines = ["valid: yes"] if not report else ["valid: no"] + [f"violation: {r}" for r in report]
    return (0 if not report else 1), _doc_with_results(doc, lines)


def cmd_homology(args):
    doc = _load(args.path, ("simplicial_set", "chain_complex"))
    if doc.kind == "simplicial_set":
        C = normalized_chains(doc.payload, reduced=args.reduced,
                              basepoint=args.basepoint)
    else:
        C = doc.payload
    groups = [(n, homology(C, n)) for n in range(C.top + 1)]
    return 0, _doc_with_results(doc, _group_lines("H", groups))


def cmd_pi1(args):
    doc = _load(args.path, ("simplicial_set",))
    X = doc.payload
    v = args.basepoint or min(X.cells.get(0, ()))
    P = pi1_presentation(X, v)
    order = group_order_bounded(P, args.budget)
    lines = [f"basepoint: {v}",
             f"presentation: {P}",
             f"abelianization: {abelianization(P)}",
             f"order: {'inconclusive' if order is None else order}"]
    return (1 if order is None else 0), _doc_with_results(doc, lines)


def cmd_cover(args):
    doc = _load(args.path, ("simplicial_set",))
    res = universal_cover(doc.payload, args.budget)
    out = docs.Document("simplicial_set", res.cover)
    lines = [f"deck group order: {res.group_order}"]
    for d in sorted(res.cover.cells.keys()):
        lines.append(f"cells {d}: {len(res.cover.cells[d])}")
    return 0, _doc_with_results(out, lines)


def cmd_gamma(args):
    doc = _load(args.path, ("chain_complex",))
    rep = GammaRep(doc.payload)
    groups = [(n, rep.simplex_group(n)) for n in range(args.dmax + 1)]
    return 0, _doc_with_results(doc, _group_lines("gamma", groups))


def cmd_nz(args):
    doc = _load(args.path, ("simplicial_set",))
    C = normalized_chains(doc.payload, reduced=args.reduced, basepoint=args.basepoint)
    out = docs.Document("chain_complex", C)
    groups = [(n, C.group(n)) for n in range(C.top + 1)]
    return 0, _doc_with_results(out, _group_lines("group", groups))


def cmd_ndk(args):
    doc = _load(args.path, ("crossed_complex",))
    X = ndk_build(doc.payload, args.dmax)
    out = docs.Document("t_complex", X)
    lines = []
    for n in sorted(X.sset.cells.keys()):
        lines.append(f"cells {n}: {len(X.sset.cells[n])}")
    lines.append(f"thin cells: {len(X.thin)}")
    return 0, _doc_with_results(out, lines)


def cmd_tcheck(args):
    doc = _load(args.path, ("t_complex",))
    X = doc.payload
    bound = X.sset.data_bound()
    dmax = args.dmax if args.dmax is not None else min(DEFAULT_DMAX, bound or DEFAULT_DMAX)
    report = tcomplex_validate(X, dmax)
    lines = ([f"axioms through dimension {dmax}: pass"] if not report else
             [f"axiom{v.axiom} at a {v.horn.n}-horn (k={v.horn.k}): {v.detail}"
              for v in report])
    return (0 if not report else 1), _doc_with_results(doc, lines)


def cmd_abcr(args):
    doc = _load(args.path, ("crossed_complex",))
    C = ab_cr(doc.payload, reduced=args.reduced)
    out = docs.Document("chain_complex", C)
    groups = [(n, C.group(n)) for n in range(C.top + 1)]
    return 0, _doc_with_results(out, _group_lines("group", groups))


def cmd_ucr(args):
    doc = _load(args.path, ("chain_complex",))
    X = u_cr(doc.payload)
    if not isinstance(X, CrossedComplex):
        H = cr_homology(X)
        lines = ["backend: symbolic (bottom degrees not enumerable)",
                 f"pi0 invariants: {X.A.group(0)} modulo boundaries"]
        return 1, _doc_with_results(doc, lines)
    out = docs.Document("crossed_complex", X)
    lines = [f"objects: {len(X.groupoid.objects)}",
             f"morphisms: {len(X.groupoid.morphisms)}"]
    return 0, _doc_with_results(out, lines)


def cmd_abst(args):
    doc = _load(args.path, ("t_complex",))
    C = ab_st(doc.payload, args.dmax)
    out = docs.Document("chain_complex", C)
    groups = [(n, C.group(n)) for n in range(C.top + 1)]
    return 0, _doc_with_results(out, _group_lines("group", groups))


def cmd_eta_check(args):
    doc = _load(args.path, ("chain_complex",))
    cert = eta_iso(doc.payload, args.dmax)
    lines = [f"isomorphism: {'yes' if cert.ok else 'no'}"]
    for n, (a, b) in enumerate(cert.sizes):
        lines.append(f"dimension {n}: {a} simplices on both sides"
                     if a == b else f"dimension {n}: {a} vs {b}")
    lines.extend(f"failure: {f}" for f in cert.failures)
    return (0 if cert.ok else 1), _doc_with_results(doc, lines)


def cmd_strict_invariants(args):
    doc = _load(args.path, ("simplicial_set",))
    X = doc.payload
    inv = strict_invariants(X, args.budget, degree_bound=args.dmax_opt)
    lines = [f"pi0: {inv.pi0}"]
    code = 0
    for comp in inv.components:
        tag = f"component {comp.basepoint}"
        order = "inconclusive" if comp.pi1_order is None else comp.pi1_order
        if comp.pi1_order is None:
            code = 1
        lines.append(f"{tag} pi1 order: {order}")
        lines.append(f"{tag} pi1 abelianized: {abelianization(comp.pi1)}")
        if comp.pin is not None:
            for n in sorted(comp.pin):
                lines.append(f"{tag} pi{n}: {comp.pin[n]} ({comp.provenance})")
    return code, _doc_with_results(doc, lines)


def cmd_coskeletal_check(args):
    doc = _load(args.path, ("simplicial_set",))
    ok = coskeletal_theorem_check(doc.payload, args.skeletal, args.dmax)
    lines = [f"{args.skeletal + 1}-coskeletal through {args.dmax}: "
             + ("yes" if ok else "no")]
    return 0, _doc_with_results(doc, lines)


def cmd_unit_compare(args):
    doc = _load(args.path, ("simplicial_set",))
    rep = unit_comparison(doc.payload, args.budget)
    lines = [f"pi0: {rep.pi0_count}",
             f"pi1 abelianized: {rep.ab_pi1}",
             f"H1: {rep.h1}",
             f"pi1 order: {'inconclusive' if rep.order is None else rep.order}",
             f"verdict: {rep.verdict}"]
    return (0 if rep.verdict == "proxy-verified" else 1), _doc_with_results(doc, lines)


def cmd_thin_closure(args):
    doc = _load(args.path, ("t_complex",))
    X = doc.payload
    bound = X.sset.data_bound()
    dmax = args.dmax if args.dmax is not None else min(DEFAULT_DMAX, bound or DEFAULT_DMAX)
    M = marked_from_tcomplex(X, dmax)
    closure = thin_closure(M)
    pairs = cothin_pairs(M)
    lines = ["thin: " + " ".join(sorted(closure))]
    lines.append(f"cothin pairs: {len(pairs)}")
    for a, b in pairs:
        lines.append(f"cothin: {docs._expr_to_text(a)} | {docs._expr_to_text(b)}")
    return 0, _doc_with_results(doc, lines)


def build_parser():
    p = argparse.ArgumentParser(
        prog="thinfill",
        description="simplicial sets, crossed complexes and T-complexes, exactly")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *, dmax=None, budget=False, reduced=False, basepoint=False,
            skeletal=False, dmax_opt=False):
        sp = sub.add_parser(name)
        sp.add_argument("path")
        sp.set_defaults(fn=fn)
        if dmax == "required-default":
            sp.add_argument("--dmax", type=int, default=DEFAULT_DMAX)
        elif dmax == "optional":
            sp.add_argument("--dmax", type=int, default=None)
        if dmax_opt:
            sp.add_argument("--dmax", dest="dmax_opt", type=int, default=None)
        if budget:
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        if reduced:
            sp.add_argument("--reduced", action="store_true")
        if basepoint:
            sp.add_argument("--basepoint", default=None)
        if skeletal:
            sp.add_argument("--skeletal", type=int, required=True)
        sp.add_argument("--output", default=None)
        return sp

    add("validate", cmd_validate, dmax="optional")
    add("homology", cmd_homology, reduced=True, basepoint=True)
    add("pi1", cmd_pi1, budget=True, basepoint=True)
    add("cover", cmd_cover, budget=True)
    add("gamma", cmd_gamma, dmax="required-default")
    add("nz", cmd_nz, reduced=True, basepoint=True)
    add("ndk", cmd_ndk, dmax="required-default")
    add("tcheck", cmd_tcheck, dmax="optional")
    add("abcr", cmd_abcr, reduced=True)
    add("ucr", cmd_ucr)
    add("abst", cmd_abst, dmax="required-default")
    add("eta-check", cmd_eta_check, dmax="required-default")
    add("strict-invariants", cmd_strict_invariants, budget=True, dmax_opt=True)
    add("coskeletal-check", cmd_coskeletal_check, dmax="required-default", skeletal=True)
    add("unit-compare", cmd_unit_compare, budget=True)
    add("thin-closure", cmd_thin_closure, dmax="optional")
    return p


def run(argv, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        code, text = args.fn(args)
    except _Exit as e:
        print(str(e), file=err)
        return e.code
    except DocumentError as e:
        print(f"malformed input: {e}", file=err)
        return 2
    except ThinfillError as e:
        print(f"error: {e}", file=err)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=err)
        return 1
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"cannot write {args.output}: {e}", file=err)
            return 1
    out.write(text)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
