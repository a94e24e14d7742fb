"""``germlab`` command line.

Every subcommand reads a germ document (``--in``), runs one computation and
prints a JSON report.  With ``--out`` the report goes to that file and a one
line summary is printed instead.  Exit status: 0 on success, 1 when the
computation is unresolved within its budget, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .polyring import SymMatrixGerm, VectorFieldJet


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- documents

def load_document(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or "entries" not in doc:
        raise InputError("document must be an object with an 'entries' matrix")
    return doc


def germ_from_document(doc: dict) -> SymMatrixGerm:
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(row, list) for row in entries):
        raise InputError("entries must be a list of rows")
    n = doc.get("n", len(entries))
    r = doc.get("r", 2)
    if len(entries) != n or any(len(row) != n for row in entries):
        raise InputError(f"entries must be an {n}x{n} matrix")
    if any(e is not None and not isinstance(e, str) for row in entries for e in row):
        raise InputError("entries must be polynomial strings or null")
    if doc.get("field", "real") not in ("real", "complex"):
        raise InputError("field must be 'real' or 'complex'")
    try:
        return SymMatrixGerm.from_strings(entries, r)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _dump(report) -> str:
    return json.dumps(report, indent=2, default=str) + "\n"


# ---------------------------------------------------------------- commands

def cmd_classify(a, doc, args):
    from .classify import classify_germ

    rep = classify_germ(a, max_codim=8, dmax=args.dmax, real=args.field == "real")
    d = rep.as_dict()
    summary = f"{rep.status}: {', '.join(rep.variants) or rep.reason}"
    expected = doc.get("expected_class")
    if expected is not None:
        d["expected_class"] = expected
        d["expected_matches"] = rep.class_id == str(expected)
    return d, summary, rep.status == "matched"


def cmd_codim(a, doc, args):
    from .tangent import g_codimension, ge_codimension

    ge = ge_codimension(a, args.dmax)
    g = g_codimension(a, args.dmax)
    d = {"Ge": ge.as_dict(), "G": g.as_dict()}
    return d, f"Ge-codim {ge.value if ge.stabilized else 'unresolved'}", ge.stabilized


def cmd_tangent_dim(a, doc, args):
    from .tangent import orbit_tangent_dim_jet, tangent_space

    k = args.degree or 2
    d = {"degree": k,
         "orbit_dim_adapted": orbit_tangent_dim_jet(a.truncate(k), k, "adapted") if a.r == 2 and a.n == 2 else None,
         "orbit_dim_full": orbit_tangent_dim_jet(a.truncate(k), k, "full"),
         "Ge_jet_dim": tangent_space(a, "Ge", k).dim,
         "G_jet_dim": tangent_space(a, "G", k, lo=1).dim}
    return d, f"orbit dim of {k}-jet: {d['orbit_dim_full']} (full frame)", True


def cmd_transversal(a, doc, args):
    from .tangent import complete_transversal

    k = args.degree or max(1, a.degree())
    vecs = complete_transversal(a.truncate(k), k)
    d = {"degree": k, "directions": [v.to_strings() for v in vecs]}
    return d, f"{len(vecs)} transversal directions in degree {k + 1}", True


def cmd_qh(a, doc, args):
    from .quasihom import qh_check, qh_find_diagonal

    w = qh_find_diagonal(a)
    d = {"weights": w.as_dict() if w else None, "qh_check": qh_check(a, w) if w else False}
    return d, (f"lambda={list(w.lam)} delta={list(w.delta)}" if w else "no diagonal weights"), w is not None


def cmd_sqh(a, doc, args):
    from .quasihom import Verdict, sqh_obstruction

    cert = sqh_obstruction(a, args.dmax)
    return cert.as_dict(), cert.verdict.value, cert.verdict != Verdict.INCONCLUSIVE


def cmd_lda(a, doc, args):
    from .quasihom import lda_jets

    deg = args.degree or 4
    lda = lda_jets(a, deg)
    d = {"degree": deg,
         "linear_parts": [[[str(x) for x in row] for row in L] for L in lda.linear_parts()],
         "v_part_basis": [[str(c) for c in v.components] for v in lda.v_part_basis(min(deg, 3))]}
    generators = doc.get("lda_generators")
    if generators:
        d["generators"] = [{"V": g, "member": lda.contains_jet(VectorFieldJet.from_strings(g, deg, a.r), deg)}
                           for g in generators]
    return d, f"{len(d['linear_parts'])} independent linear parts", True


def cmd_divmod(a, doc, args):
    from .unimodular import InsufficientTruncation, moduli_quotient_dim

    deg = args.degree or 4
    try:
        q = moduli_quotient_dim(a, deg)
    except InsufficientTruncation as exc:
        return {"degree": deg, "error": str(exc)}, "unresolved", False
    return {"degree": deg, "quotient_dim": q}, f"dim quotient = {q}", True


def _witness(doc, r):
    from .unimodular import CongruenceWitness

    w = doc.get("witness")
    if not w:
        raise InputError("document needs a 'witness' object with 'phi' and 'x'")
    return CongruenceWitness.from_strings(w["phi"], w["x"], r)


def cmd_witness(a, doc, args):
    from .unimodular import verify_congruence_witness

    w = _witness(doc, a.r)
    target = SymMatrixGerm.from_strings(doc["target"], a.r) if doc.get("target") else a
    deg = args.degree or max(a.degree(), target.degree()) + 2
    chk = verify_congruence_witness(a, target, w, deg)
    d = {"degree": deg, **chk.as_dict(), "witness": w.as_dict()}
    return d, f"holds={chk.holds} orientation_sign={chk.orientation_sign}", chk.holds


def cmd_orient(a, doc, args):
    from .unimodular import orientation_forced, orientation_reversing_search

    search = orientation_reversing_search(a, jet_degree=args.degree or 6)
    forced = orientation_forced(a)
    d = {"search": search.as_dict(), "orientation_forced": forced.as_dict()}
    if search.found:
        summary = "orientation-reversing isotropy element found"
    elif forced.proved:
        summary = "every isotropy element preserves orientation (proved)"
    else:
        summary = "not found within budget"
    return d, summary, search.found or forced.proved


def cmd_split(a, doc, args):
    from .unimodular import unimodular_splitting

    cid = args.class_id or doc.get("expected_class")
    if cid is None:
        raise InputError("split needs a class id (positional or expected_class in the document)")
    table = args.suite or ("n2m3" if a is not None and a.n == 3 else "table2")
    rec = unimodular_splitting(str(cid), table)
    return rec.as_dict(), f"class {cid}: {'splits into ' + ', '.join(rec.labels) if rec.splits else 'no split'}", True


def cmd_det(a, doc, args):
    from .detinv import det_germ

    f = det_germ(a)
    return {"det": str(f)}, str(f), True


def cmd_milnor(a, doc, args):
    from .detinv import det_germ, milnor_number

    rep = milnor_number(det_germ(a), 2 * args.dmax)
    return rep.as_dict(), f"mu(det) = {rep.as_dict()['dimension']}", rep.stabilized


def cmd_koszul(a, doc, args):
    from .detinv import koszul_betti, koszul_generators

    rep = koszul_betti(koszul_generators(a), args.dmax)
    return rep.as_dict(), f"beta0={rep.beta0} beta1={rep.beta1}", rep.stabilized


def cmd_thm27(a, doc, args):
    from .detinv import theorem27_check

    rep = theorem27_check(a, args.dmax)
    return rep.as_dict(), f"mu={rep.mu} codim={rep.codim} beta0={rep.beta0} beta1={rep.beta1} holds={rep.holds}", \
        rep.resolved


def cmd_signature(a, doc, args):
    from .realsig import GridSpec, ray_sectors, signature_csv, signature_field, signature_svg, stable_component_count

    if args.field == "complex":
        raise InputError("signature sets are defined over the reals")
    grid = GridSpec(Fraction(args.radius), Fraction(args.grid_step))
    field = signature_field(a, grid)
    counts = field.counts()
    comps = []
    for t in sorted(counts):
        sc = stable_component_count(a, t, grid) if t[1] == 0 else None
        comps.append({"signature": list(t), "cells": counts[t],
                      "components": sc.as_dict() if sc else None})
    d = {"radius": str(grid.radius), "step": str(grid.step), "puncture": str(grid.puncture),
         "regions": comps, "ray_sectors": [{"signature": list(t), "count": k}
                                           for t, k in sorted(ray_sectors(a).items())]}
    if args.out_plot:
        if args.out_plot.endswith(".csv"):
            signature_csv(a, grid, args.out_plot)
        else:
            signature_svg(a, grid, args.out_plot)
        d["plot"] = args.out_plot
    stable = all(c["components"]["stable"] for c in comps if c["components"])
    summary = ", ".join(f"{tuple(c['signature'])}: {c['components']['count']}" for c in comps if c["components"])
    return d, summary, stable


COMMANDS = {
    "classify": (cmd_classify, "match against the built-in normal form tables"),
    "codim": (cmd_codim, "Ge- and G-codimension with stabilization certificate"),
    "tangent-dim": (cmd_tangent_dim, "orbit tangent dimension of a k-jet (--degree k)"),
    "transversal": (cmd_transversal, "complete transversal over a k-jet (--degree k)"),
    "qh": (cmd_qh, "find diagonal quasi-homogeneous weights"),
    "sqh-obstruct": (cmd_sqh, "trace obstruction to symmetric quasi-homogeneity"),
    "lda": (cmd_lda, "linear parts of the isotropy Lie algebra (--degree D)"),
    "divmod": (cmd_divmod, "dimension of jets modulo the divergence module (--degree d)"),
    "witness": (cmd_witness, "verify a congruence witness given in the document"),
    "orient-search": (cmd_orient, "search for orientation-reversing isotropy"),
    "split": (cmd_split, "volume-preserving splitting of a table class"),
    "det": (cmd_det, "determinant germ"),
    "milnor": (cmd_milnor, "Milnor number of det"),
    "koszul": (cmd_koszul, "Koszul Betti numbers of the minors ideal"),
    "thm27": (cmd_thm27, "compare mu(det) with codim - beta1 + beta0"),
    "signature": (cmd_signature, "eigenvalue sign regions on a grid"),
}


def cmd_tables(args):
    from .suites import run_suite

    try:
        results = run_suite(args.suite or "all")
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    failed = [c for c in results if not c.ok]
    report = {"suite": args.suite or "all", "cases": len(results), "failed": len(failed),
              "results": [c.as_dict() for c in results]}
    return report, f"{len(results) - len(failed)}/{len(results)} cases pass", not failed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="germlab", description="Symmetric matrix germs under congruence.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--in", dest="input", required=True, help="germ document (JSON)")
        p.add_argument("--dmax", type=int, default=12, help="degree budget")
        p.add_argument("--degree", type=int, default=None, help="jet or truncation degree")
        p.add_argument("--field", choices=("real", "complex"), default=None)
        p.add_argument("--out", default=None, help="write the JSON report here")
        return p

    for name, (_, help_text) in COMMANDS.items():
        p = common(sub.add_parser(name, help=help_text), needs_input=name != "split")
        if name == "signature":
            p.add_argument("--grid-step", default="1/100")
            p.add_argument("--radius", default="1")
            p.add_argument("--plot", dest="out_plot", default=None, help="write an .svg or .csv picture")
        if name == "split":
            p.add_argument("class_id", nargs="?")
            p.add_argument("--in", dest="input", default=None)
            p.add_argument("--suite", default=None, help="table2 or n2m3")
    t = common(sub.add_parser("tables", help="run the corpus regressions"), needs_input=False)
    t.add_argument("--suite", default="all")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "tables":
            report, summary, ok = cmd_tables(args)
        else:
            doc = load_document(args.input) if args.input else {}
            a = germ_from_document(doc) if doc else None
            if args.field is None:
                args.field = doc.get("field", "real") if doc else "real"
            if a is None and args.command != "split":
                raise InputError("missing --in")
            report, summary, ok = COMMANDS[args.command][0](a, doc, args)
            if doc.get("name"):
                report = {"name": doc["name"], **report}
    except InputError as exc:
        print(f"germlab: {exc}", file=sys.stderr)
        return 2
    text = _dump(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
