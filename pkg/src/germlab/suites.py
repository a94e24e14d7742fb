"""Regression suites over the built-in corpus.

Each suite yields one :class:`CaseResult` per corpus item, in corpus order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from . import catalog


@dataclass
class CaseResult:
    suite: str
    case: str
    ok: bool
    expected: object
    got: object

    def as_dict(self):
        return {"suite": self.suite, "case": self.case, "ok": self.ok, "expected": self.expected, "got": self.got}


def _table1() -> Iterator[CaseResult]:
    from .pencil import classify_one_jet, one_jet_of

    for row in catalog.rows_of("table1"):
        a = catalog.render(row["entries"], {})
        got = classify_one_jet(*one_jet_of(a)).class_id
        yield CaseResult("table1", row["id"], got == row["id"], row["id"], got)


def _codims(table: str, max_param: int) -> Iterator[CaseResult]:
    from .tangent import ge_codimension

    for e in catalog.instances(table, max_param=max_param):
        want = e.column("codim")
        got = ge_codimension(e.germ, 12).value
        yield CaseResult(table, e.label, got == want, want, got)


def _table4() -> Iterator[CaseResult]:
    from .tangent import mather_stratum_check

    family, r, k, strata = catalog.table4_family()
    for rep in mather_stratum_check(family, r, strata, k):
        yield CaseResult("table4", rep.name, rep.ok, rep.expected_dim, {"dims": rep.dims, "tangent": rep.tangent_ok})


def _bruce() -> Iterator[CaseResult]:
    from .quasihom import WeightSystem, qh_check

    for name in ("bruce22", "bruce23", "bruce43"):
        r, rows = catalog.bruce_rows(name)
        for row in rows:
            for vals in catalog.parameter_values(row, max_param=4):
                a = catalog.render(row["entries"], vals, r)
                w = WeightSystem(tuple(catalog.affine(f, vals) for f in row["weights"]),
                                 tuple(catalog.affine(f, vals) for f in row["degrees"]))
                label = f"{name}:{catalog.CatalogEntry(name, row['id'], vals, a, row).label}"
                yield CaseResult("bruce", label, qh_check(a, w), w.as_dict(), qh_check(a, w))


def _weights() -> Iterator[CaseResult]:
    from .quasihom import qh_find_diagonal, weight_system_for

    for table in ("table2", "n2m3"):
        for e in catalog.instances(table, max_param=4):
            lam = e.column("uni.weights")
            ws = weight_system_for(e.germ, lam)
            found = qh_find_diagonal(e.germ)
            yield CaseResult("weights", f"{table}:{e.label}", ws is not None and found is not None,
                             {"lambda": lam}, {"table_weights": ws.as_dict() if ws else None,
                                               "found": found.as_dict() if found else None})


def _witnesses() -> Iterator[CaseResult]:
    from .unimodular import CongruenceWitness, verify_congruence_witness

    for table in ("table5", "table7"):
        for row in catalog.witness_rows(table):
            r = 2
            for vals in catalog.parameter_values(row, max_param=4):
                a = catalog.render(row["entries"], vals, r)
                w = CongruenceWitness.from_strings([catalog.render_text(p, vals) for p in row["phi"]],
                                                   [[catalog.render_text(x, vals) for x in xr] for xr in row["x"]], r)
                chk = verify_congruence_witness(a, a, w, a.degree() + 2)
                label = f"{table}:{catalog.CatalogEntry(table, row['id'], vals, a, row).label}"
                yield CaseResult("witnesses", label, chk.holds and chk.orientation_sign == -1,
                                 {"holds": True, "orientation_sign": -1}, chk.as_dict())


def _splitting() -> Iterator[CaseResult]:
    from .unimodular import orientation_forced

    for table in ("table2", "n2m3"):
        for row in catalog.rows_of(table):
            split = row["uni"]["split"]
            if split is None:
                continue
            for vals in catalog.parameter_values(row, max_param=3):
                if any(vals[k] != max(3, row["params"][k]) for k in row.get("params", {})):
                    continue
                a = catalog.render(row["entries"], vals)
                rep = orientation_forced(a)
                label = f"{table}:{catalog.CatalogEntry(table, row['id'], vals, a, row).label}"
                yield CaseResult("splitting", label, rep.proved, True, rep.proved)


SUITES: dict[str, Callable[[], Iterator[CaseResult]]] = {
    "table1": _table1,
    "table2": lambda: _codims("table2", 4),
    "n2m3": lambda: _codims("n2m3", 3),
    "table4": _table4,
    "bruce": _bruce,
    "weights": _weights,
    "witnesses": _witnesses,
    "splitting": _splitting,
}


def run_suite(name: str) -> list[CaseResult]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key]()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return list(SUITES[name]())


__all__ = ["CaseResult", "SUITES", "run_suite"]
