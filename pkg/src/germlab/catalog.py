"""Built-in corpus of normal forms, weights, witnesses and strata.

Rows are stored as templates: ``{l}`` style placeholders for integer
parameters and ``{s}`` style placeholders for signs (rendered as 1 or -1).
Integer-valued columns that depend on parameters (codimensions, weights) are
affine forms ``{"const": c, "l": a, ...}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterator, Mapping

from .polyring import SymMatrixGerm

TABLE_FILES = {
    "table1": "table1.json",
    "table2": "table2.json",
    "n2m3": "n2m3.json",
    "witnesses": "witnesses.json",
    "table4": "table4.json",
    "bruce": "bruce.json",
    "examples": "examples.json",
}


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    if name not in TABLE_FILES:
        raise KeyError(f"unknown table {name!r}")
    text = resources.files("germlab").joinpath("data").joinpath(TABLE_FILES[name]).read_text()
    return json.loads(text)


def affine(form: Mapping[str, int], values: Mapping[str, int]) -> int:
    return sum(c * (1 if k == "const" else values[k]) for k, c in form.items())


def render_text(template: str, values: Mapping[str, int]) -> str:
    return template.format(**{k: str(v) for k, v in values.items()})


def render(rows, values: Mapping[str, int], r: int = 2) -> SymMatrixGerm:
    text = [[None if e is None else render_text(e, values) for e in row] for row in rows]
    return SymMatrixGerm.from_strings(text, r)


@dataclass
class CatalogEntry:
    table: str
    row_id: str
    values: dict[str, int]
    germ: SymMatrixGerm
    row: dict = field(repr=False)

    @property
    def label(self) -> str:
        if not self.values:
            return self.row_id
        parts = []
        for k, v in self.values.items():
            parts.append(f"{k}={'+' if v > 0 else '-'}" if k.startswith(("s", "u")) else f"{k}={v}")
        return f"{self.row_id}[{','.join(parts)}]"

    def column(self, name: str) -> int | list[int] | None:
        """Evaluate an affine column (e.g. ``codim``) or a list of them (e.g. ``uni.weights``)."""
        node = self.row
        for part in name.split("."):
            node = node.get(part) if isinstance(node, dict) else None
            if node is None:
                return None
        if isinstance(node, list):
            return [affine(f, self.values) for f in node]
        return affine(node, self.values)


def parameter_values(row: dict, max_param: int = 4, signs: bool = True) -> Iterator[dict[str, int]]:
    lows = row.get("params", {})
    names = list(lows)
    sign_names = row.get("signs", [])
    ranges = [range(lows[k], max_param + 1) for k in names]
    for combo in product(*ranges):
        vals = dict(zip(names, combo))
        if any(vals[a] < vals[b] for a, b in row.get("constraints", [])):
            continue
        for sv in product((1, -1) if signs else (1,), repeat=len(sign_names)):
            yield {**vals, **dict(zip(sign_names, sv))}


def rows_of(table: str) -> list[dict]:
    data = load(table)
    return data["rows"]


def find_row(table: str, row_id: str) -> dict:
    for row in rows_of(table):
        if row["id"] == str(row_id):
            return row
    raise KeyError(f"no class {row_id!r} in {table}")


def instances(table: str, row_id: str | None = None, max_param: int = 4, signs: bool = True,
              printed: bool = False) -> Iterator[CatalogEntry]:
    """Instantiate rows of ``table`` for parameters up to ``max_param``."""
    for row in rows_of(table):
        if row_id is not None and row["id"] != str(row_id):
            continue
        template = row.get("printed_entries", row["entries"]) if printed else row["entries"]
        for vals in parameter_values(row, max_param, signs):
            yield CatalogEntry(table, row["id"], vals, render(template, vals), row)


def germ(table: str, row_id: str, **values: int) -> SymMatrixGerm:
    row = find_row(table, row_id)
    vals = {k: 1 for k in row.get("signs", [])}
    vals.update(row.get("params", {}))
    vals.update(values)
    return render(row["entries"], vals)


def witness_rows(table: str) -> list[dict]:
    return load("witnesses")["tables"][table]


def bruce_rows(table: str) -> tuple[int, list[dict]]:
    data = load("bruce")["tables"][table]
    return data["r"], data["rows"]


def table4_family():
    """The 2-jet family over class 2 (x1..x2 then c1..c4) and its declared strata."""
    from fractions import Fraction

    from .polyring import parse_polynomial
    from .tangent import Stratum

    data = load("table4")
    r, m = data["r"], len(data["parameters"])
    names = {c: f"x{r + i + 1}" for i, c in enumerate(data["parameters"])}

    def poly(text):
        for c, x in names.items():
            text = text.replace(c, x)
        return parse_polynomial(text, r + m)

    family = SymMatrixGerm([[None if e is None else poly(e) for e in row] for row in data["family"]], r + m,
                           check=False)
    strata = []
    for s in data["strata"]:
        strata.append(Stratum(s["name"], s["dim"],
                              [_params_only(poly(e), r) for e in s["equations"]],
                              [_params_only(poly(e), r) for e in s["inequations"]],
                              [tuple(Fraction(v) for v in pt) for pt in s["samples"]]))
    return family, r, data["k"], strata


def _params_only(p, r):
    from .polyring import Polynomial

    return Polynomial({m[r:]: c for m, c in p.items()}, p.nvars - r)


def example(name: str) -> dict:
    return load("examples")["germs"][name]


__all__ = [
    "CatalogEntry",
    "load",
    "affine",
    "render",
    "render_text",
    "instances",
    "parameter_values",
    "rows_of",
    "find_row",
    "germ",
    "witness_rows",
    "bruce_rows",
    "example",
    "table4_family",
]
