"""
Serialization of regions and polyhedra.

- Text matrix format: a `# variables: x y` header, then one row per line with
  the coefficients followed by the constant. A leading `=` marks an equality
  row and a trailing `# label` names the row.
- JSON dumps tagged with a format name, loadable again.
- CSV vertex lists through pandas.
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence

import pandas as pd

from rate_regions.models.lattice import ReceiverSet, SetFamily
from rate_regions.models.linear import Bound, Equality, Inequality, LinearForm, MutualInfoAtom
from rate_regions.models.messages import RateVariable
from rate_regions.models.polyhedra import NumericPolyhedron, Row, SymbolicPolyhedron
from rate_regions.utils.config_loader import parse_rational
from rate_regions.utils.errors import PolyhedronError

logger = logging.getLogger(__name__)

SYMBOLIC_FORMAT = "rate_regions.symbolic/1"
NUMERIC_FORMAT = "rate_regions.numeric/1"


def read_matrix(text: str) -> NumericPolyhedron:
    """
    Parse the text matrix format.

    Args:
        text: File contents

    Returns:
        The numeric polyhedron
    """
    variables = None
    ineqs: List[Row] = []
    eqs: List[Row] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("variables:"):
                variables = tuple(body[len("variables:"):].split())
            continue
        if variables is None:
            raise PolyhedronError(f"line {number}: rows before the '# variables:' header")
        data, _, label = line.partition("#")
        tokens = data.split()
        equality = bool(tokens) and tokens[0] == "="
        if equality:
            tokens = tokens[1:]
        if len(tokens) != len(variables) + 1:
            raise PolyhedronError(f"line {number}: expected {len(variables) + 1} numbers, got {len(tokens)}")
        try:
            values = [parse_rational(t) for t in tokens]
        except ValueError as e:
            raise PolyhedronError(f"line {number}: {e}")
        row = Row(tuple(values[:-1]), values[-1], label.strip())
        (eqs if equality else ineqs).append(row)
    if variables is None:
        raise PolyhedronError("missing '# variables:' header")
    return NumericPolyhedron(variables, tuple(ineqs), tuple(eqs))


def write_matrix(poly: NumericPolyhedron) -> str:
    lines = ["# variables: " + " ".join(poly.variables)]
    for prefix, rows in (("= ", poly.equalities), ("", poly.inequalities)):
        for row in rows:
            text = prefix + " ".join(str(v) for v in row.coeffs + (row.bound,))
            if row.label:
                text += f"  # {row.label}"
            lines.append(text)
    return "\n".join(lines) + "\n"


def _labels(family: SetFamily) -> List[str]:
    return family.labels()


def _atom_doc(atom: MutualInfoAtom) -> Dict[str, Any]:
    return {
        "receiver": atom.receiver,
        "informed": _labels(atom.informed),
        "conditioned": _labels(atom.conditioned),
    }


def _bound_doc(bound: Bound) -> Dict[str, Any]:
    ordered = sorted(bound.atoms.items(), key=lambda item: item[0].sort_key)
    return {
        "constant": str(bound.constant),
        "atoms": [dict(_atom_doc(atom), coefficient=str(coef)) for atom, coef in ordered],
    }


def _form_doc(form: LinearForm, order: Sequence[str]) -> Dict[str, str]:
    return {name: str(form.coefficient(name)) for name in order if form.coefficient(name) != 0}


def dump_symbolic(sym: SymbolicPolyhedron) -> Dict[str, Any]:
    """JSON-ready document for a symbolic region."""
    order = sym.variable_names

    def row_doc(row) -> Dict[str, Any]:
        return {"lhs": _form_doc(row.lhs, order), "rhs": _bound_doc(row.rhs), "label": row.label}

    return {
        "format": SYMBOLIC_FORMAT,
        "K": sym.K,
        "title": sym.title,
        "variables": [
            {
                "kind": v.kind,
                "origin": v.origin.label(sym.K),
                "target": v.target.label(sym.K) if v.target is not None else None,
            }
            for v in sym.variables
        ],
        "equalities": [row_doc(e) for e in sym.equalities],
        "inequalities": [row_doc(i) for i in sym.inequalities],
    }


def load_symbolic(doc: Dict[str, Any]) -> SymbolicPolyhedron:
    if doc.get("format") != SYMBOLIC_FORMAT:
        raise PolyhedronError(f"expected format {SYMBOLIC_FORMAT}, got {doc.get('format')!r}")
    K = doc["K"]

    def family(labels: Iterable[str]) -> SetFamily:
        return SetFamily.parse(labels, K)

    def bound(data: Dict[str, Any]) -> Bound:
        atoms = {
            MutualInfoAtom(a["receiver"], family(a["informed"]), family(a["conditioned"])): Fraction(a["coefficient"])
            for a in data["atoms"]
        }
        return Bound(atoms, Fraction(data["constant"]))

    def form(data: Dict[str, str]) -> LinearForm:
        return LinearForm({name: Fraction(value) for name, value in data.items()})

    variables = tuple(
        RateVariable(
            v["kind"],
            ReceiverSet.parse(v["origin"], K),
            K,
            ReceiverSet.parse(v["target"], K) if v["target"] is not None else None,
        )
        for v in doc["variables"]
    )
    return SymbolicPolyhedron(
        variables,
        tuple(Equality(form(e["lhs"]), bound(e["rhs"]), e["label"]) for e in doc["equalities"]),
        tuple(Inequality(form(i["lhs"]), bound(i["rhs"]), i["label"]) for i in doc["inequalities"]),
        K,
        doc.get("title", ""),
    )


def dump_numeric(poly: NumericPolyhedron) -> Dict[str, Any]:
    def row_doc(row: Row) -> Dict[str, Any]:
        return {"coefficients": [str(c) for c in row.coeffs], "bound": str(row.bound), "label": row.label}

    return {
        "format": NUMERIC_FORMAT,
        "variables": list(poly.variables),
        "equalities": [row_doc(r) for r in poly.equalities],
        "inequalities": [row_doc(r) for r in poly.inequalities],
    }


def load_numeric(doc: Dict[str, Any]) -> NumericPolyhedron:
    if doc.get("format") != NUMERIC_FORMAT:
        raise PolyhedronError(f"expected format {NUMERIC_FORMAT}, got {doc.get('format')!r}")

    def row(data: Dict[str, Any]) -> Row:
        return Row(tuple(Fraction(c) for c in data["coefficients"]), Fraction(data["bound"]), data.get("label", ""))

    return NumericPolyhedron(
        tuple(doc["variables"]),
        tuple(row(r) for r in doc["inequalities"]),
        tuple(row(r) for r in doc["equalities"]),
    )


def to_json(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def load_json(text: str):
    """Load a dump of either kind."""
    doc = json.loads(text)
    if doc.get("format") == SYMBOLIC_FORMAT:
        return load_symbolic(doc)
    return load_numeric(doc)


def vertices_frame(vertices: Iterable[Sequence[Fraction]], variables: Sequence[str]) -> pd.DataFrame:
    """One row per vertex, exact values as strings."""
    rows = [[str(Fraction(c)) for c in v] for v in vertices]
    return pd.DataFrame(rows, columns=list(variables))


def vertices_csv(vertices: Iterable[Sequence[Fraction]], variables: Sequence[str]) -> str:
    return vertices_frame(vertices, variables).to_csv(index=False, lineterminator="\n")
