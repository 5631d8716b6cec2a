"""
Exact polyhedral projection.

Fourier-Motzkin elimination works on both symbolic regions (atoms treated as
opaque nonnegative symbols) and numeric polyhedra. Redundancy removal solves
one exact LP per row. Vertex enumeration and the cdd convex hull give an
independent projection used to cross-check elimination.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import cdd

from rate_regions.config import (
    VERTEX_COMBINATION_GUARD,
    VERTEX_DIMENSION_GUARD,
    VERTEX_ROW_GUARD,
)
from rate_regions.models.linear import Bound, Equality, Inequality, LinearForm
from rate_regions.models.messages import RateVariable
from rate_regions.models.polyhedra import NumericPolyhedron, Row, SymbolicPolyhedron, infeasible_polyhedron
from rate_regions.utils.errors import GuardExceededError, PolyhedronError, UnboundedPolyhedronError
from rate_regions.utils.rational_lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    farkas_certificate,
    find_feasible_point,
    maximize,
    rank,
    solve_linear_system,
)

logger = logging.getLogger(__name__)

Polyhedron = Union[NumericPolyhedron, SymbolicPolyhedron]
VariableRef = Union[str, RateVariable]


@dataclass(frozen=True)
class _Row:
    form: LinearForm
    rhs: Union[Fraction, Bound]
    ancestry: FrozenSet[int]
    label: str = ""


@dataclass(frozen=True, order=True)
class Vertex:
    """An extreme point with exact coordinates."""

    coordinates: Tuple[Fraction, ...]

    def as_dict(self, variables: Sequence[str]) -> Dict[str, Fraction]:
        return dict(zip(variables, self.coordinates))


def _name(var: VariableRef) -> str:
    return var.name if isinstance(var, RateVariable) else str(var)


def _is_trivial(row: _Row) -> bool:
    if not row.form.is_zero():
        return False
    if isinstance(row.rhs, Bound):
        return row.rhs.is_nonnegative()
    return row.rhs >= 0


def _dominance_prune(rows: List[_Row], order: Sequence[str]) -> List[_Row]:
    """
    Drop trivial rows and rows implied by a parallel row with a smaller right
    side (termwise smaller in symbolic mode).
    """
    groups: Dict[Tuple, List[Tuple[_Row, Union[Fraction, Bound]]]] = {}
    keys: List[Tuple] = []
    for row in rows:
        if _is_trivial(row):
            continue
        lead = next((v for v in order if row.form.coefficient(v) != 0), None)
        scale = Fraction(1) / abs(row.form.coefficient(lead)) if lead is not None else Fraction(1)
        key = tuple((v, row.form.coefficient(v) * scale) for v in order if row.form.coefficient(v) != 0)
        if key not in groups:
            groups[key] = []
            keys.append(key)
        groups[key].append((row, row.rhs * scale))

    kept: List[_Row] = []
    for key in keys:
        members = groups[key]
        if isinstance(members[0][1], Bound):
            for idx, (row, rhs) in enumerate(members):
                dominated = any(
                    other_rhs.termwise_le(rhs) and (not rhs.termwise_le(other_rhs) or k < idx)
                    for k, (_, other_rhs) in enumerate(members)
                    if k != idx
                )
                if not dominated:
                    kept.append(row)
        else:
            kept.append(min(members, key=lambda item: item[1])[0])
    return kept


def _to_internal(poly: Polyhedron) -> Tuple[List[str], List[_Row], List[_Row]]:
    if isinstance(poly, SymbolicPolyhedron):
        order = list(poly.variable_names)
        ineqs = [_Row(r.lhs, r.rhs, r.ancestry, r.label) for r in poly.inequalities]
        eqs = [_Row(r.lhs, r.rhs, r.ancestry, r.label) for r in poly.equalities]
    else:
        order = list(poly.variables)
        ineqs = [_Row(LinearForm(dict(zip(order, r.coeffs))), r.bound, r.ancestry, r.label) for r in poly.inequalities]
        eqs = [_Row(LinearForm(dict(zip(order, r.coeffs))), r.bound, r.ancestry, r.label) for r in poly.equalities]
    if not any(r.ancestry for r in ineqs + eqs):
        offset = len(ineqs)
        ineqs = [_Row(r.form, r.rhs, frozenset([i]), r.label) for i, r in enumerate(ineqs)]
        eqs = [_Row(r.form, r.rhs, frozenset([offset + i]), r.label) for i, r in enumerate(eqs)]
    return order, ineqs, eqs


def _from_internal(poly: Polyhedron, order: List[str], ineqs: List[_Row], eqs: List[_Row]) -> Polyhedron:
    if isinstance(poly, SymbolicPolyhedron):
        variables = tuple(v for v in poly.variables if v.name in order)
        return SymbolicPolyhedron(
            variables,
            tuple(Equality(r.form, r.rhs, r.label, r.ancestry) for r in eqs),
            tuple(Inequality(r.form, r.rhs, r.label, r.ancestry) for r in ineqs),
            poly.K,
            poly.title,
        )

    def to_row(r: _Row) -> Row:
        return Row(tuple(r.form.coefficient(v) for v in order), r.rhs, r.label, r.ancestry)

    return NumericPolyhedron(tuple(order), tuple(to_row(r) for r in ineqs), tuple(to_row(r) for r in eqs))


def _eliminate_step(name: str, ineqs: List[_Row], eqs: List[_Row]) -> Tuple[List[_Row], List[_Row]]:
    pivot = next((e for e in eqs if e.form.coefficient(name) != 0), None)
    if pivot is not None:
        c = pivot.form.coefficient(name)

        def substitute(r: _Row) -> _Row:
            a = r.form.coefficient(name)
            if a == 0:
                return r
            factor = a / c
            return _Row(r.form - pivot.form * factor, r.rhs - pivot.rhs * factor, r.ancestry | pivot.ancestry, r.label)

        logger.debug(f"eliminate {name} by substitution from '{pivot.label}'")
        return [substitute(r) for r in ineqs], [substitute(e) for e in eqs if e is not pivot]

    zero, positive, negative = [], [], []
    for r in ineqs:
        a = r.form.coefficient(name)
        if a > 0:
            positive.append(r)
        elif a < 0:
            negative.append(r)
        else:
            zero.append(r)
    combined = list(zero)
    for p in positive:
        a = p.form.coefficient(name)
        for n in negative:
            b = -n.form.coefficient(name)
            combined.append(_Row(p.form * b + n.form * a, p.rhs * b + n.rhs * a, p.ancestry | n.ancestry))
    logger.debug(f"eliminate {name}: z={len(zero)}, p={len(positive)}, n={len(negative)} -> {len(combined)} rows")
    return combined, eqs


def fme_eliminate(poly: Polyhedron, var: VariableRef, redundancy: bool = True) -> Polyhedron:
    """
    Project one variable away.

    Equalities mentioning the variable are used for substitution first;
    otherwise rows are paired by the sign of its coefficient. Dominated rows
    are pruned after every step; numeric systems also get the LP redundancy
    pass when requested.

    Args:
        poly: Numeric or symbolic polyhedron
        var: Variable (or its name) to eliminate
        redundancy: Run remove_redundant on numeric results

    Returns:
        A polyhedron of the same kind without the variable
    """
    name = _name(var)
    order, ineqs, eqs = _to_internal(poly)
    if name not in order:
        raise PolyhedronError(f"{name} is not a variable of this polyhedron")
    remaining = [v for v in order if v != name]
    if all(r.form.coefficient(name) == 0 for r in ineqs + eqs):
        return _from_internal(poly, remaining, ineqs, eqs)

    ineqs, eqs = _eliminate_step(name, ineqs, eqs)
    ineqs = _dominance_prune(ineqs, remaining)
    live_eqs = []
    for e in eqs:
        if e.form.is_zero():
            zero_rhs = e.rhs.is_constant() and e.rhs.constant == 0 if isinstance(e.rhs, Bound) else e.rhs == 0
            if zero_rhs:
                continue
            if not isinstance(e.rhs, Bound):
                # 0 = d with d != 0: keep the contradiction as 0 <= -|d|
                ineqs.append(_Row(LinearForm(), -abs(e.rhs), e.ancestry, e.label))
                continue
        live_eqs.append(e)
    result = _from_internal(poly, remaining, ineqs, live_eqs)
    if redundancy and isinstance(result, NumericPolyhedron):
        result = remove_redundant(result)
    return result


def eliminate_variables(poly: Polyhedron, variables: Iterable[VariableRef], redundancy: bool = True) -> Polyhedron:
    """Eliminate several variables in the given order."""
    result = poly
    for var in variables:
        result = fme_eliminate(result, var, redundancy)
    return result


def _elimination_cost(poly: Polyhedron, name: str) -> Tuple[int, int]:
    if isinstance(poly, SymbolicPolyhedron):
        ineq = [r.lhs.coefficient(name) for r in poly.inequalities]
        eq = [r.lhs.coefficient(name) for r in poly.equalities]
    else:
        k = poly.index(name)
        ineq = [r.coeffs[k] for r in poly.inequalities]
        eq = [r.coeffs[k] for r in poly.equalities]
    if any(c != 0 for c in eq):
        return 0, 0
    positive = sum(1 for c in ineq if c > 0)
    negative = sum(1 for c in ineq if c < 0)
    return 1, positive * negative - positive - negative


def project_by_fme(poly: Polyhedron, keep: Sequence[VariableRef], redundancy: bool = True) -> Polyhedron:
    """
    Eliminate every variable not in keep, always taking next the variable
    with an equality pivot or else the fewest new rows.
    """
    keep_names = [_name(v) for v in keep]
    names = poly.variable_names if isinstance(poly, SymbolicPolyhedron) else poly.variables
    unknown = set(keep_names) - set(names)
    if unknown:
        raise PolyhedronError(f"cannot keep unknown variables {sorted(unknown)}")
    pending = [v for v in names if v not in keep_names]
    result = poly
    while pending:
        name = min(pending, key=lambda v: _elimination_cost(result, v))
        pending.remove(name)
        result = fme_eliminate(result, name, redundancy)
    if isinstance(result, NumericPolyhedron):
        result = result.reorder(keep_names)
    return result


def _lp_rows(rows: Sequence[Row]):
    return [r.coeffs for r in rows], [r.bound for r in rows]


def infeasibility_certificate(poly: NumericPolyhedron) -> Optional[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
    """Farkas multipliers for the inequalities and equalities, or None if feasible."""
    A, b = _lp_rows(poly.inequalities)
    E, d = _lp_rows(poly.equalities)
    return farkas_certificate(A, b, E, d)


def is_feasible(poly: NumericPolyhedron) -> bool:
    A, b = _lp_rows(poly.inequalities)
    E, d = _lp_rows(poly.equalities)
    return find_feasible_point(A, b, E, d, n=poly.dimension).status != INFEASIBLE


def _row_status(poly: NumericPolyhedron, index: int, others: Sequence[Row]) -> str:
    row = poly.inequalities[index]
    A, b = _lp_rows(others)
    E, d = _lp_rows(poly.equalities)
    result = maximize(row.coeffs, A, b, E, d)
    if result.status == UNBOUNDED:
        return "unbounded"
    if result.status == OPTIMAL and result.value <= row.bound:
        return "redundant"
    return "irredundant"


def redundancy_report(poly: NumericPolyhedron) -> List[str]:
    """
    Classify each inequality against all the others: "redundant",
    "irredundant", or "unbounded" when the others leave its direction open.
    """
    rows = list(poly.inequalities)
    return [_row_status(poly, i, rows[:i] + rows[i + 1:]) for i in range(len(rows))]


def remove_redundant(poly: NumericPolyhedron) -> NumericPolyhedron:
    """
    Minimal subsystem with the same feasible set.

    A row is dropped when maximizing its left side over the rows still kept
    cannot exceed its right side. An empty polyhedron collapses to a single
    0 <= -1 row whose ancestry is an irreducible infeasible subsystem.

    Args:
        poly: The numeric polyhedron

    Returns:
        The reduced polyhedron
    """
    order, ineqs, eqs = _to_internal(poly)
    pruned = _from_internal(poly, order, _dominance_prune(ineqs, order), eqs)
    certificate = infeasibility_certificate(pruned)
    if certificate is not None:
        y, z = certificate
        rows = pruned.all_rows()
        support = frozenset().union(
            *(r.ancestry for r, m in zip(rows, list(y) + list(z)) if m != 0)
        )
        logger.debug(f"polyhedron is empty; blocking ancestry {sorted(support)}")
        empty = infeasible_polyhedron(pruned.variables)
        return NumericPolyhedron(
            empty.variables,
            (Row(empty.inequalities[0].coeffs, Fraction(-1), "infeasible", support),),
        )

    kept = list(range(len(pruned.inequalities)))
    for index in range(len(pruned.inequalities)):
        others = [pruned.inequalities[k] for k in kept if k != index]
        status = _row_status(pruned, index, others)
        if status == "redundant":
            kept.remove(index)
            logger.debug(f"row '{pruned.inequalities[index].label}' is redundant")
        elif status == "unbounded":
            logger.debug(f"row '{pruned.inequalities[index].label}' bounds an otherwise unbounded direction")
    return NumericPolyhedron(pruned.variables, tuple(pruned.inequalities[k] for k in kept), pruned.equalities)


def _check_vertex_guards(poly: NumericPolyhedron):
    if poly.dimension > VERTEX_DIMENSION_GUARD:
        raise GuardExceededError(f"dimension {poly.dimension} exceeds the vertex guard of {VERTEX_DIMENSION_GUARD}")
    if len(poly.inequalities) > VERTEX_ROW_GUARD:
        raise GuardExceededError(f"{len(poly.inequalities)} rows exceed the vertex guard of {VERTEX_ROW_GUARD}")


def check_bounded(poly: NumericPolyhedron):
    """Raise UnboundedPolyhedronError unless every coordinate is bounded both ways."""
    A, b = _lp_rows(poly.inequalities)
    E, d = _lp_rows(poly.equalities)
    for k, name in enumerate(poly.variables):
        for sign in (1, -1):
            objective = [Fraction(sign) if i == k else Fraction(0) for i in range(poly.dimension)]
            if maximize(objective, A, b, E, d).status == UNBOUNDED:
                raise UnboundedPolyhedronError(f"{name} is unbounded {'above' if sign > 0 else 'below'}")


def enumerate_vertices(poly: NumericPolyhedron) -> List[Vertex]:
    """
    All vertices of a bounded polyhedron by active-set search.

    Each subset of inequalities of size dimension minus rank(equalities) is
    solved together with the equalities; unique feasible solutions are
    vertices.

    Args:
        poly: A bounded numeric polyhedron within the vertex guards

    Returns:
        Deduplicated vertices in lexicographic order; empty when infeasible
    """
    _check_vertex_guards(poly)
    if not is_feasible(poly):
        return []
    check_bounded(poly)
    n = poly.dimension
    eq_rows = [r.coeffs for r in poly.equalities]
    eq_rhs = [r.bound for r in poly.equalities]
    active = n - rank(eq_rows, n)
    m = len(poly.inequalities)
    if comb(m, active) > VERTEX_COMBINATION_GUARD:
        raise GuardExceededError(f"{comb(m, active)} active sets exceed the guard of {VERTEX_COMBINATION_GUARD}")
    found = set()
    for subset in combinations(range(m), active):
        matrix = eq_rows + [poly.inequalities[i].coeffs for i in subset]
        rhs = eq_rhs + [poly.inequalities[i].bound for i in subset]
        point = solve_linear_system(matrix, rhs, n)
        if point is not None and poly.contains_point(point):
            found.add(point)
    logger.debug(f"{len(found)} vertices from {comb(m, active)} active sets")
    return [Vertex(p) for p in sorted(found)]


def _normalized(coeffs: Sequence[Fraction], bound: Fraction) -> Tuple[Tuple[Fraction, ...], Fraction]:
    lead = next((abs(c) for c in coeffs if c != 0), Fraction(1))
    return tuple(c / lead for c in coeffs), bound / lead


def hull_polyhedron(points: Iterable[Sequence[Fraction]], variables: Sequence[str]) -> NumericPolyhedron:
    """
    Inequality description of the convex hull of finitely many points.

    The points go to cdd as a generator matrix in exact fraction mode; its
    canonical inequality matrix gives the affine hull as linearity rows and
    one row per facet.

    Args:
        points: Points with len(variables) coordinates
        variables: Column names

    Returns:
        The hull as a NumericPolyhedron
    """
    n = len(variables)
    pts = sorted({tuple(Fraction(c) for c in p) for p in points})
    if not pts:
        return infeasible_polyhedron(variables, "empty hull")
    if any(len(p) != n for p in pts):
        raise PolyhedronError(f"points must have {n} coordinates")

    generators = cdd.Matrix([[1] + list(p) for p in pts], number_type="fraction")
    generators.rep_type = cdd.RepType.GENERATOR
    H = cdd.Polyhedron(generators).get_inequalities()
    H.canonicalize()

    # each row (b, a) of H reads b + a . x >= 0
    rows: List[Row] = []
    equalities: List[Row] = []
    for i in range(H.row_size):
        b, a = Fraction(H[i][0]), [-Fraction(c) for c in H[i][1:]]
        if all(c == 0 for c in a):
            continue
        coeffs, bound = _normalized(a, b)
        if i in H.lin_set:
            equalities.append(Row(coeffs, bound, "affine hull"))
        else:
            rows.append(Row(coeffs, bound, "facet"))
    logger.debug(f"hull of {len(pts)} points: {len(rows)} facets, {len(equalities)} equalities")
    return NumericPolyhedron(tuple(variables), tuple(rows), tuple(equalities))


def project_by_vertices(poly: NumericPolyhedron, keep: Sequence[VariableRef]) -> NumericPolyhedron:
    """
    Projection onto keep as the hull of the projected vertices.

    Args:
        poly: Bounded numeric polyhedron within the vertex guards
        keep: Variables to keep, in output order

    Returns:
        The projected polyhedron
    """
    names = [_name(v) for v in keep]
    positions = [poly.index(v) for v in names]
    vertices = enumerate_vertices(poly)
    return hull_polyhedron([tuple(v.coordinates[p] for p in positions) for v in vertices], names)
