"""
Symbolic and numeric inequality systems over rate variables.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from rate_regions.models.linear import Bound, Equality, Inequality, LinearForm
from rate_regions.models.messages import MESSAGE, RateVariable
from rate_regions.utils.errors import PolyhedronError


@dataclass(frozen=True)
class SymbolicPolyhedron:
    """
    A region whose right-hand sides are mutual-information atoms.
    """

    variables: Tuple[RateVariable, ...]
    equalities: Tuple[Equality, ...]
    inequalities: Tuple[Inequality, ...]
    K: int
    title: str = ""

    def __post_init__(self):
        declared = set(self.variable_names)
        for row in list(self.equalities) + list(self.inequalities):
            unknown = set(row.lhs.variables) - declared
            if unknown:
                raise PolyhedronError(f"row '{row.label}' uses undeclared variables {sorted(unknown)}")

    @property
    def variable_names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def message_variables(self) -> Tuple[RateVariable, ...]:
        return tuple(v for v in self.variables if v.kind == MESSAGE)

    def variable(self, name: str) -> RateVariable:
        for v in self.variables:
            if v.name == name:
                return v
        raise PolyhedronError(f"unknown variable {name}")

    def with_nonnegativity(self) -> "SymbolicPolyhedron":
        """Append -x <= 0 for every variable, so elimination keeps sign constraints."""
        rows = tuple(
            Inequality(LinearForm.variable(name, -1), Bound(), f"{name} >= 0") for name in self.variable_names
        )
        return SymbolicPolyhedron(self.variables, self.equalities, self.inequalities + rows, self.K, self.title)

    def render(self) -> str:
        order = self.variable_names
        lines = []
        if self.title:
            lines.append(f"# {self.title}")
        lines.append("# variables: " + " ".join(order))
        lines.extend(e.render(order) for e in self.equalities)
        lines.extend(i.render(order) for i in self.inequalities)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Row:
    """coeffs . x <= bound (or = bound when used as an equality)."""

    coeffs: Tuple[Fraction, ...]
    bound: Fraction
    label: str = ""
    ancestry: FrozenSet[int] = field(default_factory=frozenset)

    def value(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * Fraction(x) for c, x in zip(self.coeffs, point)), Fraction(0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def render(self, variables: Sequence[str], sense: str = "<=") -> str:
        lhs = LinearForm(dict(zip(variables, self.coeffs))).render(variables)
        return f"{lhs} {sense} {self.bound}"


def _as_row(row, width: int) -> Row:
    if isinstance(row, Row):
        result = Row(tuple(Fraction(c) for c in row.coeffs), Fraction(row.bound), row.label, frozenset(row.ancestry))
    else:
        coeffs, bound = row
        result = Row(tuple(Fraction(c) for c in coeffs), Fraction(bound))
    if len(result.coeffs) != width:
        raise PolyhedronError(f"row has {len(result.coeffs)} coefficients, expected {width}")
    return result


@dataclass(frozen=True)
class NumericPolyhedron:
    """
    {x : A x <= b, C x = d} with exact rational entries.
    """

    variables: Tuple[str, ...]
    inequalities: Tuple[Row, ...]
    equalities: Tuple[Row, ...] = ()

    def __post_init__(self):
        width = len(self.variables)
        if len(set(self.variables)) != width:
            raise PolyhedronError("duplicate variable names")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "inequalities", tuple(_as_row(r, width) for r in self.inequalities))
        object.__setattr__(self, "equalities", tuple(_as_row(r, width) for r in self.equalities))

    @classmethod
    def from_forms(
        cls,
        variables: Sequence[str],
        inequalities: Iterable[Tuple[LinearForm, Fraction, str]],
        equalities: Iterable[Tuple[LinearForm, Fraction, str]] = (),
        nonnegative: bool = False,
    ) -> "NumericPolyhedron":
        """
        Build a polyhedron from (form, bound, label) triples.

        Args:
            variables: Column order
            inequalities: Rows form <= bound
            equalities: Rows form = bound
            nonnegative: Append x >= 0 for every variable

        Returns:
            The polyhedron
        """
        variables = tuple(variables)

        def to_row(form: LinearForm, bound, label: str) -> Row:
            unknown = set(form.variables) - set(variables)
            if unknown:
                raise PolyhedronError(f"row '{label}' uses undeclared variables {sorted(unknown)}")
            return Row(tuple(form.coefficient(v) for v in variables), Fraction(bound), label)

        rows = [to_row(*item) for item in inequalities]
        if nonnegative:
            rows.extend(nonnegativity_rows(variables))
        eqs = [to_row(*item) for item in equalities]
        return cls(variables, tuple(rows), tuple(eqs))

    @property
    def dimension(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PolyhedronError(f"unknown variable {name}")

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.dimension:
            raise PolyhedronError(f"point has {len(point)} coordinates, expected {self.dimension}")
        return all(r.value(point) <= r.bound for r in self.inequalities) and all(
            r.value(point) == r.bound for r in self.equalities
        )

    def all_rows(self) -> List[Row]:
        """Inequalities followed by equalities; the index space of ancestry sets."""
        return list(self.inequalities) + list(self.equalities)

    def with_provenance(self) -> "NumericPolyhedron":
        """Tag every row with its own index so eliminations can track ancestry."""
        ineqs = tuple(replace(r, ancestry=frozenset([i])) for i, r in enumerate(self.inequalities))
        offset = len(ineqs)
        eqs = tuple(replace(r, ancestry=frozenset([offset + i])) for i, r in enumerate(self.equalities))
        return NumericPolyhedron(self.variables, ineqs, eqs)

    def reorder(self, variables: Sequence[str]) -> "NumericPolyhedron":
        """Same polyhedron with its columns permuted to the given order."""
        if sorted(variables) != sorted(self.variables):
            raise PolyhedronError(f"cannot reorder {self.variables} as {tuple(variables)}")
        positions = [self.variables.index(v) for v in variables]

        def permute(r: Row) -> Row:
            return replace(r, coeffs=tuple(r.coeffs[p] for p in positions))

        return NumericPolyhedron(
            tuple(variables),
            tuple(permute(r) for r in self.inequalities),
            tuple(permute(r) for r in self.equalities),
        )

    def fix(self, values: Mapping[str, Fraction]) -> "NumericPolyhedron":
        """Substitute fixed values for some variables and drop their columns."""
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        fixed = [(i, Fraction(values[v])) for i, v in enumerate(self.variables) if v in values]

        def substitute(r: Row) -> Row:
            shift = sum((r.coeffs[i] * x for i, x in fixed), Fraction(0))
            return replace(r, coeffs=tuple(r.coeffs[i] for i in keep), bound=r.bound - shift)

        return NumericPolyhedron(
            tuple(self.variables[i] for i in keep),
            tuple(substitute(r) for r in self.inequalities),
            tuple(substitute(r) for r in self.equalities),
        )

    def render(self) -> str:
        lines = ["# variables: " + " ".join(self.variables)]
        lines.extend(r.render(self.variables, "=") for r in self.equalities)
        lines.extend(r.render(self.variables) for r in self.inequalities)
        return "\n".join(lines) + "\n"


def nonnegativity_rows(variables: Sequence[str]) -> List[Row]:
    width = len(variables)
    return [
        Row(tuple(Fraction(-1) if k == i else Fraction(0) for k in range(width)), Fraction(0), f"{name} >= 0")
        for i, name in enumerate(variables)
    ]


def infeasible_polyhedron(variables: Sequence[str], label: str = "infeasible") -> NumericPolyhedron:
    """The empty set written as the single row 0 <= -1."""
    width = len(variables)
    return NumericPolyhedron(tuple(variables), (Row(tuple([Fraction(0)] * width), Fraction(-1), label),))
