"""
Exact linear expressions: rate-variable forms, mutual-information atoms and
the inequalities built from them.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple, Union

from rate_regions.models.lattice import SetFamily
from rate_regions.utils.errors import LatticeError

Number = Union[int, Fraction]


def format_coefficient(value: Fraction) -> str:
    """Render a positive rational coefficient, omitting 1."""
    if value == 1:
        return ""
    return f"{value} "


def _join_terms(terms: Iterable[Tuple[Fraction, str]]) -> str:
    parts = []
    for coef, text in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        body = f"{format_coefficient(abs(coef))}{text}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


class LinearForm:
    """
    Immutable linear combination of named rate variables with rational
    coefficients. Zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[str, Number]] = None):
        cleaned: Dict[str, Fraction] = {}
        for name, coef in (terms or {}).items():
            value = Fraction(coef)
            if value != 0:
                cleaned[name] = value
        self._terms = cleaned

    @classmethod
    def variable(cls, name: str, coef: Number = 1) -> "LinearForm":
        return cls({name: coef})

    @classmethod
    def total(cls, names: Iterable[str]) -> "LinearForm":
        terms: Dict[str, Fraction] = {}
        for name in names:
            terms[name] = terms.get(name, Fraction(0)) + 1
        return cls(terms)

    @property
    def terms(self) -> Dict[str, Fraction]:
        return dict(self._terms)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self._terms)

    def coefficient(self, name: str) -> Fraction:
        return self._terms.get(name, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "LinearForm") -> "LinearForm":
        terms = dict(self._terms)
        for name, coef in other._terms.items():
            terms[name] = terms.get(name, Fraction(0)) + coef
        return LinearForm(terms)

    def __neg__(self) -> "LinearForm":
        return LinearForm({name: -coef for name, coef in self._terms.items()})

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "LinearForm":
        factor = Fraction(scalar)
        return LinearForm({name: coef * factor for name, coef in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        return sum((coef * Fraction(values[name]) for name, coef in self._terms.items()), Fraction(0))

    def render(self, order: Optional[Sequence[str]] = None) -> str:
        names = list(order) if order is not None else sorted(self._terms)
        names += [n for n in self._terms if n not in names]
        text = _join_terms((self._terms.get(n, Fraction(0)), n) for n in names)
        return text or "0"

    def __repr__(self) -> str:
        return f"LinearForm({self.render()})"


@dataclass(frozen=True)
class MutualInfoAtom:
    """
    I(U_informed; Y_receiver | U_conditioned). The time-sharing variable is
    fixed to a constant and has no field.
    """

    receiver: int
    informed: SetFamily
    conditioned: SetFamily

    def __post_init__(self):
        if not self.informed:
            raise LatticeError("an atom must inform at least one auxiliary")
        if self.informed.masks & self.conditioned.masks:
            raise LatticeError("informed and conditioned families overlap")
        if not 1 <= self.receiver <= self.informed.K:
            raise LatticeError(f"receiver {self.receiver} outside 1..{self.informed.K}")

    @classmethod
    def given_rest(cls, receiver: int, informed: SetFamily, ground: SetFamily) -> "MutualInfoAtom":
        """Atom that conditions on every member of ground outside informed."""
        return cls(receiver, informed, ground - informed)

    @property
    def sort_key(self) -> Tuple:
        return (self.receiver, self.informed.sort_key, self.conditioned.sort_key)

    def render(self) -> str:
        informed = ",".join(f"U_{{{label}}}" for label in self.informed.labels())
        text = f"I({informed};Y_{self.receiver}"
        if self.conditioned:
            text += "|" + ",".join(f"U_{{{label}}}" for label in self.conditioned.labels())
        return text + ")"

    def __str__(self) -> str:
        return self.render()


class Bound:
    """
    Right-hand side of a symbolic inequality: a rational combination of
    mutual-information atoms plus a rational constant.
    """

    __slots__ = ("_atoms", "constant")

    def __init__(self, atoms: Optional[Mapping[MutualInfoAtom, Number]] = None, constant: Number = 0):
        cleaned: Dict[MutualInfoAtom, Fraction] = {}
        for atom, coef in (atoms or {}).items():
            value = Fraction(coef)
            if value != 0:
                cleaned[atom] = value
        self._atoms = cleaned
        self.constant = Fraction(constant)

    @classmethod
    def of_atoms(cls, *atoms: MutualInfoAtom) -> "Bound":
        result = cls()
        for atom in atoms:
            result = result + cls({atom: 1})
        return result

    @property
    def atoms(self) -> Dict[MutualInfoAtom, Fraction]:
        return dict(self._atoms)

    def coefficient(self, atom: MutualInfoAtom) -> Fraction:
        return self._atoms.get(atom, Fraction(0))

    def is_constant(self) -> bool:
        return not self._atoms

    def is_nonnegative(self) -> bool:
        """True when every coefficient and the constant are >= 0 (atoms are nonnegative)."""
        return self.constant >= 0 and all(c >= 0 for c in self._atoms.values())

    def __add__(self, other: "Bound") -> "Bound":
        atoms = dict(self._atoms)
        for atom, coef in other._atoms.items():
            atoms[atom] = atoms.get(atom, Fraction(0)) + coef
        return Bound(atoms, self.constant + other.constant)

    def __neg__(self) -> "Bound":
        return Bound({a: -c for a, c in self._atoms.items()}, -self.constant)

    def __sub__(self, other: "Bound") -> "Bound":
        return self + (-other)

    def __mul__(self, scalar: Number) -> "Bound":
        factor = Fraction(scalar)
        return Bound({a: c * factor for a, c in self._atoms.items()}, self.constant * factor)

    __rmul__ = __mul__

    def termwise_le(self, other: "Bound") -> bool:
        """True when other - self has only nonnegative coefficients."""
        return (other - self).is_nonnegative()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Bound)
            and self._atoms == other._atoms
            and self.constant == other.constant
        )

    def __hash__(self) -> int:
        return hash((frozenset(self._atoms.items()), self.constant))

    def evaluate(self, value_of: Callable[[MutualInfoAtom], Fraction]) -> Fraction:
        return self.constant + sum(
            (coef * value_of(atom) for atom, coef in self._atoms.items()), Fraction(0)
        )

    def render(self) -> str:
        ordered = sorted(self._atoms.items(), key=lambda item: item[0].sort_key)
        text = _join_terms((coef, atom.render()) for atom, coef in ordered)
        if self.constant != 0:
            if not text:
                text = str(self.constant)
            else:
                sign = "-" if self.constant < 0 else "+"
                text += f" {sign} {abs(self.constant)}"
        return text or "0"

    def __repr__(self) -> str:
        return f"Bound({self.render()})"


@dataclass(frozen=True)
class Inequality:
    """lhs <= rhs over rate variables and atoms."""

    lhs: LinearForm
    rhs: Bound
    label: str = ""
    ancestry: FrozenSet[int] = field(default_factory=frozenset)

    def render(self, order: Optional[Sequence[str]] = None) -> str:
        return f"{self.lhs.render(order)} <= {self.rhs.render()}"


@dataclass(frozen=True)
class Equality:
    """lhs = rhs over rate variables and atoms."""

    lhs: LinearForm
    rhs: Bound = field(default_factory=Bound)
    label: str = ""
    ancestry: FrozenSet[int] = field(default_factory=frozenset)

    def render(self, order: Optional[Sequence[str]] = None) -> str:
        return f"{self.lhs.render(order)} = {self.rhs.render()}"
