"""
Combination networks, auxiliary component assignments and exact evaluation of
mutual-information atoms by entropy counting.

Every channel component V_S is independent and uniform with entropy C_S and
receiver j observes the components indexed by W_j^P. When each auxiliary U_T
is a fixed collection of components,

    I(U_A; Y_j | U_C) = C over (comp(A) | comp(C)) & W_j^P  -  C over comp(C) & W_j^P.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Union

from rate_regions.models.lattice import ReceiverSet, SetFamily, power_family
from rate_regions.models.linear import MutualInfoAtom
from rate_regions.models.polyhedra import NumericPolyhedron, Row, SymbolicPolyhedron, nonnegativity_rows
from rate_regions.utils.errors import AssignmentError, LatticeError, UnassignedAuxiliaryError

logger = logging.getLogger(__name__)

STRICT = "strict"
INDEPENDENT = "independent"
MODES = (STRICT, INDEPENDENT)


class CombinationNetwork:
    """
    K receivers fed by noiseless links; link S reaches exactly the receivers
    in S and carries C_S per channel use. Missing links have capacity 0.
    """

    def __init__(self, K: int, capacities: Optional[Mapping[ReceiverSet, Union[int, str, Fraction]]] = None):
        self.K = K
        self.ground = power_family(K)
        caps: Dict[ReceiverSet, Fraction] = {}
        for S, value in (capacities or {}).items():
            if S not in self.ground:
                raise LatticeError(f"{S!r} is not a nonempty subset of [1:{K}]")
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"capacity of link {S.label(K)} is negative")
            if value:
                caps[S] = value
        self._caps = caps

    @classmethod
    def from_labels(cls, K: int, capacities: Mapping[str, Union[int, str, Fraction]]) -> "CombinationNetwork":
        return cls(K, {ReceiverSet.parse(label, K): value for label, value in capacities.items()})

    @classmethod
    def zero(cls, K: int) -> "CombinationNetwork":
        return cls(K, {})

    def capacity(self, S: ReceiverSet) -> Fraction:
        return self._caps.get(S, Fraction(0))

    @property
    def links(self) -> Dict[ReceiverSet, Fraction]:
        """Links with nonzero capacity, in lattice order."""
        return {S: self._caps[S] for S in sorted(self._caps)}

    def __eq__(self, other) -> bool:
        return isinstance(other, CombinationNetwork) and self.K == other.K and self._caps == other._caps

    def __repr__(self) -> str:
        body = ", ".join(f"{S.label(self.K)}={c}" for S, c in self.links.items())
        return f"CombinationNetwork(K={self.K}: {body})"


def modular_capacity(net: CombinationNetwork, W: Iterable[ReceiverSet]) -> Fraction:
    """C_W, the total capacity of the links in W."""
    return sum((net.capacity(S) for S in W), Fraction(0))


class AuxAssignment:
    """
    Which channel components each auxiliary U_T carries.

    In strict mode every cloud's components must be carried by all of its
    satellites (U_T contains the components of U_T' for every T' above T).
    Independent mode waives that check for schemes that superpose
    independently generated codebooks.
    """

    def __init__(self, components: Mapping[ReceiverSet, Iterable[ReceiverSet]], K: int, mode: str = INDEPENDENT, name: str = ""):
        if mode not in MODES:
            raise AssignmentError(f"unknown assignment mode '{mode}'")
        self.K = K
        self.mode = mode
        self.name = name
        self._components: Dict[ReceiverSet, SetFamily] = {}
        ground = power_family(K)
        for T, comps in components.items():
            if T not in ground:
                raise AssignmentError(f"auxiliary index {T!r} is not a subset of [1:{K}]")
            family = comps if isinstance(comps, SetFamily) else SetFamily(comps, K)
            if family.K != K:
                raise AssignmentError(f"components of U_{T.label(K)} use K={family.K}")
            self._components[T] = family
        if mode == STRICT:
            self._check_superposition()

    def _check_superposition(self):
        for T, comps in self._components.items():
            for other, other_comps in self._components.items():
                if other != T and T.issubset(other) and not other_comps.issubset(comps):
                    raise AssignmentError(
                        f"U_{T.label(self.K)} must carry the components of U_{other.label(self.K)}"
                    )

    @property
    def expansion(self) -> SetFamily:
        """The auxiliary indices this assignment covers."""
        return SetFamily(self._components, self.K)

    def components(self, T: ReceiverSet) -> SetFamily:
        try:
            return self._components[T]
        except KeyError:
            raise UnassignedAuxiliaryError(f"no components assigned to U_{T.label(self.K)}")

    def __contains__(self, T: ReceiverSet) -> bool:
        return T in self._components

    def __repr__(self) -> str:
        body = "; ".join(f"U_{T.label(self.K)}->{c.label()}" for T, c in sorted(self._components.items()))
        return f"AuxAssignment({self.name or self.mode}: {body})"


def canonical_assignment(net: CombinationNetwork, F: SetFamily) -> AuxAssignment:
    """
    U_S carries exactly V_S for every S in P, as independent codebooks.

    Args:
        net: The combination network
        F: The expansion; must be the full power family

    Returns:
        The canonical assignment in independent mode
    """
    if F != power_family(net.K):
        raise AssignmentError("the canonical assignment needs the full power family as expansion")
    return AuxAssignment({S: [S] for S in F}, net.K, INDEPENDENT, "canonical")


def _components_of(asg: AuxAssignment, family: SetFamily) -> set:
    masks = set()
    for T in family:
        masks |= asg.components(T).masks
    return masks


def evaluate_atom(net: CombinationNetwork, asg: AuxAssignment, atom: MutualInfoAtom) -> Fraction:
    """
    Value of a mutual-information atom on the network under an assignment.

    Args:
        net: The combination network
        asg: Components carried by each auxiliary
        atom: I(U_informed; Y_j | U_conditioned)

    Returns:
        The exact rational value
    """
    if asg.K != net.K:
        raise AssignmentError(f"assignment over K={asg.K} used with a K={net.K} network")
    conditioned = _components_of(asg, atom.conditioned)
    informed = _components_of(asg, atom.informed)
    bit = 1 << (atom.receiver - 1)
    gained = {m for m in informed - conditioned if m & bit}
    return sum((net.capacity(ReceiverSet(m)) for m in gained), Fraction(0))


def instantiate(sym: SymbolicPolyhedron, net: CombinationNetwork, asg: AuxAssignment) -> NumericPolyhedron:
    """
    Replace every atom by its value and append nonnegativity rows.

    Rows keep their labels; each inequality and equality is tagged with its
    own index so later eliminations report which originals they combine.
    """
    if sym.K != net.K:
        raise AssignmentError(f"region over K={sym.K} instantiated on a K={net.K} network")
    cache: Dict[MutualInfoAtom, Fraction] = {}

    def value_of(atom: MutualInfoAtom) -> Fraction:
        if atom not in cache:
            cache[atom] = evaluate_atom(net, asg, atom)
        return cache[atom]

    variables = sym.variable_names
    rows = [
        Row(tuple(ineq.lhs.coefficient(v) for v in variables), ineq.rhs.evaluate(value_of), ineq.label)
        for ineq in sym.inequalities
    ]
    rows.extend(nonnegativity_rows(variables))
    equalities = [
        Row(tuple(eq.lhs.coefficient(v) for v in variables), eq.rhs.evaluate(value_of), eq.label)
        for eq in sym.equalities
    ]
    logger.debug(f"instantiated {len(rows)} rows with {len(cache)} distinct atoms")
    return NumericPolyhedron(variables, tuple(rows), tuple(equalities)).with_provenance()
