"""
Capacity polytopes, cut-set bounds, polytope comparison and rate-point
feasibility on combination networks.
"""

import logging
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from rate_regions.api.projection import (
    Vertex,
    enumerate_vertices,
    fme_eliminate,
    project_by_fme,
    remove_redundant,
)
from rate_regions.api.regions import (
    build_general_region,
    build_nested_region,
    explicit_region,
    message_spec_for,
)
from rate_regions.models.assignments import named_assignment
from rate_regions.models.lattice import (
    ReceiverSet,
    SetFamily,
    complement_set,
    down_set,
    messages_for_receiver,
    power_family,
)
from rate_regions.models.messages import SPLIT, MessageSpec, RateVariable, message_variable
from rate_regions.models.network import (
    AuxAssignment,
    CombinationNetwork,
    canonical_assignment,
    instantiate,
    modular_capacity,
)
from rate_regions.models.polyhedra import NumericPolyhedron, Row, SymbolicPolyhedron, nonnegativity_rows
from rate_regions.utils.errors import MessageSpecError, PolyhedronError, RateRegionError
from rate_regions.utils.rational_lp import OPTIMAL, farkas_certificate, find_feasible_point, maximize

logger = logging.getLogger(__name__)

RateKey = Union[str, ReceiverSet, RateVariable]

CAPACITY_FORMS = ("two_order_k_minus_1", "one_common", "two_common")

SMALLER_F_PAIRS = {
    "one_common": ("smaller_f_one_common", "dependent_one_common"),
    "two_common": ("smaller_f_two_common", "dependent_two_common"),
    "two_order_k_minus_1": ("smaller_f_two_order", "dependent_two_order"),
}

VERIFY_MODES = ("achievable", "smaller_f", "explicit", "redundancy")


@dataclass(frozen=True)
class CapacityPolytope(NumericPolyhedron):
    """A numeric polytope over the two message rates, tagged with where it came from."""

    provenance: str = ""


@dataclass
class FeasibilityVerdict:
    """
    Outcome of a rate-point check.

    Row indices refer to the instantiated polyhedron: inequalities first, then
    equalities. The certificate is the multiplier combination of the blocking
    rows; it involves message rates only and the checked point violates it.
    """

    feasible: bool
    witness: Optional[Dict[str, Fraction]] = None
    blocking_rows: List[int] = field(default_factory=list)
    blocking_labels: List[str] = field(default_factory=list)
    multipliers: Dict[int, Fraction] = field(default_factory=dict)
    certificate: Optional[Row] = None
    variables: Tuple[str, ...] = ()

    def render(self) -> str:
        if self.feasible:
            lines = ["FEASIBLE"]
            lines.extend(f"{name} = {value}" for name, value in (self.witness or {}).items())
            return "\n".join(lines) + "\n"
        lines = ["INFEASIBLE"]
        for index, label in zip(self.blocking_rows, self.blocking_labels):
            weight = self.multipliers.get(index)
            suffix = f" x {weight}" if weight is not None else ""
            lines.append(f"blocking row {index}: {label}{suffix}")
        if self.certificate is not None:
            lines.append(f"certificate: {self.certificate.render(self.variables)}")
        return "\n".join(lines) + "\n"


def _capacity(
    variables: Sequence[str],
    rows: List[Tuple[Dict[str, int], Fraction, str]],
    provenance: str,
) -> CapacityPolytope:
    ineqs = [
        Row(tuple(Fraction(terms.get(v, 0)) for v in variables), bound, label)
        for terms, bound, label in rows
    ]
    ineqs.extend(nonnegativity_rows(variables))
    return CapacityPolytope(tuple(variables), tuple(ineqs), (), provenance)


def _W(net: CombinationNetwork, j: int) -> SetFamily:
    return messages_for_receiver(net.ground, j)


def _C_below(net: CombinationNetwork, j: int, generators: Sequence[ReceiverSet]) -> Fraction:
    return modular_capacity(net, down_set(_W(net, j), generators))


def two_order_capacity(net: CombinationNetwork) -> CapacityPolytope:
    """
    Capacity region for the two messages of order K-1 missing receiver K and
    receiver K-1 respectively.

    Args:
        net: A combination network with K >= 3

    Returns:
        The polytope over (R_{~K}, R_{~(K-1)})
    """
    K = net.K
    if K < 3:
        raise MessageSpecError(f"two order-(K-1) messages need K >= 3, got {K}")
    not_last = complement_set(ReceiverSet.singleton(K), K)
    not_before_last = complement_set(ReceiverSet.singleton(K - 1), K)
    private = not_last & not_before_last
    r_a, r_b = message_variable(not_last, K).name, message_variable(not_before_last, K).name
    pair = {r_a: 1, r_b: 1}
    C_last = modular_capacity(net, _W(net, K))
    C_before_last = modular_capacity(net, _W(net, K - 1))
    rows = [
        ({r_b: 1}, C_last, f"Y{K}"),
        ({r_a: 1}, C_before_last, f"Y{K - 1}"),
    ]
    rows += [(pair, modular_capacity(net, _W(net, j)), f"Y{j} total") for j in private.members()]
    rows.append((pair, _C_below(net, K - 1, [not_last]) + C_last, f"Y{K - 1}+Y{K}"))
    rows += [
        ({r_a: 2, r_b: 2}, _C_below(net, j, [not_last, not_before_last]) + C_last + C_before_last,
         f"Y{j}+Y{K - 1}+Y{K}")
        for j in private.members()
    ]
    return _capacity((r_a, r_b), rows, "two_order_k_minus_1")


def nested_capacity(which: str, net: CombinationNetwork) -> CapacityPolytope:
    """
    Capacity region for a private message plus a message for every receiver.

    Args:
        which: "one_common" (private message misses receiver K) or
            "two_common" (it misses receivers K-1 and K)
        net: The combination network

    Returns:
        The polytope over (R_private, R_common)
    """
    K = net.K
    full = ReceiverSet.full(K)
    if which == "one_common":
        if K < 2:
            raise MessageSpecError(f"one common receiver needs K >= 2, got {K}")
        private = complement_set(ReceiverSet.singleton(K), K)
        r_p, r_c = message_variable(private, K).name, message_variable(full, K).name
        rows = [({r_c: 1}, modular_capacity(net, _W(net, K)), f"Y{K}")]
        rows += [({r_p: 1, r_c: 1}, modular_capacity(net, _W(net, j)), f"Y{j} total") for j in private.members()]
        return _capacity((r_p, r_c), rows, "one_common")
    if which == "two_common":
        if K < 3:
            raise MessageSpecError(f"two common receivers need K >= 3, got {K}")
        private = complement_set(ReceiverSet.from_members([K - 1, K]), K)
        r_p, r_c = message_variable(private, K).name, message_variable(full, K).name
        C_common = modular_capacity(net, _W(net, K - 1)) + modular_capacity(net, _W(net, K))
        rows = [({r_c: 1}, modular_capacity(net, _W(net, i)), f"Y{i}") for i in (K - 1, K)]
        rows += [({r_p: 1, r_c: 1}, modular_capacity(net, _W(net, j)), f"Y{j} total") for j in private.members()]
        rows += [
            ({r_p: 1, r_c: 2}, _C_below(net, j, [private]) + C_common, f"Y{j}+Y{K - 1}+Y{K}")
            for j in private.members()
        ]
        return _capacity((r_p, r_c), rows, "two_common")
    raise MessageSpecError(f"unknown nested capacity '{which}', expected one_common or two_common")


def cutset_bound(net: CombinationNetwork, spec: MessageSpec) -> CapacityPolytope:
    """Every receiver's demanded rates sum to at most its incoming capacity."""
    if spec.K != net.K:
        raise MessageSpecError(f"messages over K={spec.K} on a K={net.K} network")
    names = (message_variable(spec.s1, spec.K).name, message_variable(spec.s2, spec.K).name)
    rows = []
    for j in range(1, net.K + 1):
        demanded = [message_variable(S, spec.K).name for S in spec.demanded_by(j)]
        if demanded:
            rows.append(({n: 1 for n in demanded}, modular_capacity(net, _W(net, j)), f"Y{j} cutset"))
    return _capacity(names, rows, "cutset")


def capacity_for(which: str, net: CombinationNetwork) -> CapacityPolytope:
    if which == "two_order_k_minus_1":
        return two_order_capacity(net)
    return nested_capacity(which, net)


def receiver_relabelling(spec: MessageSpec, target: MessageSpec) -> Optional[Dict[int, int]]:
    """
    A permutation of the receivers carrying spec's two sets onto target's
    (in either order), or None when their overlap patterns differ.
    """
    if spec.K != target.K:
        return None
    full = ReceiverSet.full(spec.K)
    a, b = spec.s1, spec.s2
    for t1, t2 in ((target.s1, target.s2), (target.s2, target.s1)):
        blocks = [(a & b, t1 & t2), (a - b, t1 - t2), (b - a, t2 - t1), (full - (a | b), full - (t1 | t2))]
        if all(len(src) == len(dst) for src, dst in blocks):
            return {i: j for src, dst in blocks for i, j in zip(src.members(), dst.members())}
    return None


def relabel_network(net: CombinationNetwork, perm: Mapping[int, int]) -> CombinationNetwork:
    """The same network with receiver i renamed perm[i]."""
    return CombinationNetwork(
        net.K,
        {ReceiverSet.from_members(perm[k] for k in S.members()): c for S, c in net.links.items()},
    )


def _relabel_rows(rows: Sequence[Row], back: Mapping[int, int], names: Mapping[str, str]) -> Tuple[Row, ...]:
    renamed = re.compile("|".join(re.escape(n) for n in sorted(names, key=len, reverse=True)))

    def label(text: str) -> str:
        text = renamed.sub(lambda m: names[m.group(0)], text)
        return re.sub(r"Y(\d+)", lambda m: f"Y{back[int(m.group(1))]}", text)

    return tuple(replace(r, label=label(r.label)) for r in rows)


def capacity_polytope(net: CombinationNetwork, spec: MessageSpec) -> CapacityPolytope:
    """
    The closed-form capacity region matching spec, in spec's variable order.

    Any receiver labelling is accepted: the network is relabelled onto the
    form a closed form is written for, and variables and row labels are
    mapped back. Message sets without a closed form fall back to the cut-set
    bound.
    """
    K = spec.K
    names = (message_variable(spec.s1, K).name, message_variable(spec.s2, K).name)
    for which in CAPACITY_FORMS:
        try:
            perm = receiver_relabelling(spec, message_spec_for(which, net.K))
            if perm is None:
                continue
            polytope = capacity_for(which, relabel_network(net, perm))
        except MessageSpecError:
            continue
        back = {j: i for i, j in perm.items()}
        image = {
            message_variable(ReceiverSet.from_members(perm[k] for k in S.members()), K).name: message_variable(S, K).name
            for S in (spec.s1, spec.s2)
        }
        if any(i != j for i, j in perm.items()):
            logger.debug(f"capacity of {spec.label()} through relabelling {perm}")
        renamed = NumericPolyhedron(
            tuple(image[v] for v in polytope.variables),
            _relabel_rows(polytope.inequalities, back, image),
            _relabel_rows(polytope.equalities, back, image),
        )
        reordered = renamed.reorder(names)
        return CapacityPolytope(reordered.variables, reordered.inequalities, reordered.equalities, which)
    logger.warning(f"no closed-form capacity for {spec.label()}; using the cut-set bound")
    return cutset_bound(net, spec)


def _aligned(a: NumericPolyhedron, b: NumericPolyhedron) -> NumericPolyhedron:
    if set(a.variables) != set(b.variables):
        raise PolyhedronError(f"cannot compare polytopes over {a.variables} and {b.variables}")
    return b.reorder(a.variables)


def containment_witness(a: NumericPolyhedron, b: NumericPolyhedron) -> Optional[Vertex]:
    """A vertex of b outside a, or None when b is contained in a."""
    for vertex in enumerate_vertices(_aligned(a, b)):
        if not a.contains_point(vertex.coordinates):
            return vertex
    return None


def polytope_contains(a: NumericPolyhedron, b: NumericPolyhedron) -> bool:
    """True iff every vertex of b satisfies every row of a."""
    return containment_witness(a, b) is None


def polytopes_equal(a: NumericPolyhedron, b: NumericPolyhedron) -> bool:
    return polytope_contains(a, b) and polytope_contains(b, a)


def achievable_polytope(sym: SymbolicPolyhedron, net: CombinationNetwork, asg: AuxAssignment) -> CapacityPolytope:
    """
    Instantiate a region and project it onto its message rates.

    Args:
        sym: Symbolic region
        net: The combination network
        asg: Auxiliary component assignment

    Returns:
        The reduced polytope over the message rates
    """
    numeric = instantiate(sym, net, asg)
    keep = [v.name for v in sym.message_variables]
    projected = remove_redundant(project_by_fme(numeric, keep))
    logger.debug(f"projected {sym.title} to {len(projected.inequalities)} rows")
    return CapacityPolytope(projected.variables, projected.inequalities, projected.equalities, sym.title)


def _rate_values(sym: SymbolicPolyhedron, rates: Mapping[RateKey, Union[int, str, Fraction]]) -> Dict[str, Fraction]:
    values: Dict[str, Fraction] = {}
    for key, value in rates.items():
        if isinstance(key, ReceiverSet):
            name = message_variable(key, sym.K).name
        elif isinstance(key, RateVariable):
            name = key.name
        else:
            name = str(key)
        values[name] = Fraction(value)
    expected = {v.name for v in sym.message_variables}
    if set(values) != expected:
        raise MessageSpecError(f"rates must give exactly {sorted(expected)}, got {sorted(values)}")
    return values


def _is_sign_row(row: Row) -> bool:
    nonzero = [c for c in row.coeffs if c != 0]
    return len(nonzero) == 1 and nonzero[0] < 0 and row.bound == 0


def _solve_by_simplex(system: NumericPolyhedron) -> Optional[Tuple[Fraction, ...]]:
    """A point of the system, or None; sign rows become variable bounds."""
    nonnegative = [False] * system.dimension
    best: Dict[Tuple[Fraction, ...], Fraction] = {}
    for row in system.inequalities:
        if _is_sign_row(row):
            nonnegative[next(k for k, c in enumerate(row.coeffs) if c != 0)] = True
            continue
        if row.is_zero():
            if row.bound < 0:
                return None
            continue
        if row.coeffs not in best or row.bound < best[row.coeffs]:
            best[row.coeffs] = row.bound
    A = list(best)
    b = [best[c] for c in A]
    E = [r.coeffs for r in system.equalities]
    d = [r.bound for r in system.equalities]
    logger.debug(f"feasibility LP with {len(A)} rows over {system.dimension} split rates")
    result = find_feasible_point(A, b, E, d, n=system.dimension, nonnegative=nonnegative)
    return result.point if result.feasible else None


def _interval_value(system: NumericPolyhedron) -> Fraction:
    """A value of the single variable of a one-column system."""
    for row in system.equalities:
        if row.coeffs[0] != 0:
            return row.bound / row.coeffs[0]
    lower, upper = None, None
    for row in system.inequalities:
        a = row.coeffs[0]
        if a > 0:
            upper = row.bound / a if upper is None else min(upper, row.bound / a)
        elif a < 0:
            lower = row.bound / a if lower is None else max(lower, row.bound / a)
    if lower is not None:
        return lower
    if upper is not None:
        return upper
    return Fraction(0)


def _solve_by_elimination(system: NumericPolyhedron) -> Tuple[Optional[Tuple[Fraction, ...]], Optional[Row]]:
    """Eliminate every variable; back-substitute a point or return the contradictory row."""
    stages = [system]
    for name in system.variables:
        stages.append(fme_eliminate(stages[-1], name, redundancy=False))
    for row in stages[-1].inequalities:
        if row.bound < 0:
            return None, row
    for row in stages[-1].equalities:
        if row.bound != 0:
            return None, row
    known: Dict[str, Fraction] = {}
    for stage, name in reversed(list(zip(stages[:-1], system.variables))):
        rest = {v: known[v] for v in stage.variables if v != name}
        known[name] = _interval_value(stage.fix(rest))
    return tuple(known[v] for v in system.variables), None


def _certificate_verdict(
    numeric: NumericPolyhedron,
    system: NumericPolyhedron,
    support: Optional[Sequence[int]] = None,
) -> FeasibilityVerdict:
    rows = system.all_rows()
    indices = list(range(len(rows))) if support is None else sorted(support)
    n_ineq = len(system.inequalities)
    ub = [i for i in indices if i < n_ineq]
    eq = [i for i in indices if i >= n_ineq]
    found = farkas_certificate(
        [rows[i].coeffs for i in ub], [rows[i].bound for i in ub],
        [rows[i].coeffs for i in eq], [rows[i].bound for i in eq],
    )
    if found is None:
        raise RateRegionError("elimination reported a contradiction the certificate search cannot confirm")
    y, z = found
    multipliers = {i: m for i, m in zip(ub + eq, list(y) + list(z)) if m != 0}
    original = numeric.all_rows()
    coeffs = [Fraction(0)] * numeric.dimension
    bound = Fraction(0)
    for i, m in multipliers.items():
        coeffs = [c + m * a for c, a in zip(coeffs, original[i].coeffs)]
        bound += m * original[i].bound
    blocking = sorted(multipliers)
    return FeasibilityVerdict(
        False,
        blocking_rows=blocking,
        blocking_labels=[original[i].label for i in blocking],
        multipliers={i: multipliers[i] for i in blocking},
        certificate=Row(tuple(coeffs), bound, "certificate"),
        variables=numeric.variables,
    )


def check_rate_point(
    sym: SymbolicPolyhedron,
    net: CombinationNetwork,
    asg: AuxAssignment,
    rates: Mapping[RateKey, Union[int, str, Fraction]],
    fixed: Optional[Mapping[str, Union[int, str, Fraction]]] = None,
    method: str = "simplex",
) -> FeasibilityVerdict:
    """
    Decide whether nonnegative split rates exist for the given message rates.

    Args:
        sym: Symbolic region over message and split rates
        net: The combination network
        asg: Auxiliary component assignment
        rates: Both message rates, keyed by variable name, ReceiverSet or RateVariable
        fixed: Optional further variables pinned to values
        method: "simplex" (exact LP, Farkas certificate when infeasible) or
            "elimination" (eliminate split rates with provenance and back-substitute)

    Returns:
        The verdict; a feasible witness is checked against every row exactly

    The two methods agree on feasibility but not on which rows block. With
    "simplex" the blocking rows are the support of a Farkas multiplier
    vector found over all rows, so they carry no elimination ancestry. With
    "elimination" the certificate search is restricted to the rows whose
    combination produced the contradicting row, and blocking_rows is that
    ancestry.
    """
    if method not in ("simplex", "elimination"):
        raise ValueError(f"unknown method '{method}'")
    numeric = instantiate(sym, net, asg)
    values = _rate_values(sym, rates)
    for name, value in (fixed or {}).items():
        if name not in numeric.variables:
            raise PolyhedronError(f"cannot fix unknown variable {name}")
        values[name] = Fraction(value)
    system = numeric.fix(values)

    if method == "simplex":
        point = _solve_by_simplex(system)
        if point is None:
            return _certificate_verdict(numeric, system)
    else:
        point, contradiction = _solve_by_elimination(system)
        if point is None:
            return _certificate_verdict(numeric, system, contradiction.ancestry)

    witness = dict(values)
    witness.update(zip(system.variables, point))
    ordered = {name: witness[name] for name in numeric.variables}
    if not numeric.contains_point(tuple(ordered.values())):
        raise RateRegionError("witness fails the exact row check")
    logger.info(f"rate point feasible under {asg.name or asg.mode} assignment")
    return FeasibilityVerdict(True, witness=ordered, variables=numeric.variables)


def split_witness(sym: SymbolicPolyhedron, units: Mapping[str, Union[int, str, Fraction]]) -> Dict[str, Fraction]:
    """Every split rate of sym pinned to zero except the given ones."""
    names = [v.name for v in sym.variables if v.kind == SPLIT]
    unknown = set(units) - set(names)
    if unknown:
        raise PolyhedronError(f"{sorted(unknown)} are not split rates of {sym.title}")
    return {name: Fraction(units.get(name, 0)) for name in names}


def canonical_feasibility_check(
    net: CombinationNetwork,
    spec: MessageSpec,
    rates: Mapping[RateKey, Union[int, str, Fraction]],
    method: str = "simplex",
) -> FeasibilityVerdict:
    """
    Rate-point check for a nested spec with F = P and each auxiliary carrying
    its own component, so every bound is a plain link-capacity sum.
    """
    if not spec.is_nested():
        raise MessageSpecError(f"{spec.label()} is not nested")
    P = power_family(net.K)
    sym = build_nested_region(spec, P, reduced=True)
    return check_rate_point(sym, net, canonical_assignment(net, P), rates, method=method)


def random_network(K: int, rng: np.random.Generator, max_quarters: int = 8) -> CombinationNetwork:
    """Random link capacities in quarter steps from 0 to max_quarters / 4."""
    P = power_family(K)
    draws = rng.integers(0, max_quarters + 1, size=len(P))
    return CombinationNetwork(K, {S: Fraction(int(q), 4) for S, q in zip(P, draws)})


@dataclass
class InstanceResult:
    """One random-network check."""

    index: int
    which: str
    passed: bool
    detail: str = ""


def redundant_row_labels(which: str, K: int) -> Set[str]:
    """Labels of the explicit-region rows implied by the rest of that region."""
    if which == "one_common":
        return {f"Y{j}+Y{K}" for j in range(1, K)}
    private = range(1, K - 1)
    labels = {f"Y{j}+Y{K}" for j in private} | {f"Y{j}+Y{K - 1}" for j in private}
    if which == "two_common":
        labels |= {f"Y{j1}+Y{j2}+Y{K - 1}+Y{K}" for j1 in private for j2 in private}
    elif which != "two_order_k_minus_1":
        raise MessageSpecError(f"no redundancy claims recorded for '{which}'")
    return labels


def _implied(poly: NumericPolyhedron, row: Row) -> bool:
    A = [r.coeffs for r in poly.inequalities]
    b = [r.bound for r in poly.inequalities]
    result = maximize(row.coeffs, A, b, [r.coeffs for r in poly.equalities], [r.bound for r in poly.equalities])
    return result.status == OPTIMAL and result.value <= row.bound


def _full_region(which: str, K: int) -> SymbolicPolyhedron:
    spec = message_spec_for(which, K)
    P = power_family(K)
    if spec.is_nested():
        return build_nested_region(spec, P, reduced=True)
    return build_general_region(spec, P)


def _check_instance(mode: str, which: str, K: int, seed: int, index: int) -> InstanceResult:
    rng = np.random.default_rng([seed, index])
    net = random_network(K, rng)
    capacity = capacity_for(which, net)
    if mode == "achievable":
        sym = _full_region(which, K)
        projected = achievable_polytope(sym, net, canonical_assignment(net, power_family(K)))
        passed = polytopes_equal(projected, capacity)
    elif mode == "smaller_f":
        region_name, assignment_name = SMALLER_F_PAIRS[which]
        sym = explicit_region(region_name, K)
        numeric = remove_redundant(instantiate(sym, net, named_assignment(assignment_name, net, K)))
        passed = polytopes_equal(numeric, capacity)
    elif mode == "explicit":
        P = power_family(K)
        closed = instantiate(explicit_region(which, K), net, canonical_assignment(net, P))
        projected = achievable_polytope(_full_region(which, K), net, canonical_assignment(net, P))
        passed = polytopes_equal(closed, projected)
    elif mode == "redundancy":
        closed = instantiate(explicit_region(which, K), net, canonical_assignment(net, power_family(K)))
        claimed = redundant_row_labels(which, K)
        rest = NumericPolyhedron(closed.variables, tuple(r for r in closed.inequalities if r.label not in claimed))
        failing = [r.label for r in closed.inequalities if r.label in claimed and not _implied(rest, r)]
        if failing:
            return InstanceResult(index, which, False, f"not implied: {failing}; {net!r}")
        passed = polytopes_equal(rest, capacity)
    else:
        raise ValueError(f"unknown verification mode '{mode}', expected one of {VERIFY_MODES}")
    return InstanceResult(index, which, passed, "" if passed else repr(net))


def verify_random_networks(
    mode: str,
    K: int,
    count: int,
    seed: int = 0,
    which: Sequence[str] = CAPACITY_FORMS,
    n_jobs: int = 1,
) -> List[InstanceResult]:
    """
    Run one verification mode over seeded random networks.

    Args:
        mode: One of VERIFY_MODES
        K: Number of receivers (at least 3)
        count: Networks per message set
        seed: Base seed; instance i draws from default_rng([seed, i])
        which: Message sets to cover, from CAPACITY_FORMS
        n_jobs: joblib worker count

    Returns:
        One InstanceResult per (message set, network)
    """
    if mode not in VERIFY_MODES:
        raise ValueError(f"unknown verification mode '{mode}', expected one of {VERIFY_MODES}")
    tasks = [(w, i) for w in which for i in range(count)]
    results = Parallel(n_jobs=n_jobs)(delayed(_check_instance)(mode, w, K, seed, i) for w, i in tasks)
    failed = [r for r in results if not r.passed]
    logger.info(f"{mode} K={K}: {len(results) - len(failed)}/{len(results)} instances passed")
    for r in failed:
        logger.warning(f"{mode} {r.which} instance {r.index} failed: {r.detail}")
    return list(results)
