"""
Acceptance suite: lattice and entropy-counting identities, projection
cross-checks, closed-form capacities and the worked network examples.
"""

import logging
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from rate_regions.api.projection import (
    enumerate_vertices,
    hull_polyhedron,
    project_by_fme,
    project_by_vertices,
    remove_redundant,
)
from rate_regions.api.regions import build_general_region, build_nested_region, explicit_region
from rate_regions.api.verify import (
    canonical_feasibility_check,
    check_rate_point,
    containment_witness,
    nested_capacity,
    polytope_contains,
    polytopes_equal,
    random_network,
    split_witness,
    verify_random_networks,
)
from rate_regions.config import CONFIG_DIR
from rate_regions.models.assignments import named_assignment
from rate_regions.models.lattice import (
    ReceiverSet,
    SetFamily,
    complement_set,
    down_set,
    messages_for_receiver,
    power_family,
    up_set,
)
from rate_regions.models.linear import MutualInfoAtom
from rate_regions.models.messages import MessageSpec
from rate_regions.models.network import (
    CombinationNetwork,
    canonical_assignment,
    evaluate_atom,
    instantiate,
    modular_capacity,
)
from rate_regions.models.polyhedra import NumericPolyhedron, Row
from rate_regions.utils.config_loader import load_network

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


def _intersection(family: Sequence[ReceiverSet], K: int) -> ReceiverSet:
    result = ReceiverSet.full(K)
    for S in family:
        result = result & S
    return result


def lattice_identity_violations(K: int, rng: Optional[np.random.Generator] = None, samples: int = 200) -> List[str]:
    """
    Check the union/intersection and partition identities of the receiver
    families W_i^P.

    Every S: the union of W_k over k in S is the up-set of the singletons of S,
    and the intersection is the up-set of S itself. For every i and S, the
    down-set in W_i^P of the complements of the members of S and the up-set of
    S partition W_i^P. For sampled families W and every i, the union of the
    down-sets of single members is the down-set of W, and the intersection is
    the down-set of the common part.

    Returns:
        A description of each violation; empty when all hold
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    P = power_family(K)
    violations = []
    for S in P:
        singletons = [ReceiverSet.singleton(k) for k in S.members()]
        union = SetFamily([], K)
        meet = P
        for k in S.members():
            union = union | messages_for_receiver(P, k)
            meet = meet & messages_for_receiver(P, k)
        if union != up_set(P, singletons):
            violations.append(f"K={K} S={S.label(K)}: union of W_k is not the up-set of the members")
        if meet != up_set(P, [S]):
            violations.append(f"K={K} S={S.label(K)}: intersection of W_k is not the up-set of S")
        if K < 2:
            continue
        for i in range(1, K + 1):
            W = messages_for_receiver(P, i)
            lower = down_set(W, [complement_set(ReceiverSet.singleton(k), K) for k in S.members()])
            upper = up_set(W, [S])
            if (lower | upper) != W or (lower & upper):
                violations.append(f"K={K} i={i} S={S.label(K)}: down/up parts do not partition W_i")

    families = [SetFamily([P[k] for k in range(len(P)) if draw[k]], K) for draw in rng.integers(0, 2, size=(samples, len(P)))]
    for family in families:
        if not family:
            continue
        for i in range(1, K + 1):
            W = messages_for_receiver(P, i)
            union = SetFamily([], K)
            meet = W
            for S in family:
                union = union | down_set(W, [S])
                meet = meet & down_set(W, [S])
            if union != down_set(W, family):
                violations.append(f"K={K} i={i} W={family.label()}: union of down-sets differs")
            if meet != down_set(W, [_intersection(list(family), K)]):
                violations.append(f"K={K} i={i} W={family.label()}: intersection of down-sets differs")
    return violations


def atom_identity_violations(net: CombinationNetwork) -> List[str]:
    """
    Under the canonical assignment, I(U_B; Y_i | U_{W_i^P minus B}) equals C_B
    for every receiver i and every nonempty B in W_i^P, and C_{W_i^P} splits
    into the capacity below the complements of S and the capacity above S.
    """
    K = net.K
    P = power_family(K)
    asg = canonical_assignment(net, P)
    violations = []
    for i in range(1, K + 1):
        W = messages_for_receiver(P, i)
        members = list(W)
        for size in range(1, len(members) + 1):
            for chosen in combinations(members, size):
                B = SetFamily(chosen, K)
                value = evaluate_atom(net, asg, MutualInfoAtom.given_rest(i, B, W))
                if value != modular_capacity(net, B):
                    violations.append(f"i={i} B={B.label()}: {value} != C_B")
        if K < 2:
            continue
        for S in P:
            lower = down_set(W, [complement_set(ReceiverSet.singleton(k), K) for k in S.members()])
            upper = up_set(W, [S])
            if modular_capacity(net, W) != modular_capacity(net, lower) + modular_capacity(net, upper):
                violations.append(f"i={i} S={S.label(K)}: C_W does not split")
    return violations


def random_bounded_system(rng: np.random.Generator, n_vars: int, n_rows: int, box: int = 6) -> NumericPolyhedron:
    """
    Random rows with integer coefficients in [-4, 4] inside the box
    0 <= x <= box, so the result is always bounded.
    """
    names = tuple(f"x{k + 1}" for k in range(n_vars))
    rows = []
    for k in range(n_vars):
        unit = [Fraction(0)] * n_vars
        unit[k] = Fraction(1)
        rows.append(Row(tuple(unit), Fraction(box), f"{names[k]} <= {box}"))
        rows.append(Row(tuple(-c for c in unit), Fraction(0), f"{names[k]} >= 0"))
    for r in range(max(0, n_rows - 2 * n_vars)):
        coeffs = tuple(Fraction(int(c)) for c in rng.integers(-4, 5, size=n_vars))
        rows.append(Row(coeffs, Fraction(int(rng.integers(-2, 9))), f"r{r + 1}"))
    return NumericPolyhedron(names, tuple(rows))


def projection_mismatches(rng: np.random.Generator, count: int, max_vars: int = 5, max_rows: int = 16) -> List[str]:
    """Compare elimination against vertex projection on random systems."""
    mismatches = []
    for index in range(count):
        n_vars = int(rng.integers(2, max_vars + 1))
        n_rows = int(rng.integers(2 * n_vars, max_rows + 1))
        poly = random_bounded_system(rng, n_vars, n_rows)
        keep = poly.variables[: max(1, n_vars // 2)]
        by_fme = remove_redundant(project_by_fme(poly, keep))
        by_vertices = project_by_vertices(poly, keep)
        if not polytopes_equal(by_fme, by_vertices):
            mismatches.append(f"system {index}: {n_vars} variables, {n_rows} rows")
    return mismatches


def _bundled(name: str) -> CombinationNetwork:
    return load_network(os.path.join(CONFIG_DIR, name))


def check_asymmetric_example() -> Tuple[bool, str]:
    """Capacity, the two hand-picked inner bounds and the strictness of their hull."""
    net = _bundled("three_user_asymmetric.cfg")
    capacity = nested_capacity("two_common", net)
    expected = [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(2)), (Fraction(1), Fraction(2)), (Fraction(3), Fraction(0))]
    vertices = [v.coordinates for v in enumerate_vertices(capacity)]
    if sorted(vertices) != sorted(expected):
        return False, f"capacity vertices {vertices}"
    sym = explicit_region("smaller_f_two_common", 3)
    points = []
    for name in ("common_heavy", "private_heavy"):
        inner = remove_redundant(instantiate(sym, net, named_assignment(name, net, 3)))
        if not polytope_contains(capacity, inner):
            return False, f"{name} leaves the capacity region"
        points.extend(v.coordinates for v in enumerate_vertices(inner))
    hull = hull_polyhedron(points, capacity.variables)
    outside = containment_witness(hull, capacity)
    if not polytope_contains(capacity, hull) or outside is None:
        return False, "hull of the inner bounds is not strictly inside the capacity region"
    return True, f"capacity vertex {tuple(str(c) for c in outside.coordinates)} lies outside the hull"


THREE_LINK_WITNESS = {"R_{123->1234}": 1, "R_{123->1235}": 1}
SIX_LINK_WITNESS = {"R_{123->12345}": 1, "R_{123->12347}": 1, "R_{123->12357}": 1}


def check_three_link_example() -> Tuple[bool, str]:
    net = _bundled("six_user_three_links.cfg")
    spec = MessageSpec.parse("123,123456", 6)
    sym = build_nested_region(spec, power_family(6), reduced=True)
    direct = named_assignment("three_links_direct", net, 6)
    rerouted = named_assignment("three_links_rerouted", net, 6)
    low = check_rate_point(sym, net, direct, {"R_{123}": 0, "R_{123456}": 1})
    high = check_rate_point(sym, net, direct, {"R_{123}": 2, "R_{123456}": 0})
    moved = check_rate_point(
        sym, net, rerouted, {"R_{123}": 2, "R_{123456}": 0}, fixed=split_witness(sym, THREE_LINK_WITNESS)
    )
    ok = low.feasible and not high.feasible and bool(high.blocking_rows) and moved.feasible
    return ok, f"(0,1) {low.feasible}, (2,0) {high.feasible}, rerouted (2,0) {moved.feasible}"


def check_six_link_example() -> Tuple[bool, str]:
    net = _bundled("seven_user_six_links.cfg")
    spec = MessageSpec.parse("123,1234567", 7)
    rates = {"R_{123}": 3, "R_{1234567}": 1}
    canonical = canonical_feasibility_check(net, spec, rates)
    sym = build_nested_region(spec, power_family(7), reduced=True)
    asg = named_assignment("six_links_rerouted", net, 7)
    rerouted = check_rate_point(sym, net, asg, rates, fixed=split_witness(sym, SIX_LINK_WITNESS))
    ok = not canonical.feasible and rerouted.feasible
    return ok, f"canonical {canonical.feasible}, rerouted {rerouted.feasible}"


def check_non_unique_decoding_rows() -> Tuple[bool, str]:
    sym = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    labels = [row.label for row in sym.inequalities]
    per_receiver = [sum(1 for label in labels if label.startswith(f"Y{j} ")) for j in (1, 2, 3)]
    absent = {"Y2 B={2,12}", "Y3 B={3,13}"}.isdisjoint(labels)
    return per_receiver == [5, 3, 3] and absent, f"rows per receiver {per_receiver}"


def _batch(mode: str, K: int, count: int, n_jobs: int) -> Tuple[bool, str]:
    results = verify_random_networks(mode, K, count, seed=K, n_jobs=n_jobs)
    failed = [f"{r.which}#{r.index}" for r in results if not r.passed]
    return not failed, f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed {failed}" if failed else "")


def _timed(name: str, check: Callable[[], Tuple[bool, str]]) -> CheckResult:
    start = time.time()
    try:
        passed, detail = check()
    except Exception as e:
        logger.exception(f"check '{name}' raised")
        passed, detail = False, f"{type(e).__name__}: {e}"
    result = CheckResult(name, passed, detail, time.time() - start)
    logger.info(f"{name}: {'ok' if passed else 'FAILED'} ({result.seconds:.1f}s) {detail}")
    return result


def run_acceptance_suite(quick: bool = False, n_jobs: int = 1) -> List[CheckResult]:
    """
    Run every acceptance check.

    Args:
        quick: Use small instance counts
        n_jobs: joblib workers for the random-network batches

    Returns:
        One CheckResult per check
    """
    networks = 3 if quick else 100
    smaller = 3 if quick else 50
    systems = 20 if quick else 200
    lattice_k = 4 if quick else 5
    rng = np.random.default_rng(2024)

    def lattice() -> Tuple[bool, str]:
        found = [v for K in range(1, lattice_k + 1) for v in lattice_identity_violations(K, rng)]
        return not found, f"{len(found)} violations" + (f": {found[:3]}" if found else "")

    def atoms() -> Tuple[bool, str]:
        found = []
        for K in range(1, (3 if quick else 4) + 1):
            for _ in range(3 if quick else 20):
                found.extend(atom_identity_violations(random_network(K, rng)))
        return not found, f"{len(found)} violations" + (f": {found[:3]}" if found else "")

    def projection() -> Tuple[bool, str]:
        found = projection_mismatches(rng, systems)
        return not found, f"{systems - len(found)}/{systems} systems agree"

    checks: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
        ("lattice identities", lattice),
        ("atom evaluation", atoms),
        ("non-unique decoding rows", check_non_unique_decoding_rows),
        ("projection oracle", projection),
    ]
    for K in (3, 4):
        count = networks if K == 3 or not quick else 1
        checks += [
            (f"explicit regions K={K}", lambda K=K, c=count: _batch("explicit", K, c, n_jobs)),
            (f"capacity equalities K={K}", lambda K=K, c=count: _batch("achievable", K, c, n_jobs)),
            (f"redundant rows K={K}", lambda K=K, c=count: _batch("redundancy", K, c, n_jobs)),
            (f"smaller expansions K={K}", lambda K=K, c=min(count, smaller): _batch("smaller_f", K, c, n_jobs)),
        ]
    checks += [
        ("three-receiver inner bounds", check_asymmetric_example),
        ("three-link network", check_three_link_example),
        ("six-link network", check_six_link_example),
    ]
    return [_timed(name, check) for name, check in checks]
