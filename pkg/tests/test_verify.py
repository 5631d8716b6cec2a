from fractions import Fraction

import numpy as np
import pytest

from rate_regions.api.projection import enumerate_vertices, hull_polyhedron, remove_redundant
from rate_regions.api.regions import build_general_region, build_nested_region, explicit_region
from rate_regions.api.selftest import SIX_LINK_WITNESS, THREE_LINK_WITNESS
from rate_regions.api.verify import (
    achievable_polytope,
    canonical_feasibility_check,
    capacity_polytope,
    check_rate_point,
    containment_witness,
    cutset_bound,
    nested_capacity,
    polytope_contains,
    polytopes_equal,
    random_network,
    receiver_relabelling,
    redundant_row_labels,
    split_witness,
    two_order_capacity,
    verify_random_networks,
)
from rate_regions.models.assignments import named_assignment
from rate_regions.models.lattice import ReceiverSet, SetFamily, power_family
from rate_regions.models.messages import MessageSpec
from rate_regions.models.network import CombinationNetwork, canonical_assignment, instantiate
from rate_regions.utils.errors import MessageSpecError, PolyhedronError

F = Fraction


def vertex_set(poly):
    return sorted(v.coordinates for v in enumerate_vertices(poly))


def inner_bound(net, which):
    sym = explicit_region("smaller_f_two_common", 3)
    return remove_redundant(instantiate(sym, net, named_assignment(which, net, 3)))


def test_two_common_capacity_vertices(asymmetric_net):
    capacity = nested_capacity("two_common", asymmetric_net)
    assert capacity.variables == ("R_{1}", "R_{123}")
    assert capacity.provenance == "two_common"
    assert vertex_set(capacity) == [(0, 0), (0, 2), (1, 2), (3, 0)]


def test_capacity_rows(asymmetric_net):
    capacity = nested_capacity("two_common", asymmetric_net)
    bounds = {r.label: r.bound for r in capacity.inequalities}
    assert bounds["Y2"] == 2
    assert bounds["Y3"] == 2
    assert bounds["Y1 total"] == 3
    assert bounds["Y1+Y2+Y3"] == F(11, 2)


def test_one_common_capacity(asymmetric_net):
    capacity = nested_capacity("one_common", asymmetric_net)
    assert capacity.variables == ("R_{12}", "R_{123}")
    assert [r.label for r in capacity.inequalities][:3] == ["Y3", "Y1 total", "Y2 total"]
    with pytest.raises(MessageSpecError):
        nested_capacity("three_common", asymmetric_net)


def test_two_order_capacity(asymmetric_net):
    capacity = two_order_capacity(asymmetric_net)
    assert capacity.variables == ("R_{12}", "R_{13}")
    labels = [r.label for r in capacity.inequalities]
    assert labels[:5] == ["Y3", "Y2", "Y1 total", "Y2+Y3", "Y1+Y2+Y3"]
    with pytest.raises(MessageSpecError):
        two_order_capacity(CombinationNetwork.zero(2))


def test_cutset_bound(asymmetric_net):
    cut = cutset_bound(asymmetric_net, MessageSpec.parse("12,13", 3))
    assert [(r.label, r.bound) for r in cut.inequalities[:3]] == [
        ("Y1 cutset", 3),
        ("Y2 cutset", 2),
        ("Y3 cutset", 2),
    ]
    assert cut.provenance == "cutset"


def test_capacity_polytope_lookup(asymmetric_net):
    assert capacity_polytope(asymmetric_net, MessageSpec.parse("12,13", 3)).provenance == "two_order_k_minus_1"
    flipped = capacity_polytope(asymmetric_net, MessageSpec.parse("123,1", 3))
    assert flipped.provenance == "two_common"
    assert flipped.variables == ("R_{123}", "R_{1}")
    assert capacity_polytope(asymmetric_net, MessageSpec.parse("1,23", 3)).provenance == "cutset"


def test_inner_bounds(asymmetric_net):
    common = inner_bound(asymmetric_net, "common_heavy")
    private = inner_bound(asymmetric_net, "private_heavy")
    assert vertex_set(common) == [(0, 0), (0, F(3, 2)), (F(3, 2), 0)]
    assert vertex_set(private) == [(0, 0), (0, 1), (2, 1), (3, 0)]


def test_hull_of_inner_bounds_is_strictly_smaller(asymmetric_net):
    capacity = nested_capacity("two_common", asymmetric_net)
    points = []
    for which in ("common_heavy", "private_heavy"):
        inner = inner_bound(asymmetric_net, which)
        assert polytope_contains(capacity, inner)
        points.extend(v.coordinates for v in enumerate_vertices(inner))
    hull = hull_polyhedron(points, capacity.variables)
    assert vertex_set(hull) == [(0, 0), (0, F(3, 2)), (2, 1), (3, 0)]
    assert polytope_contains(capacity, hull)
    assert containment_witness(hull, capacity).coordinates == (0, 2)


def test_polytope_comparison_needs_same_variables(asymmetric_net):
    with pytest.raises(PolyhedronError):
        polytopes_equal(nested_capacity("two_common", asymmetric_net), two_order_capacity(asymmetric_net))


def test_achievable_region_meets_capacity(asymmetric_net):
    P = power_family(3)
    sym = build_nested_region(MessageSpec.parse("1,123", 3), P, reduced=True)
    projected = achievable_polytope(sym, asymmetric_net, canonical_assignment(asymmetric_net, P))
    assert projected.variables == ("R_{1}", "R_{123}")
    assert polytopes_equal(projected, nested_capacity("two_common", asymmetric_net))


@pytest.mark.parametrize("method", ["simplex", "elimination"])
def test_rate_points_on_three_receivers(asymmetric_net, method):
    spec = MessageSpec.parse("1,123", 3)
    for point in [(1, 2), (3, 0), (1, 1), (0, 0)]:
        verdict = canonical_feasibility_check(asymmetric_net, spec, {"R_{1}": point[0], "R_{123}": point[1]}, method)
        assert verdict.feasible, point
        assert verdict.witness["R_{1}"] == point[0]
    blocked = canonical_feasibility_check(asymmetric_net, spec, {"R_{1}": 2, "R_{123}": 2}, method)
    assert not blocked.feasible
    assert blocked.blocking_rows


def test_rate_keys_may_be_receiver_sets(asymmetric_net):
    spec = MessageSpec.parse("1,123", 3)
    verdict = canonical_feasibility_check(asymmetric_net, spec, {ReceiverSet.parse("1", 3): 1, ReceiverSet.full(3): 2})
    assert verdict.feasible
    with pytest.raises(MessageSpecError):
        canonical_feasibility_check(asymmetric_net, spec, {"R_{1}": 1})
    with pytest.raises(MessageSpecError):
        canonical_feasibility_check(asymmetric_net, MessageSpec.parse("12,13", 3), {"R_{12}": 0, "R_{13}": 0})


def test_unknown_method(asymmetric_net):
    with pytest.raises(ValueError):
        canonical_feasibility_check(asymmetric_net, MessageSpec.parse("1,123", 3), {"R_{1}": 0, "R_{123}": 0}, "guess")


def three_link_region():
    return build_nested_region(MessageSpec.parse("123,123456", 6), power_family(6), reduced=True)


def test_three_link_network_direct_assignment(three_link_net):
    sym = three_link_region()
    direct = named_assignment("three_links_direct", three_link_net, 6)
    assert check_rate_point(sym, three_link_net, direct, {"R_{123}": 0, "R_{123456}": 1}).feasible

    verdict = check_rate_point(sym, three_link_net, direct, {"R_{123}": 2, "R_{123456}": 0})
    assert not verdict.feasible
    assert verdict.blocking_rows
    assert sorted(verdict.multipliers) == verdict.blocking_rows
    certificate = verdict.certificate
    for k, name in enumerate(verdict.variables):
        if "->" in name:
            assert certificate.coeffs[k] == 0
    point = tuple(F(2) if name == "R_{123}" else F(0) for name in verdict.variables)
    assert certificate.value(point) > certificate.bound
    text = verdict.render()
    assert text.startswith("INFEASIBLE")
    assert "certificate:" in text


def test_three_link_network_rerouted_assignment(three_link_net):
    sym = three_link_region()
    rerouted = named_assignment("three_links_rerouted", three_link_net, 6)
    fixed = split_witness(sym, THREE_LINK_WITNESS)
    verdict = check_rate_point(sym, three_link_net, rerouted, {"R_{123}": 2, "R_{123456}": 0}, fixed=fixed)
    assert verdict.feasible
    assert verdict.witness["R_{123->1234}"] == 1
    assert verdict.witness["R_{123->1235}"] == 1
    assert verdict.witness["R_{123->123}"] == 0
    assert verdict.render().startswith("FEASIBLE")


def test_split_witness_rejects_unknown_names():
    with pytest.raises(PolyhedronError):
        split_witness(three_link_region(), {"R_{123->12}": 1})


def test_six_link_network(six_link_net):
    spec = MessageSpec.parse("123,1234567", 7)
    rates = {"R_{123}": 3, "R_{1234567}": 1}
    assert not canonical_feasibility_check(six_link_net, spec, rates).feasible
    sym = build_nested_region(spec, power_family(7), reduced=True)
    asg = named_assignment("six_links_rerouted", six_link_net, 7)
    verdict = check_rate_point(sym, six_link_net, asg, rates, fixed=split_witness(sym, SIX_LINK_WITNESS))
    assert verdict.feasible
    assert all(verdict.witness[name] == 1 for name in SIX_LINK_WITNESS)


def test_random_network_uses_quarter_steps():
    net = random_network(3, np.random.default_rng(0))
    assert all(c.denominator in (1, 2, 4) and 0 < c <= 2 for c in net.links.values())


def test_redundant_row_labels():
    assert redundant_row_labels("one_common", 3) == {"Y1+Y3", "Y2+Y3"}
    assert redundant_row_labels("two_order_k_minus_1", 3) == {"Y1+Y3", "Y1+Y2"}
    assert "Y1+Y1+Y2+Y3" in redundant_row_labels("two_common", 3)
    with pytest.raises(MessageSpecError):
        redundant_row_labels("three_common", 4)


@pytest.mark.parametrize("mode", ["achievable", "smaller_f", "explicit", "redundancy"])
def test_random_networks(mode):
    results = verify_random_networks(mode, 3, 2, seed=11)
    assert len(results) == 6
    assert all(r.passed for r in results), [r.detail for r in results if not r.passed]


def test_unknown_verification_mode():
    with pytest.raises(ValueError):
        verify_random_networks("everything", 3, 1)


def test_capacity_is_label_agnostic():
    canonical = capacity_polytope(
        CombinationNetwork.from_labels(3, {"12": 1, "13": 1}), MessageSpec.parse("1,123", 3)
    )
    swapped = capacity_polytope(
        CombinationNetwork.from_labels(3, {"23": 1, "13": 1}), MessageSpec.parse("3,123", 3)
    )
    assert canonical.provenance == swapped.provenance == "two_common"
    assert swapped.variables == ("R_{3}", "R_{123}")
    assert vertex_set(canonical) == vertex_set(swapped) == [(0, 0), (0, 1), (2, 0)]
    assert not swapped.contains_point((F(1), F(1)))
    bounds = {r.label: r.bound for r in swapped.inequalities}
    assert bounds["Y3 total"] == 2
    assert bounds["Y3+Y1+Y2"] == 2
    assert "R_{3} >= 0" in bounds


def test_receiver_relabelling():
    target = MessageSpec.parse("1,123", 3)
    assert receiver_relabelling(MessageSpec.parse("2,123", 3), target) == {1: 2, 2: 1, 3: 3}
    assert receiver_relabelling(MessageSpec.parse("123,1", 3), target) == {1: 1, 2: 2, 3: 3}
    assert receiver_relabelling(MessageSpec.parse("1,23", 3), target) is None
    assert receiver_relabelling(MessageSpec.parse("1,1234", 4), target) is None


def test_relabelled_capacity_meets_achievable_region():
    net = CombinationNetwork.from_labels(3, {"2": 1, "23": "1/2", "12": "3/4", "123": "1/4"})
    spec = MessageSpec.parse("2,123", 3)
    P = power_family(3)
    capacity = capacity_polytope(net, spec)
    assert capacity.provenance == "two_common"
    projected = achievable_polytope(build_nested_region(spec, P, reduced=True), net, canonical_assignment(net, P))
    assert polytopes_equal(projected, capacity)


def test_one_common_capacity_with_two_receivers():
    net = CombinationNetwork.from_labels(2, {"1": 1, "2": 1, "12": 1})
    capacity = capacity_polytope(net, MessageSpec.parse("1,12", 2))
    assert capacity.provenance == "one_common"
    assert vertex_set(capacity) == [(0, 0), (0, 2), (2, 0)]


@pytest.mark.parametrize(
    "K,messages,expansion",
    [
        (3, "1,123", None),
        (3, "12,123", None),
        (4, "1,1234", ["1", "12", "123", "1234"]),
        (4, "1,1234", ["1", "12", "13", "123", "1234"]),
        (4, "12,1234", ["12", "123", "124", "1234"]),
    ],
)
def test_general_and_nested_regions_agree(K, messages, expansion):
    spec = MessageSpec.parse(messages, K)
    P = power_family(K)
    F = P if expansion is None else SetFamily.parse(expansion, K)
    general = build_general_region(spec, F)
    nested = build_nested_region(spec, F)
    rng = np.random.default_rng(K)
    for _ in range(3):
        net = random_network(K, rng)
        asg = canonical_assignment(net, P)
        assert polytopes_equal(achievable_polytope(general, net, asg), achievable_polytope(nested, net, asg))


@pytest.mark.parametrize("seed", [None, 5])
def test_lowering_a_rate_keeps_a_point_feasible(asymmetric_net, seed):
    net = asymmetric_net if seed is None else random_network(3, np.random.default_rng(seed))
    spec = MessageSpec.parse("1,123", 3)
    grid = [F(k, 2) for k in range(7)]
    feasible = {
        (a, b): canonical_feasibility_check(net, spec, {"R_{1}": a, "R_{123}": b}).feasible
        for a in grid
        for b in grid[:5]
    }
    assert feasible[(F(0), F(0))]
    if seed is None:
        assert not feasible[(F(3), F(2))]
    step = F(1, 2)
    for (a, b), ok in feasible.items():
        if not ok:
            continue
        if a > 0:
            assert feasible[(a - step, b)], (a, b)
        if b > 0:
            assert feasible[(a, b - step)], (a, b)


@pytest.mark.parametrize("method", ["simplex", "elimination"])
def test_infeasible_certificate_is_violated_by_the_point(asymmetric_net, method):
    spec = MessageSpec.parse("1,123", 3)
    verdict = canonical_feasibility_check(asymmetric_net, spec, {"R_{1}": 2, "R_{123}": 2}, method)
    assert not verdict.feasible
    assert sorted(verdict.multipliers) == verdict.blocking_rows
    certificate = verdict.certificate
    for k, name in enumerate(verdict.variables):
        if "->" in name:
            assert certificate.coeffs[k] == 0
    point = tuple(F(2) if name in ("R_{1}", "R_{123}") else F(0) for name in verdict.variables)
    assert certificate.value(point) > certificate.bound
