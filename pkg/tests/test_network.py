from fractions import Fraction

import pytest

from rate_regions.api.regions import build_general_region
from rate_regions.api.selftest import atom_identity_violations
from rate_regions.models.lattice import ReceiverSet, SetFamily, messages_for_receiver, power_family, up_set
from rate_regions.models.linear import MutualInfoAtom
from rate_regions.models.messages import MessageSpec
from rate_regions.models.network import (
    STRICT,
    AuxAssignment,
    CombinationNetwork,
    canonical_assignment,
    evaluate_atom,
    instantiate,
    modular_capacity,
)
from rate_regions.utils.errors import AssignmentError, LatticeError, UnassignedAuxiliaryError


def rs(text, K=3):
    return ReceiverSet.parse(text, K)


def test_modular_capacity(asymmetric_net):
    W1 = messages_for_receiver(power_family(3), 1)
    assert modular_capacity(asymmetric_net, W1) == 3
    assert modular_capacity(asymmetric_net, []) == 0


def test_network_links_skip_zero_capacities():
    net = CombinationNetwork.from_labels(3, {"1": 1, "23": 0, "123": "1/2"})
    assert [S.label(3) for S in net.links] == ["1", "123"]
    assert net.capacity(rs("23")) == 0
    assert net.capacity(rs("123")) == Fraction(1, 2)


def test_network_rejects_bad_links():
    with pytest.raises(ValueError):
        CombinationNetwork.from_labels(3, {"1": -1})
    with pytest.raises(LatticeError):
        CombinationNetwork(3, {ReceiverSet.parse("4", 4): 1})


def test_canonical_atom_values(asymmetric_net):
    asg = canonical_assignment(asymmetric_net, power_family(3))
    W1 = messages_for_receiver(power_family(3), 1)
    assert evaluate_atom(asymmetric_net, asg, MutualInfoAtom(1, W1, SetFamily([], 3))) == 3
    alone = MutualInfoAtom.given_rest(1, SetFamily([rs("1")], 3), W1)
    assert evaluate_atom(asymmetric_net, asg, alone) == Fraction(3, 2)
    # components of U_23 never reach receiver 1
    unseen = MutualInfoAtom(1, SetFamily([rs("23")], 3), SetFamily([], 3))
    assert evaluate_atom(asymmetric_net, asg, unseen) == 0


@pytest.mark.parametrize("fixture", ["asymmetric_net", "zero_net"])
def test_atom_identities(fixture, request):
    assert atom_identity_violations(request.getfixturevalue(fixture)) == []


def test_canonical_assignment_needs_power_family(asymmetric_net):
    with pytest.raises(AssignmentError):
        canonical_assignment(asymmetric_net, SetFamily.parse(["1", "23"], 3))


def test_strict_mode_checks_superposition():
    with pytest.raises(AssignmentError):
        AuxAssignment({rs("12"): [rs("12")], rs("123"): [rs("123")]}, 3, STRICT)
    asg = AuxAssignment({rs("12"): [rs("12"), rs("123")], rs("123"): [rs("123")]}, 3, STRICT)
    assert asg.expansion.labels() == ["12", "123"]


def test_unassigned_auxiliary(asymmetric_net):
    asg = AuxAssignment({rs("1"): [rs("1")]}, 3)
    atom = MutualInfoAtom(1, SetFamily([rs("12")], 3), SetFamily([], 3))
    with pytest.raises(UnassignedAuxiliaryError):
        evaluate_atom(asymmetric_net, asg, atom)


def test_instantiate_keeps_labels_and_provenance(asymmetric_net):
    region = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    numeric = instantiate(region, asymmetric_net, canonical_assignment(asymmetric_net, power_family(3)))
    assert len(numeric.inequalities) == 11 + 8
    assert len(numeric.equalities) == 2
    assert all(r.ancestry == frozenset([i]) for i, r in enumerate(numeric.all_rows()))
    row = next(r for r in numeric.inequalities if r.label == "Y1 B={1}")
    assert row.coeffs[numeric.index("R_{1->1}")] == 1
    assert row.bound == Fraction(3, 2)
    assert numeric.inequalities[-1].label == "R_{23->123} >= 0"


def test_instantiate_checks_receiver_count(asymmetric_net):
    region = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    net = CombinationNetwork.zero(4)
    with pytest.raises(AssignmentError):
        instantiate(region, net, canonical_assignment(asymmetric_net, power_family(3)))


def quarter_network(K, rng):
    P = power_family(K)
    return CombinationNetwork(K, {S: Fraction(int(q), 4) for S, q in zip(P, rng.integers(0, 9, size=len(P)))})


def superposition_assignment(K):
    P = power_family(K)
    return AuxAssignment({T: up_set(P, [T]) for T in P}, K, STRICT, "superposition")


def random_subfamily(rng, P):
    return SetFamily([S for S, keep in zip(P, rng.integers(0, 2, size=len(P))) if keep], P.K)


@pytest.mark.parametrize("K", [2, 3, 4])
@pytest.mark.parametrize("scheme", ["canonical", "superposition"])
def test_atom_chain_rule_and_monotonicity(K, scheme, rng):
    P = power_family(K)
    net = quarter_network(K, rng)
    asg = canonical_assignment(net, P) if scheme == "canonical" else superposition_assignment(K)

    def info(j, informed, conditioned):
        if not informed:
            return Fraction(0)
        return evaluate_atom(net, asg, MutualInfoAtom(j, informed, conditioned))

    for _ in range(30):
        draw = rng.integers(0, 4, size=len(P))
        A, B, C = (SetFamily([S for S, d in zip(P, draw) if d == k], K) for k in (1, 2, 3))
        for j in range(1, K + 1):
            assert info(j, A | B, C) == info(j, A, C) + info(j, B, C | A)
            assert info(j, A | B, C) >= info(j, A, C)
            assert info(j, A, C | B) <= info(j, A, C)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_atom_value_is_modular_under_the_canonical_assignment(K, rng):
    P = power_family(K)
    net = quarter_network(K, rng)
    canonical = canonical_assignment(net, P)
    layered = superposition_assignment(K)
    empty = SetFamily([], K)

    def info(asg, j, informed):
        if not informed:
            return Fraction(0)
        return evaluate_atom(net, asg, MutualInfoAtom(j, informed, empty))

    for _ in range(30):
        A, B = random_subfamily(rng, P), random_subfamily(rng, P)
        for j in range(1, K + 1):
            assert info(canonical, j, A) + info(canonical, j, B) == info(canonical, j, A | B) + info(canonical, j, A & B)
            assert info(canonical, j, A) == modular_capacity(net, messages_for_receiver(A, j))
            # shared components make the layered values only submodular
            assert info(layered, j, A) + info(layered, j, B) >= info(layered, j, A | B) + info(layered, j, A & B)
