import pytest

from rate_regions.api.regions import explicit_region
from rate_regions.models.assignments import NAMED_ASSIGNMENTS, named_assignment
from rate_regions.models.lattice import ReceiverSet, power_family
from rate_regions.models.network import INDEPENDENT, STRICT, CombinationNetwork, instantiate
from rate_regions.utils.errors import AssignmentError


def test_canonical_by_name(asymmetric_net):
    asg = named_assignment("canonical", asymmetric_net, 3)
    assert asg.expansion == power_family(3)
    assert asg.mode == INDEPENDENT


def test_dependent_assignments_are_strict(asymmetric_net):
    one = named_assignment("dependent_one_common", asymmetric_net, 3)
    assert one.mode == STRICT
    assert one.expansion.labels() == ["12", "123"]
    assert one.components(ReceiverSet.full(3)).labels() == ["3", "13", "23", "123"]
    two = named_assignment("dependent_two_common", asymmetric_net, 3)
    assert two.expansion.labels() == ["1", "12", "13", "123"]
    assert two.components(ReceiverSet.full(3)).labels() == ["23", "123"]


def test_dependent_assignments_cover_smaller_regions(asymmetric_net):
    for region, assignment in [
        ("smaller_f_one_common", "dependent_one_common"),
        ("smaller_f_two_common", "dependent_two_common"),
        ("smaller_f_two_order", "dependent_two_order"),
    ]:
        numeric = instantiate(explicit_region(region, 3), asymmetric_net, named_assignment(assignment, asymmetric_net, 3))
        assert all(r.bound >= 0 for r in numeric.inequalities)


def test_fixed_assignments(three_link_net, six_link_net):
    direct = named_assignment("three_links_direct", three_link_net, 6)
    assert len(direct.expansion) == 63
    assert direct.components(ReceiverSet.parse("124", 6)).labels() == ["124"]
    assert not direct.components(ReceiverSet.full(6))
    rerouted = named_assignment("six_links_rerouted", six_link_net, 7)
    assert rerouted.components(ReceiverSet.parse("12345", 7)).labels() == ["1245"]


def test_fixed_assignment_receiver_count(asymmetric_net):
    with pytest.raises(AssignmentError):
        named_assignment("three_links_direct", asymmetric_net, 3)


def test_assignment_lookup_errors(asymmetric_net):
    with pytest.raises(AssignmentError):
        named_assignment("nope", asymmetric_net, 3)
    with pytest.raises(AssignmentError):
        named_assignment("canonical", asymmetric_net, 4)
    with pytest.raises(AssignmentError):
        named_assignment("dependent_two_common", CombinationNetwork.zero(2), 2)


def test_every_name_is_listed():
    assert "canonical" in NAMED_ASSIGNMENTS
    assert len(set(NAMED_ASSIGNMENTS)) == len(NAMED_ASSIGNMENTS)
