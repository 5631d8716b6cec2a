import numpy as np
import pytest

from rate_regions.api.selftest import lattice_identity_violations
from rate_regions.models.lattice import (
    ReceiverSet,
    SetFamily,
    complement_set,
    down_set,
    family_of_down_sets,
    family_of_down_sets_containing,
    messages_for_receiver,
    power_family,
    up_set,
)
from rate_regions.utils.errors import GuardExceededError, LatticeError


def rs(text, K=3):
    return ReceiverSet.parse(text, K)


def fam(labels, K=3):
    return SetFamily.parse(labels, K)


def test_parse_forms():
    assert rs("13").members() == (1, 3)
    assert ReceiverSet.parse("{1,2,10}", 10).members() == (1, 2, 10)
    assert ReceiverSet.parse("~3", 4).members() == (1, 2, 4)
    assert ReceiverSet.parse("~", 4) == ReceiverSet.full(4)


@pytest.mark.parametrize("text", ["", "{}", "14", "1a", "11", "~123"])
def test_parse_rejects(text):
    with pytest.raises(LatticeError):
        ReceiverSet.parse(text, 3)


def test_labels_switch_to_braces_above_nine():
    assert rs("123").label(3) == "123"
    assert ReceiverSet.from_members([1, 10]).label(10) == "{1,10}"


def test_ordering_is_by_size_then_members():
    ordered = sorted([rs("23"), rs("1"), rs("123"), rs("12"), rs("3")])
    assert [s.label(3) for s in ordered] == ["1", "3", "12", "23", "123"]


def test_power_family_size():
    assert len(power_family(4)) == 15
    with pytest.raises(LatticeError):
        power_family(0)


def test_messages_for_receiver():
    assert messages_for_receiver(power_family(3), 2).labels() == ["2", "12", "23", "123"]


def test_down_and_up_sets():
    W = messages_for_receiver(power_family(3), 1)
    assert down_set(W, [rs("12")]).labels() == ["1", "12"]
    assert up_set(power_family(3), [rs("12")]).labels() == ["12", "123"]
    # seeds outside the ground are allowed
    assert down_set(W, [rs("23")]).labels() == []


def test_family_of_down_sets_of_a_chain():
    ground = fam(["1", "12", "123"])
    assert [b.labels() for b in family_of_down_sets(ground)] == [["1"], ["1", "12"], ["1", "12", "123"]]


def test_family_of_down_sets_counts():
    W = messages_for_receiver(power_family(3), 1)
    # {1} below {12}, {13} below {123}: five nonempty down-sets
    assert len(family_of_down_sets(W)) == 5
    # the Boolean lattice on three atoms has 20 down-sets, 19 of them nonempty
    W4 = messages_for_receiver(power_family(4), 1)
    assert len(family_of_down_sets(W4)) == 19


def test_family_of_down_sets_containing():
    W = messages_for_receiver(power_family(3), 2)
    found = family_of_down_sets_containing(W, [rs("23")])
    assert [b.labels() for b in found] == [["2", "23"], ["2", "12", "23"], ["2", "12", "23", "123"]]
    with pytest.raises(LatticeError):
        family_of_down_sets_containing(W, [rs("13")])


def test_down_set_guard():
    with pytest.raises(GuardExceededError):
        family_of_down_sets(power_family(5))


def test_complement_set():
    assert complement_set(rs("13"), 3) == rs("2")
    assert not complement_set(ReceiverSet.full(3), 3, allow_empty=True)
    with pytest.raises(LatticeError):
        complement_set(ReceiverSet.full(3), 3)


def test_set_family_rejects_empty_and_out_of_range():
    with pytest.raises(LatticeError):
        SetFamily([ReceiverSet(0)], 3)
    with pytest.raises(LatticeError):
        SetFamily([ReceiverSet.from_members([4])], 3)


@pytest.mark.parametrize("K", [1, 2, 3, 4, 5])
def test_receiver_family_identities(K):
    assert lattice_identity_violations(K, np.random.default_rng(K), samples=50) == []


@pytest.mark.parametrize("K", [2, 3, 4])
def test_down_and_up_sets_swap_under_complement(K, rng):
    ground = power_family(K).without(ReceiverSet.full(K))

    def flip(sets):
        return SetFamily([complement_set(S, K) for S in sets], K)

    for draw in rng.integers(0, 2, size=(20, len(ground))):
        seeds = [S for S, keep in zip(ground, draw) if keep]
        lower = down_set(ground, seeds)
        upper = up_set(ground, seeds)
        assert flip(lower) == up_set(ground, list(flip(seeds)))
        assert flip(upper) == down_set(ground, list(flip(seeds)))
        assert down_set(ground, list(lower)) == lower
        assert up_set(ground, list(upper)) == upper
        assert set(seeds) <= set(lower) & set(upper)
