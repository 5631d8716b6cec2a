import pytest

from rate_regions.api.regions import (
    EXPLICIT_REGIONS,
    build_general_region,
    build_nested_region,
    explicit_region,
    message_spec_for,
)
from rate_regions.models.lattice import SetFamily, power_family
from rate_regions.models.messages import SPLIT, MessageSpec, expansion_for
from rate_regions.utils.errors import MessageSpecError


def labels_for(region, receiver):
    return [r.label for r in region.inequalities if r.label.startswith(f"Y{receiver} ")]


def test_three_user_region_rows_per_receiver():
    region = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    assert len(region.inequalities) == 11
    assert [len(labels_for(region, j)) for j in (1, 2, 3)] == [5, 3, 3]
    assert len(region.variables) == 8
    assert [e.label for e in region.equalities] == ["split 1", "split 23"]


def test_single_message_receivers_skip_sets_without_their_message():
    region = build_general_region(MessageSpec.parse("1,23", 3), power_family(3))
    labels = {r.label for r in region.inequalities}
    assert "Y2 B={2,12}" not in labels
    assert "Y3 B={3,13}" not in labels
    assert "Y2 B={2,23}" in labels
    assert "Y1 B={1}" in labels


def test_rows_with_zero_rate_side_are_dropped():
    region = build_general_region(MessageSpec.parse("12,13", 3), power_family(3))
    labels = {r.label for r in region.inequalities}
    # nothing is below {1}, so that row has no rates on its left side
    assert "Y1 B={1}" not in labels
    assert len(region.inequalities) == 10


def test_region_over_messages_only():
    s = MessageSpec.parse("12,13", 3)
    region = build_general_region(s, expansion_for(s, "E"))
    assert region.variable_names == ("R_{12}", "R_{13}", "R_{12->12}", "R_{13->13}")
    assert all(not r.rhs.is_constant() for r in region.inequalities)


def test_nested_region():
    s = MessageSpec.parse("1,123", 3)
    full = build_nested_region(s, power_family(3))
    reduced = build_nested_region(s, power_family(3), reduced=True)
    assert full.variable_names == ("R_{1}", "R_{123}", "R_{1->1}", "R_{1->12}", "R_{1->13}", "R_{1->123}")
    assert len(full.inequalities) == 7
    assert len(reduced.inequalities) == 7
    common = next(r for r in full.inequalities if r.label == "Y2 common")
    assert set(common.lhs.variables) == {"R_{123}", "R_{1->12}", "R_{1->123}"}


def test_two_receiver_region_over_its_own_messages():
    s = MessageSpec.parse("1,12", 2)
    region = build_general_region(s, expansion_for(s, "E"))
    assert [r.label for r in region.inequalities] == ["Y1 B={1}", "Y1 B={1,12}", "Y2 B={12}"]
    rows = {r.label: set(r.lhs.variables) for r in region.inequalities}
    assert rows["Y1 B={1}"] == {"R_{1->1}"}
    assert rows["Y1 B={1,12}"] == {"R_{1->1}", "R_{1->12}", "R_{12->12}"}
    assert rows["Y2 B={12}"] == {"R_{1->12}", "R_{12->12}"}
    assert [e.label for e in region.equalities] == ["split 1", "split 12"]


def test_nested_region_over_a_chain():
    s = MessageSpec.parse("1,1234", 4)
    F = SetFamily.parse(["1", "12", "123", "1234"], 4)
    region = build_nested_region(s, F)
    assert [r.label for r in region.inequalities] == [
        "Y1 total",
        "Y1 B={1}",
        "Y1 B={1,12}",
        "Y1 B={1,12,123}",
        "Y2 common",
        "Y3 common",
        "Y4 common",
    ]
    rows = {r.label: set(r.lhs.variables) for r in region.inequalities}
    assert rows["Y1 total"] == {"R_{1}", "R_{1234}"}
    assert rows["Y1 B={1,12}"] == {"R_{1->1}", "R_{1->12}"}
    assert rows["Y3 common"] == {"R_{1234}", "R_{1->123}", "R_{1->1234}"}
    assert len(build_nested_region(s, F, reduced=True).inequalities) == 7


@pytest.mark.parametrize("K,messages", [(3, "1,123"), (3, "12,123"), (4, "1,1234"), (4, "12,1234"), (5, "123,12345")])
def test_common_rows_carry_splits_of_the_private_message(K, messages):
    s = MessageSpec.parse(messages, K)
    private, full = s.nested_parts()
    region = build_nested_region(s, power_family(K), reduced=True)
    by_name = {v.name: v for v in region.variables}
    common = [r for r in region.inequalities if r.label.endswith(" common")]
    assert len(common) == K - len(private)
    for row in common:
        i = int(row.label.split()[0][1:])
        splits = [by_name[n] for n in row.lhs.variables if by_name[n].kind == SPLIT]
        assert splits, row.label
        assert all(v.origin == private and i in v.target for v in splits)
        assert f"R_{{{private.label(K)}->{full.label(K)}}}" in row.lhs.variables


def test_nested_region_needs_nested_messages():
    with pytest.raises(MessageSpecError):
        build_nested_region(MessageSpec.parse("12,13", 3), power_family(3))


@pytest.mark.parametrize(
    "which,K,rows",
    [
        ("two_order_k_minus_1", 3, 8),
        ("two_order_k_minus_1", 4, 12),
        ("one_common", 2, 3),
        ("one_common", 3, 5),
        ("one_common", 5, 9),
        ("two_common", 3, 7),
        ("two_common", 4, 14),
        ("three_common", 4, 22),
        ("smaller_f_one_common", 3, 5),
        ("smaller_f_two_common", 3, 7),
        ("smaller_f_two_order", 3, 8),
    ],
)
def test_explicit_region_row_counts(which, K, rows):
    assert len(explicit_region(which, K).inequalities) == rows


def test_explicit_regions_keep_message_rates_only():
    for which in EXPLICIT_REGIONS:
        if which == "three_common":
            continue
        region = explicit_region(which, 4)
        assert len(region.variables) == 2
        assert not region.equalities


def test_three_common_keeps_splits():
    region = explicit_region("three_common", 4)
    assert len(region.equalities) == 1
    assert len(region.variables) == 10


def test_explicit_region_render():
    region = explicit_region("one_common", 3)
    first = region.inequalities[0]
    assert first.label == "Y3"
    assert first.render(region.variable_names) == "R_{123} <= I(U_{3},U_{13},U_{23},U_{123};Y_3)"


def test_explicit_region_rejects():
    with pytest.raises(MessageSpecError):
        explicit_region("four_common", 5)
    with pytest.raises(MessageSpecError):
        explicit_region("three_common", 3)


def test_message_spec_for():
    assert message_spec_for("two_common", 3).messages.labels() == ["1", "123"]
    assert message_spec_for("two_order_k_minus_1", 4).messages.labels() == ["123", "124"]
