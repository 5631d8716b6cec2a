from fractions import Fraction

import pytest

from rate_regions.models.lattice import ReceiverSet
from rate_regions.models.messages import MessageSpec
from rate_regions.utils.config_loader import (
    load_network,
    parse_network_text,
    parse_rate_point,
    parse_rational,
    resolve_config_path,
)
from rate_regions.utils.errors import ConfigError, MessageSpecError


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" 0.5 ") == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("three")


def test_parse_network_text():
    net = parse_network_text("# demo\nK = 3\n1 = 3/2  # private link\n{2,3} = 1\n\n123 = 0\n")
    assert net.K == 3
    assert net.capacity(ReceiverSet.parse("1", 3)) == Fraction(3, 2)
    assert net.capacity(ReceiverSet.parse("23", 3)) == 1
    assert [S.label(3) for S in net.links] == ["1", "23"]


@pytest.mark.parametrize(
    "text,where",
    [
        ("1 = 1\n", "missing"),
        ("K = 3\nK = 3\n", ":2:"),
        ("K = 0\n", ":1:"),
        ("K = 3\n14 = 1\n", ":2:"),
        ("K = 3\n12 = 1\n21 = 1\n", ":3:"),
        ("K = 3\n12 = -1\n", "negative"),
        ("K = 3\n12 1\n", ":2:"),
        ("K = 3\n12 = lots\n", ":2:"),
    ],
)
def test_parse_network_errors(text, where):
    with pytest.raises(ConfigError) as e:
        parse_network_text(text, "demo.cfg")
    assert where in str(e.value)


def test_bundled_configs():
    net = load_network("three_user_asymmetric")
    assert net.K == 3
    assert sum(net.links.values()) == Fraction(19, 4)
    assert load_network("zero_three_user.cfg").links == {}
    assert len(load_network("seven_user_six_links").links) == 6


def test_missing_config():
    with pytest.raises(ConfigError):
        resolve_config_path("no_such_network")


def test_load_from_path(tmp_path):
    path = tmp_path / "two.cfg"
    path.write_text("K = 2\n12 = 1\n")
    assert load_network(str(path)).K == 2


def test_parse_rate_point():
    spec = MessageSpec.parse("1,123", 3)
    assert parse_rate_point("3/2, 1", spec) == {"R_{1}": Fraction(3, 2), "R_{123}": Fraction(1)}
    with pytest.raises(MessageSpecError):
        parse_rate_point("1", spec)
    with pytest.raises(MessageSpecError):
        parse_rate_point("1,x", spec)
