from rate_regions.api.selftest import (
    _timed,
    check_asymmetric_example,
    check_non_unique_decoding_rows,
    check_three_link_example,
    random_bounded_system,
)


def test_non_unique_decoding_rows():
    passed, detail = check_non_unique_decoding_rows()
    assert passed, detail
    assert detail == "rows per receiver [5, 3, 3]"


def test_asymmetric_example():
    passed, detail = check_asymmetric_example()
    assert passed, detail
    assert "('0', '2')" in detail


def test_three_link_example():
    passed, detail = check_three_link_example()
    assert passed, detail


def test_random_bounded_system_has_box_rows(rng):
    poly = random_bounded_system(rng, 3, 10)
    assert poly.variables == ("x1", "x2", "x3")
    assert len(poly.inequalities) == 10
    assert [r.label for r in poly.inequalities[:2]] == ["x1 <= 6", "x1 >= 0"]


def test_timed_turns_exceptions_into_failures():
    def broken():
        raise ValueError("boom")

    result = _timed("broken", broken)
    assert not result.passed
    assert result.detail == "ValueError: boom"
