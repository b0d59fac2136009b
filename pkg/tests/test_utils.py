import pytest

from shared.utils import canonical_json, format_duration


@pytest.mark.parametrize("seconds, expected", [
    (0.0421, "42 ms"),
    (0.9994, "999 ms"),
    (1.0, "1.0s"),
    (42.31, "42.3s"),
    (75.3, "1min 15s"),
    (600, "10min 00s"),
    (3725, "1h 02min 05s"),
])
def test_format_duration(seconds, expected):
    assert format_duration(seconds) == expected


def test_canonical_json_is_compact_and_sorted():
    assert canonical_json({"b": 1, "a": ["1/2", None]}) == '{"a":["1/2",null],"b":1}'
    assert canonical_json({"inv": "½"}) == '{"inv":"½"}'
