from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from flows.brauer.invariants import QZInvariant, add, order, primary_split, reduce, scale, total
from shared.errors import InputError

invariants = st.builds(reduce, st.integers(min_value=-200, max_value=200), st.integers(min_value=1, max_value=60))


@pytest.mark.parametrize("num, den, expected", [
    (6, 8, "3/4"),
    (13, 12, "1/12"),
    (0, 5, "0/1"),
    (-1, 4, "3/4"),
    (7, -2, "1/2"),
])
def test_reduce_canonical(num, den, expected):
    assert str(reduce(num, den)) == expected


def test_reduce_zero_denominator():
    with pytest.raises(InputError) as exc:
        reduce(1, 0)
    assert exc.value.code == "invalid-denominator"


def test_parse_text_reduces():
    assert QZInvariant.model_validate("2/8") == reduce(1, 4)
    assert QZInvariant.model_validate("5") == reduce(0, 1)


@pytest.mark.parametrize("raw", ["abc", "1/", "1/0"])
def test_parse_text_rejects(raw):
    with pytest.raises(InputError):
        QZInvariant.model_validate(raw)


def test_non_canonical_construction_rejected():
    with pytest.raises(InputError) as exc:
        QZInvariant(numerator=2, denominator=8)
    assert exc.value.code == "invalid-invariant"


def test_group_operations():
    assert order(reduce(1, 12)) == 12
    assert order(reduce(0, 1)) == 1
    assert add(reduce(3, 4), reduce(1, 3)) == reduce(1, 12)
    assert scale(reduce(1, 4), 2) == reduce(1, 2)
    assert scale(reduce(1, 4), 4).is_zero
    assert total([reduce(1, 4), reduce(3, 4)]).is_zero


def test_scale_negative():
    with pytest.raises(InputError):
        scale(reduce(1, 4), -1)


def test_primary_split_examples():
    assert primary_split(reduce(1, 12)) == {2: reduce(3, 4), 3: reduce(1, 3)}
    assert primary_split(reduce(0, 1)) == {}
    assert primary_split(reduce(1, 8)) == {2: reduce(1, 8)}


def test_serializes_as_text():
    assert reduce(3, 4).model_dump() == "3/4"


@settings(max_examples=300, deadline=None)
@given(invariants)
def test_primary_split_sums_back(x):
    components = primary_split(x)
    assert total(components.values()) == x
    for prime, component in components.items():
        assert set(factorint(order(component))) == {prime}


@settings(max_examples=300, deadline=None)
@given(invariants, invariants)
def test_order_of_sum_divides_lcm(x, y):
    assert lcm(order(x), order(y)) % order(add(x, y)) == 0


@settings(max_examples=300, deadline=None)
@given(invariants)
def test_order_annihilates(x):
    assert scale(x, order(x)).is_zero


def test_primary_split_unique_exhaustive():
    # a/4 + b/3 ≡ 1/12 tem uma única solução
    solutions = [
        (a, b) for a in range(4) for b in range(3)
        if add(reduce(a, 4), reduce(b, 3)) == reduce(1, 12)
    ]
    assert solutions == [(3, 1)]
