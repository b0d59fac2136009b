from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flows.brauer.csa import AlgebraDescriptor
from flows.oracle.checks import oracle_torsion_combination
from flows.severi_brauer.sb_calculus import (
    combine_primary_bounds,
    fibre_index_bound,
    generic_index,
    has_rational_point,
    has_rational_point_sb,
    normal_form,
    product_reduce,
    product_torsion_bound,
    rule_ids,
    sb_fibre_indices,
    torsion_bound,
    variety_index,
    vanishing_from_components,
)
from flows.severi_brauer.schemas import FlagDescriptor
from shared.errors import InputError


def flag_variety(index, flags, **kwargs) -> FlagDescriptor:
    return FlagDescriptor(algebra=AlgebraDescriptor(kind="abstract", index=index, **kwargs), flags=tuple(flags))


@st.composite
def varieties(draw):
    index = draw(st.integers(min_value=2, max_value=360))
    flags = draw(st.lists(st.integers(min_value=1, max_value=index - 1), min_size=1, max_size=3, unique=True))
    return flag_variety(index, sorted(flags), char_divides_index=False)


def test_generic_and_variety_index():
    assert generic_index(flag_variety(12, (4, 6))) == 2
    assert generic_index(flag_variety(12, (3, 9))) == 3
    assert generic_index(flag_variety(12, (1,))) == 1
    assert variety_index(flag_variety(12, (4, 6))) == 6
    assert variety_index(flag_variety(4, (4,), degree=8)) == 1
    assert variety_index(flag_variety(8, (2,))) == 4


@pytest.mark.parametrize("flags", [(), (6, 4), (4, 4), (0, 3), (3, 12)])
def test_invalid_flags(flags):
    with pytest.raises(InputError) as exc:
        flag_variety(12, flags)
    assert exc.value.code == "invalid-flags"


def test_rational_points():
    X = flag_variety(12, (4, 6))
    assert has_rational_point(X, 2) is True
    assert has_rational_point(X, 4) is False
    assert has_rational_point(X, 1) is True
    with pytest.raises(InputError) as exc:
        has_rational_point(X, 5)
    assert exc.value.code == "invalid-index"


def test_rational_points_single_flag():
    A = AlgebraDescriptor(kind="abstract", index=12)
    assert has_rational_point_sb(A, 4, 4) is True
    assert has_rational_point_sb(A, 6, 4) is False
    with pytest.raises(InputError):
        has_rational_point_sb(A, 12, 1)


def test_normal_form():
    form = normal_form(flag_variety(12, (4, 6)))
    assert form.d == 2
    assert [(item.prime, item.exponent, item.algebra.index) for item in form.components] == [(2, 1, 4)]
    form = normal_form(flag_variety(36, (6, 12)))
    assert [(item.prime, item.exponent, item.algebra.index) for item in form.components] == [(2, 1, 4), (3, 1, 9)]
    assert normal_form(flag_variety(1, (1,), degree=2)).components == ()


def test_square_free_vanishes():
    bound = torsion_bound(flag_variety(30, (6,)))
    assert bound.exponent == 1 and bound.vanishes
    assert set(rule_ids(bound)) == {"index-gcd", "square-free"}


def test_four_adic_refines():
    bound = torsion_bound(flag_variety(16, (4,), exponent=2))
    assert rule_ids(bound) == {"index-gcd": 4, "four-adic": 2}
    assert bound.exponent == 2


def test_two_adic_needs_char_flag():
    assert torsion_bound(flag_variety(12, (4, 6), char_divides_index=False)).exponent == 1
    unknown = torsion_bound(flag_variety(12, (4, 6)))
    assert unknown.exponent == 2
    assert "two-adic" not in rule_ids(unknown)
    assumed = torsion_bound(flag_variety(12, (4, 6)), enabled_hypotheses=["char-coprime"])
    assert assumed.exponent == 1
    assert assumed.conditional_assumptions == ("char-coprime",)


def test_small_index_and_exponent_rules():
    bound = torsion_bound(flag_variety(4, (2,), exponent=2, char_divides_index=False))
    assert {"index-divides-4", "exponent-not-4"} <= set(rule_ids(bound))
    assert bound.exponent == 1
    bound = torsion_bound(flag_variety(16, (2,), exponent=2))
    assert rule_ids(bound)["exponent-not-4"] == 1


def test_arithmetic_fields_vanish():
    assert torsion_bound(flag_variety(16, (4,)), field_kind="global").exponent == 1
    local = AlgebraDescriptor(kind="local", brauer_data={"invariant": "1/16"})
    bound = torsion_bound(FlagDescriptor(algebra=local, flags=(4,)))
    assert "arithmetic-field" in rule_ids(bound)
    with pytest.raises(InputError) as exc:
        torsion_bound(FlagDescriptor(algebra=local, flags=(4,)), field_kind="global")
    assert exc.value.code == "invalid-hypotheses"


def test_conditional_prime_reduction():
    X = flag_variety(16, (4,))
    assert torsion_bound(X).exponent == 4
    reduced = torsion_bound(X, enabled_hypotheses=["sbp-vanishing:2"])
    assert reduced.exponent == 2
    assert rule_ids(reduced)["prime-reduction"] == 2
    assert reduced.conditional_assumptions == ("sbp-vanishing:2",)
    assert torsion_bound(X, enabled_hypotheses=["sbp-vanishing"]).exponent == 2
    assert torsion_bound(X, enabled_hypotheses=["sbp-vanishing:3"]).exponent == 4


def test_primary_components_rule():
    bound = torsion_bound(flag_variety(16, (4,)), enabled_hypotheses=["primary-vanishing:2"])
    assert bound.exponent == 1
    assert bound.conditional_assumptions == ("primary-vanishing:2",)


@pytest.mark.parametrize("hypotheses", [["foo"], ["sbp-vanishing:4"], ["primary-vanishing"], ["char-coprime:2"]])
def test_unknown_hypotheses(hypotheses):
    with pytest.raises(InputError) as exc:
        torsion_bound(flag_variety(16, (4,)), enabled_hypotheses=hypotheses)
    assert exc.value.code == "invalid-hypotheses"


def test_contradictory_char_hypothesis():
    with pytest.raises(InputError):
        torsion_bound(flag_variety(12, (4, 6), char_divides_index=True), enabled_hypotheses=["char-coprime"])


def test_primary_combination():
    assert combine_primary_bounds([(2, 2, 1), (3, 2, 1)]) == 6
    assert combine_primary_bounds([]) == 1
    assert oracle_torsion_combination([(2, 2, 1), (3, 2, 1)]) == 6
    assert oracle_torsion_combination([(2, 3, 2), (5, 1, 1)]) == 20


def test_fibre_bounds():
    assert sb_fibre_indices(3, 2) == [1, 1, 3]
    assert fibre_index_bound([1, 2, 4]) == 4
    assert fibre_index_bound([]) == 1


def test_product_reduce():
    A = AlgebraDescriptor(kind="abstract", index=12, char_divides_index=False)
    assert product_reduce(A, 4, 6) == 2
    assert product_reduce(A, 5, 5) == 5
    assert product_reduce(A, 1, 9) == 1
    for e, d in ((0, 4), (12, 4)):
        with pytest.raises(InputError) as exc:
            product_reduce(A, e, d)
        assert exc.value.code == "invalid-flags"
    assert product_torsion_bound(A, 4, 6).exponent == 1


def test_vanishing_from_components():
    A = AlgebraDescriptor(kind="abstract", index=12)
    assert vanishing_from_components(A, 6, [2, 3])
    assert not vanishing_from_components(A, 6, [2])
    assert vanishing_from_components(A, 5, [])


@settings(max_examples=300, deadline=None)
@given(varieties())
def test_index_theorem(X):
    assert variety_index(X) * generic_index(X) == X.algebra.index


@settings(max_examples=300, deadline=None)
@given(varieties())
def test_bound_divides_index_gcd(X):
    d = generic_index(X)
    n = X.algebra.index
    bound = torsion_bound(X)
    assert gcd(d, n // d) % bound.exponent == 0
    if gcd(d, n // d) == 1:
        assert bound.vanishes


@settings(max_examples=200, deadline=None)
@given(varieties(), st.lists(st.sampled_from(["sbp-vanishing", "sbp-vanishing:2", "primary-vanishing:3", "char-coprime"])))
def test_hypotheses_never_increase_exponent(X, hypotheses):
    assert torsion_bound(X).exponent % torsion_bound(X, enabled_hypotheses=hypotheses).exponent == 0


def test_product_reduction_is_reported():
    A = AlgebraDescriptor(kind="abstract", index=16, char_divides_index=False)
    bound = product_torsion_bound(A, 4, 6)
    assert rule_ids(bound) == {"index-gcd": 2, "product-reduction": 2}
    assert bound.exponent == 2
    citation = next(rule.citation for rule in bound.rules_applied if rule.id == "product-reduction")
    assert "SB_4 × SB_6" in citation

    # sem ganho sobre os fatores, a redução não aparece
    assert "product-reduction" not in rule_ids(product_torsion_bound(A, 4, 8))
    assert "product-reduction" not in rule_ids(torsion_bound(flag_variety(16, (2,), char_divides_index=False)))
