import pytest

from flows.brauer.global_brauer import (
    compositum,
    construct_extension_lemma,
    construct_power_extension,
    global_index,
    global_period,
    global_restrict,
    ordered_partitions,
    prime_power_index,
    realize,
    validate_class,
)
from flows.brauer.schemas import FormalExtension
from shared.errors import InputError, PreconditionError


def extension(degree, local_data, local_labels=None) -> FormalExtension:
    return FormalExtension.model_validate({
        "degree": degree,
        "local_data": local_data,
        "local_labels": local_labels or {},
    })


def generic_pair(j):
    return extension(2, {"v1": [2], "v2": [2]}, {"v1": [f"generic({j})@2"], "v2": [f"generic({j})@2"]})


def test_validate_class_and_index(class_p2_m2):
    assert global_index(class_p2_m2) == 4
    assert global_period(class_p2_m2) == 4
    assert prime_power_index(class_p2_m2) == (2, 2)


def test_validate_class_drops_zero_invariants():
    c = validate_class({"v1": "1/2", "v2": "1/2", "v3": "0"})
    assert sorted(c.invariants) == ["v1", "v2"]
    assert {place.label for place in c.places} == {"v1", "v2", "v3"}


def test_nonzero_sum_rejected():
    with pytest.raises(InputError) as exc:
        validate_class({"v1": "1/3"})
    assert exc.value.code == "not-in-brauer-group"
    assert exc.value.details == {"sum": "1/3"}


def test_real_place_invariant():
    raw = {
        "places": [{"label": "r", "descriptor": {"kind": "real"}}],
        "invariants": {"r": "1/3", "v": "2/3"},
    }
    with pytest.raises(InputError) as exc:
        validate_class(raw)
    assert exc.value.code == "invalid-local-invariant"


def test_index_and_period_of_mixed_class():
    c = validate_class({"v1": "1/12", "v2": "11/12"})
    assert global_index(c) == 12
    assert global_period(c) == 12
    assert prime_power_index(c) is None
    assert global_index(validate_class({})) == 1


def test_global_restrict(class_p2_m2):
    E = extension(2, {"v1": [2], "v2": [1, 1]})
    restricted = global_restrict(class_p2_m2, E)
    assert {label: str(inv) for label, inv in restricted.invariants.items()} == {
        "v1": "1/2",
        "v2.0": "3/4",
        "v2.1": "3/4",
    }
    assert global_index(restricted) == 4


def test_restrict_to_split_everywhere(class_p2_m2):
    E = extension(4, {"v1": [4], "v2": [4]})
    assert global_index(global_restrict(class_p2_m2, E)) == 1


def test_partition_must_sum_to_degree():
    with pytest.raises(InputError) as exc:
        extension(2, {"v1": [3]})
    assert exc.value.code == "invalid-extension"


def test_realize():
    E = realize({"v1": 2, "v2": 2}, 2)
    assert E.local_data == {"v1": (2,), "v2": (2,)}
    assert E.partition_at("v9") == (1, 1)
    with pytest.raises(InputError) as exc:
        realize({"v1": 2}, 3)
    assert exc.value.code == "unrealizable-request"


def test_compositum_of_distinct_labels():
    model = compositum(generic_pair(0), generic_pair(1))
    assert model.over_base.degree == 4
    assert model.over_base.partition_at("v1") == (4,)
    assert model.over_first.degree == 2
    assert model.over_first.partition_at("v1") == (2,)


def test_compositum_of_shared_label():
    first = extension(2, {"v1": [2]}, {"v1": ["generic(0)@2"]})
    second = extension(2, {"v1": [2], "v2": [2]}, {"v1": ["generic(0)@2"], "v2": ["generic(1)@2"]})
    model = compositum(first, second)
    assert model.over_base.partition_at("v1") == (2, 2)
    assert model.over_base.partition_at("v2") == (2, 2)


def test_compositum_of_equal_extensions():
    model = compositum(generic_pair(0), generic_pair(0))
    assert model.over_base == generic_pair(0)
    assert model.over_first.degree == 1


def test_ordered_partitions():
    assert ordered_partitions(3) == [(1, 1, 1), (2, 1), (3,)]


def test_extension_lemma(class_p2_m2):
    result = construct_extension_lemma(class_p2_m2, generic_pair(0), generic_pair(1))
    K = result.extension
    assert K.degree == 2
    assert K.distinguishing_place == "v1"
    assert {label: [str(item) for item in labels] for label, labels in K.local_labels.items()} == {
        "v1": ["generic(2)@2"],
        "v2": ["generic(2)@2"],
    }
    assert result.index_over_extension == 2
    assert result.index_over_composita == (1, 1)
    record = result.to_record()
    assert record["prime"] == 2 and record["exponent"] == 2
    assert [choice["place"] for choice in record["certificate"]] == ["v1", "v2"]


def test_extension_lemma_is_deterministic(class_p2_m2):
    first = construct_extension_lemma(class_p2_m2, generic_pair(0), generic_pair(1))
    second = construct_extension_lemma(class_p2_m2, generic_pair(0), generic_pair(1))
    assert first == second


def test_extension_lemma_coincident(class_p2_m2):
    with pytest.raises(PreconditionError) as exc:
        construct_extension_lemma(class_p2_m2, generic_pair(0), generic_pair(0))
    assert exc.value.exit_code == 3
    result = construct_extension_lemma(class_p2_m2, generic_pair(0), generic_pair(0), allow_coincident=True)
    assert result.index_over_composita == (1, 1)


def test_extension_lemma_preconditions(class_p2_m2):
    with pytest.raises(PreconditionError) as exc:
        construct_extension_lemma(class_p2_m2, FormalExtension(degree=2), generic_pair(1))
    assert exc.value.details["extension"] == "L0"
    with pytest.raises(PreconditionError):
        construct_extension_lemma(validate_class({"v1": "1/2", "v2": "1/2"}), generic_pair(0), generic_pair(1))
    with pytest.raises(PreconditionError):
        construct_extension_lemma(class_p2_m2, extension(3, {"v1": [3], "v2": [3]}), generic_pair(1))


def test_extension_lemma_fills_default_labels(class_p2_m2):
    unlabeled = extension(2, {"v1": [2], "v2": [2]})
    result = construct_extension_lemma(class_p2_m2, unlabeled, generic_pair(1))
    assert str(result.extension.local_labels["v1"][0]) == "generic(2)@2"


def test_power_extension():
    c = validate_class({"v0": "1/8", "v1": "7/8"})
    K = construct_power_extension(c, 2)
    assert K.degree == 4
    assert K.local_data == {"v0": (4,), "v1": (4,)}
    assert global_index(global_restrict(c, K)) == 2
    assert construct_power_extension(c, 0).degree == 1
    with pytest.raises(InputError) as exc:
        construct_power_extension(c, 4)
    assert exc.value.code == "invalid-target"


def test_power_extension_with_real_place():
    c = validate_class({
        "places": [{"label": "v2", "descriptor": {"kind": "real"}}],
        "invariants": {"v1": "1/8", "v2": "1/2", "v3": "3/8"},
    })
    K = construct_power_extension(c, 2)
    assert K.partition_at("v2") == (2, 2)
    assert [str(label) for label in K.local_labels["v2"]] == ["complexification@2"] * 2
    assert global_index(global_restrict(c, K)) == 2


def test_power_extension_trivial_and_composite():
    assert construct_power_extension(validate_class({}), 0).degree == 1
    with pytest.raises(InputError):
        construct_power_extension(validate_class({}), 1)
    with pytest.raises(InputError):
        construct_power_extension(validate_class({"v1": "1/6", "v2": "5/6"}), 1)


def test_local_field_model_has_no_zero_sum():
    c = validate_class({"kind": "local", "invariants": {"v": "1/4"}})
    assert global_index(c) == 4
    with pytest.raises(InputError):
        global_restrict(c, extension(2, {"v": [1, 1]}))
