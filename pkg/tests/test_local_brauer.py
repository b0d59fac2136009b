import pytest

from flows.brauer.local_brauer import (
    catalog_degree_p_extensions,
    catalog_size,
    count_degree_p_extensions,
    descriptor_above,
    local_index,
    local_restrict,
)
from flows.brauer.schemas import LocalBrauerClass, LocalExtensionLabel, LocalFieldDescriptor
from shared.errors import InputError


def descriptor(**kwargs) -> LocalFieldDescriptor:
    return LocalFieldDescriptor(**kwargs)


def test_local_index_and_restrict():
    c = LocalBrauerClass(invariant="1/6")
    assert local_index(c) == 6
    assert str(local_restrict(LocalBrauerClass(invariant="1/4"), 2).invariant) == "1/2"
    assert str(local_restrict(LocalBrauerClass(invariant="1/3"), 2).invariant) == "2/3"


def test_local_restrict_invalid_degree():
    with pytest.raises(InputError):
        local_restrict(LocalBrauerClass(invariant="1/4"), 0)


def test_count_case_1_artin_schreier():
    count = count_degree_p_extensions(descriptor(residue_char=3, residue_size=9, field_char=3), 3)
    assert count.infinite and count.case == 1
    assert str(count) == "Infinite"


def test_count_case_2_kummer():
    count = count_degree_p_extensions(descriptor(residue_char=5, residue_size=5), 2)
    assert (count.case, str(count)) == (2, "AtLeast(3)")


def test_count_case_3():
    count = count_degree_p_extensions(descriptor(residue_char=5, residue_size=5), 3)
    assert (count.case, str(count)) == (3, "AtLeast(4)")


def test_count_needs_zeta_flag_for_residue_prime():
    with pytest.raises(InputError) as exc:
        count_degree_p_extensions(descriptor(residue_char=3, residue_size=3), 3)
    assert exc.value.code == "invalid-descriptor"
    flagged = descriptor(residue_char=3, residue_size=3, zeta_flags={3: True})
    assert count_degree_p_extensions(flagged, 3).case == 2


def test_count_rejects_archimedean_and_composite():
    with pytest.raises(InputError):
        count_degree_p_extensions(descriptor(kind="real"), 2)
    with pytest.raises(InputError) as exc:
        count_degree_p_extensions(descriptor(residue_char=5, residue_size=5), 4)
    assert exc.value.code == "invalid-prime"


def test_catalog_case_3_labels():
    labels = catalog_degree_p_extensions(descriptor(residue_char=5, residue_size=5), 3, 4)
    assert [str(label) for label in labels] == [
        "unramified@3",
        "eisenstein-root(0)@3",
        "eisenstein-root(1)@3",
        "eisenstein-root(2)@3",
    ]


def test_catalog_case_1_skips_multiples_of_p():
    labels = catalog_degree_p_extensions(descriptor(residue_char=3, residue_size=3, field_char=3), 3, 4)
    assert [label.parameter for label in labels] == [1, 2, 4, 5]


def test_catalog_beyond_guarantee():
    with pytest.raises(InputError) as exc:
        catalog_degree_p_extensions(descriptor(residue_char=5, residue_size=5), 3, 5)
    assert exc.value.code == "insufficient-extensions"


def test_catalog_archimedean_and_generic():
    real = descriptor(kind="real")
    assert [str(label) for label in catalog_degree_p_extensions(real, 2, 1)] == ["complexification@2"]
    assert catalog_size(real, 3) == 0
    assert catalog_size(descriptor(kind="complex"), 2) == 0
    assert [str(label) for label in catalog_degree_p_extensions(None, 2, 3)] == [
        "generic(0)@2", "generic(1)@2", "generic(2)@2",
    ]
    assert catalog_degree_p_extensions(None, 2, 0) == []


def test_descriptor_above():
    assert descriptor_above(descriptor(kind="real"), 2).kind == "complex"
    base = descriptor(residue_char=5, residue_size=5, zeta_flags={})
    unramified = LocalExtensionLabel.model_validate("unramified@3")
    assert descriptor_above(base, 3, unramified).residue_size == 125
    assert descriptor_above(base, 3, LocalExtensionLabel.model_validate("eisenstein-root(1)@3")).residue_size == 5
    with pytest.raises(InputError):
        descriptor_above(descriptor(kind="complex"), 2)


@pytest.mark.parametrize("kwargs", [
    {"residue_char": 4, "residue_size": 4},
    {"residue_char": 2, "residue_size": 6},
    {"residue_char": 3, "residue_size": 9, "field_char": 5},
    {"residue_char": 5, "residue_size": 5, "zeta_flags": {3: True}},
    {"kind": "real", "residue_char": 2},
])
def test_invalid_descriptors(kwargs):
    with pytest.raises(InputError) as exc:
        LocalFieldDescriptor(**kwargs)
    assert exc.value.code == "invalid-descriptor"


@pytest.mark.parametrize("text", ["bogus@2", "kummer(1)", "kummer(1)@1"])
def test_invalid_labels(text):
    with pytest.raises((InputError, ValueError)):
        LocalExtensionLabel.model_validate(text)


def test_label_text_round():
    label = LocalExtensionLabel.model_validate("eisenstein-root(1)@3")
    assert (label.family, label.parameter, label.degree) == ("eisenstein-root", 1, 3)
    assert str(label) == "eisenstein-root(1)@3"
