import pytest

from flows.brauer.csa import AlgebraDescriptor, algebra_index, as_field_model, primary_decompose, restrict_algebra
from flows.brauer.schemas import FormalExtension
from shared.errors import InputError


def abstract(**kwargs) -> AlgebraDescriptor:
    return AlgebraDescriptor(kind="abstract", **kwargs)


def test_algebra_index_by_kind():
    assert algebra_index(abstract(index=12)) == 12
    assert algebra_index(AlgebraDescriptor(kind="global", brauer_data={"v1": "1/4", "v2": "3/4"})) == 4
    assert algebra_index(AlgebraDescriptor(kind="local", brauer_data={"invariant": "1/6"})) == 6


def test_defaults():
    A = abstract(index=12)
    assert (A.degree, A.exponent) == (12, 12)
    A = AlgebraDescriptor(kind="global", degree=8, brauer_data={"v1": "1/4", "v2": "3/4"})
    assert (A.degree, A.index, A.exponent) == (8, 4, 4)


@pytest.mark.parametrize("kwargs", [
    {"index": 12, "exponent": 2},
    {"index": 4, "exponent": 8},
    {"index": 4, "degree": 6},
])
def test_invalid_abstract(kwargs):
    with pytest.raises(InputError) as exc:
        abstract(**kwargs)
    assert exc.value.code == "invalid-algebra"


def test_declared_index_must_match_brauer_data():
    with pytest.raises(InputError):
        AlgebraDescriptor(kind="global", index=2, brauer_data={"v1": "1/4", "v2": "3/4"})
    with pytest.raises(InputError):
        AlgebraDescriptor(kind="global")


def test_primary_decompose_abstract():
    components = primary_decompose(abstract(index=12, exponent=6))
    assert [(item.index, item.exponent) for item in components] == [(4, 2), (3, 3)]


def test_primary_decompose_global():
    A = AlgebraDescriptor(kind="global", brauer_data={"v1": "1/12", "v2": "11/12"})
    components = primary_decompose(A)
    assert [
        {label: str(inv) for label, inv in item.brauer_data.invariants.items()} for item in components
    ] == [{"v1": "3/4", "v2": "1/4"}, {"v1": "1/3", "v2": "2/3"}]


def test_primary_decompose_char_flags():
    def flags(**kwargs):
        return [item.char_divides_index for item in primary_decompose(abstract(**kwargs))]

    assert flags(index=12, characteristic=2) == [True, False]
    assert flags(index=12, characteristic=3) == [False, True]
    assert flags(index=12, characteristic=0) == [False, False]
    assert flags(index=12, char_divides_index=False) == [False, False]
    assert flags(index=8, char_divides_index=True) == [True]
    # sem a característica não se sabe qual primo ela é
    assert flags(index=12, char_divides_index=True) == [None, None]


def test_characteristic_sets_char_flag():
    assert abstract(index=12, characteristic=5).char_divides_index is False
    assert abstract(index=12, characteristic=3, char_divides_index=True).char_divides_index is True
    for kwargs in (
        {"index": 12, "characteristic": 3, "char_divides_index": False},
        {"index": 12, "characteristic": 4},
    ):
        with pytest.raises(InputError) as exc:
            abstract(**kwargs)
        assert exc.value.code == "invalid-algebra"
    with pytest.raises(InputError):
        AlgebraDescriptor(kind="local", characteristic=2, brauer_data={"invariant": "1/4"})


def test_primary_decompose_split():
    assert primary_decompose(abstract(index=1)) == []


def test_restrict_local_algebra_takes_a_single_field():
    local = AlgebraDescriptor(kind="local", brauer_data={"invariant": "1/4"})
    assert restrict_algebra(local, FormalExtension(degree=2, local_data={"v": (2,)})).index == 2
    for local_data in ({"v": (1, 1)}, {"v": (2,), "w": (2,)}):
        with pytest.raises(InputError) as exc:
            restrict_algebra(local, FormalExtension(degree=2, local_data=local_data))
        assert exc.value.code == "invalid-extension"


def test_restrict_algebra():
    A = AlgebraDescriptor(kind="global", brauer_data={"v1": "1/4", "v2": "3/4"})
    restricted = restrict_algebra(A, FormalExtension(degree=2, local_data={"v1": (2,), "v2": (2,)}))
    assert (restricted.index, restricted.degree) == (2, 4)
    local = AlgebraDescriptor(kind="local", brauer_data={"invariant": "1/6"})
    assert restrict_algebra(local, FormalExtension(degree=3)).index == 2
    with pytest.raises(InputError) as exc:
        restrict_algebra(abstract(index=4), FormalExtension(degree=2))
    assert exc.value.code == "unsupported-for-abstract"


def test_as_field_model():
    local = AlgebraDescriptor(kind="local", brauer_data={"invariant": "1/4"})
    c = as_field_model(local)
    assert c.kind == "local"
    assert [place.label for place in c.places] == ["v"]
    with pytest.raises(InputError):
        as_field_model(abstract(index=4))


def test_to_record():
    record = abstract(index=4, exponent=2, char_divides_index=False).to_record()
    assert record == {"kind": "abstract", "degree": 4, "index": 4, "exponent": 2, "char_divides_index": False}
