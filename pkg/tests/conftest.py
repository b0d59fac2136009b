import json
from pathlib import Path

import pytest

from flows.brauer.global_brauer import validate_class
from flows.oracle.schemas import EnumerationBudget

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    """Nenhum teste herda SBFLAG_CONFIG do ambiente."""
    monkeypatch.delenv("SBFLAG_CONFIG", raising=False)


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / name


@pytest.fixture
def load_fixture():
    return lambda name: json.loads((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def class_p2_m2():
    return validate_class({"v1": "1/4", "v2": "3/4"})


@pytest.fixture
def small_budget():
    return EnumerationBudget(
        max_places=2,
        max_denominator=4,
        max_degree=4,
        max_index=16,
        max_lemma_pairs=2,
        random_samples=0,
    )
