import pytest
from prefect.testing.utilities import prefect_test_harness

from flows.oracle.main import main as oracle_flow


@pytest.fixture(scope="module", autouse=True)
def prefect_backend():
    with prefect_test_harness():
        yield


def test_oracle_flow_runs_every_suite(tmp_path):
    config = tmp_path / "sbflag.env"
    config.write_text("SBFLAG_MAX_INDEX=1\n")
    report = oracle_flow(config_path=str(config))
    assert report.status == "pass"
    assert report.exit_code == 0
    assert len(report.results) == 8
