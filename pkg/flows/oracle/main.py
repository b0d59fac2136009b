from typing import Optional

from prefect import flow, get_run_logger, task
from prefect.artifacts import create_table_artifact
from prefect.cache_policies import NONE
from prefect.client.schemas.schedules import CronSchedule

from flows.oracle.schemas import EnumerationBudget, SuiteReport, SuiteResult
from flows.oracle.suite import SUITES, run_suite
from shared.config import load_settings
from shared.decorators import run_summary


@task(name="load_budget", cache_policy=NONE)
def load_budget(config_path: Optional[str] = None) -> EnumerationBudget:
    """Orçamento a partir do arquivo de configuração (ou padrões)."""
    return EnumerationBudget.from_settings(load_settings(config_path))


@task(name="run_acceptance_suite", cache_policy=NONE)
def run_acceptance_suite(name: str, budget: EnumerationBudget) -> SuiteResult:
    """Roda uma suíte de aceitação (motor contra oráculos)."""
    return run_suite(name, dict(SUITES)[name], budget)


@task(name="publish_report", cache_policy=NONE)
def publish_report(report: SuiteReport) -> None:
    """Publica o relatório como table artifact."""
    logger = get_run_logger()
    icon = {"pass": "✅", "fail": "❌", "budget": "⚠️"}[report.status]
    try:
        create_table_artifact(
            key="oracle-suite",
            table=report.to_frame().to_dict(orient="records"),
            description=f"{icon} {report.total_checks} verificações, {report.total_failed} falha(s)",
        )
    except Exception as e:
        logger.warning(f"Erro criando artifact: {e}")


@flow(name="sbflag_oracle_suite", log_prints=True)
@run_summary(
    name="Suíte de oráculos",
    extract_summary=lambda report: {
        "status": report.status,
        "checks": report.total_checks,
        "falhas": report.total_failed,
    },
)
def main(config_path: Optional[str] = None) -> SuiteReport:
    """
    Flow: roda as oito suítes de aceitação, uma task por suíte, e publica a tabela.
    """
    logger = get_run_logger()
    budget = load_budget(config_path)

    logger.info("=" * 80)
    logger.info("🧪 SUÍTE DE ORÁCULOS")
    logger.info("=" * 80)
    logger.info(
        f"Orçamento: {budget.max_places} lugares, denominador {budget.max_denominator}, "
        f"grau {budget.max_degree}, índice {budget.max_index}"
    )

    results = []
    for i, (name, _) in enumerate(SUITES, 1):
        logger.info(f"[{i}/{len(SUITES)}] {name}...")
        results.append(run_acceptance_suite(name, budget))

    report = SuiteReport(budget=budget, results=tuple(results))
    publish_report(report)
    return report


if __name__ == "__main__":
    # Execução local para teste
    # main()

    main.from_source(
        source=".",
        entrypoint="flows/oracle/main.py:main"
    ).deploy(
        name="sbflag-oracle-suite",
        work_pool_name="local-pool",
        schedules=[
            CronSchedule(cron="0 3 * * *", timezone="America/Sao_Paulo")
        ],
        tags=["oracle", "acceptance"],
        parameters={},
        description="🧪 Suíte de oráculos | Motor de Brauer / Severi–Brauer contra verificadores de força bruta.",
        version="1.0.0"
    )
