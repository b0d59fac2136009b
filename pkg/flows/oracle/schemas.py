from typing import Any, Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from shared.config import Settings

SuiteStatus = Literal["pass", "fail", "budget"]

# mantém o relatório curto; a contagem total vai em `failed`
MAX_REPORTED_FAILURES = 20


class EnumerationBudget(BaseModel):
    """
    Limites das enumerações exaustivas (padrão: 3 lugares, denominador 12, grau 6,
    índice 360). max_lemma_pairs=None percorre todos os pares (L0, L1).
    """

    model_config = ConfigDict(frozen=True)

    max_places: int = Field(default=3, ge=1)
    max_denominator: int = Field(default=12, ge=1)
    max_degree: int = Field(default=6, ge=1)
    max_index: int = Field(default=360, ge=1)
    max_lemma_pairs: Optional[int] = Field(default=None, ge=1)
    random_samples: int = Field(default=2000, ge=0)
    random_seed: int = 20240611

    @classmethod
    def from_settings(cls, settings: Settings) -> "EnumerationBudget":
        return cls(**settings.model_dump(include=set(cls.model_fields)))

    @property
    def pattern_limit(self) -> int:
        """Máximo de atribuições locais enumeradas por instância do lema."""
        return self.max_index * self.max_degree


class SuiteResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    status: SuiteStatus
    checks: int
    failed: int
    failures: Tuple[str, ...] = ()

    def to_record(self) -> Dict[str, Any]:
        return self.model_dump()


class SuiteReport(BaseModel):
    """Relatório ordenado das suítes; o código de saída resume o pior status."""

    model_config = ConfigDict(frozen=True)

    budget: EnumerationBudget
    results: Tuple[SuiteResult, ...]

    @property
    def status(self) -> SuiteStatus:
        statuses = {result.status for result in self.results}
        if "fail" in statuses:
            return "fail"
        if "budget" in statuses:
            return "budget"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1, "budget": 5}[self.status]

    @property
    def total_checks(self) -> int:
        return sum(result.checks for result in self.results)

    @property
    def total_failed(self) -> int:
        return sum(result.failed for result in self.results)

    def to_record(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "budget": self.budget.model_dump(),
            "suites": [result.to_record() for result in self.results],
        }

    def to_frame(self) -> pd.DataFrame:
        rows: List[Dict[str, Any]] = [
            {
                "suite": result.name,
                "status": result.status,
                "checks": result.checks,
                "falhas": result.failed,
                "primeira_falha": result.failures[0] if result.failures else "",
            }
            for result in self.results
        ]
        return pd.DataFrame(rows, columns=["suite", "status", "checks", "falhas", "primeira_falha"])
