"""
Taxonomia de erros do projeto.

Cada erro carrega um código de máquina (ex: "not-in-brauer-group") e o código
de saída usado pela CLI:

    2 - entrada inválida (payload, descritor, classe, extensão...)
    3 - hipóteses do lema de extensão violadas
    4 - falha de construção / defeito de consistência interna
    5 - orçamento de enumeração excedido (relatório parcial)
"""

from typing import Any, Dict, Optional


class SBFlagError(Exception):
    """
    Erro base com código de máquina e código de saída.

    Não herda de ValueError: levantado dentro de validadores pydantic, atravessa
    a validação sem virar ValidationError e preserva o código.
    """

    exit_code = 2

    def __init__(self, code: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.details = details or {}

    def to_record(self) -> Dict[str, Any]:
        """Registro serializável usado pela CLI."""
        record = {"error": self.code, "message": self.message}
        if self.details:
            record["details"] = self.details
        return record


class InputError(SBFlagError):
    """Entrada malformada ou que viola alguma validação de domínio."""

    exit_code = 2


class PreconditionError(SBFlagError):
    """Hipóteses do lema de extensão não satisfeitas."""

    exit_code = 3

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__("lemma-preconditions-failed", message, details)


class ConsistencyError(SBFlagError):
    """Construção que deveria funcionar falhou: defeito interno."""

    exit_code = 4

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__("construction-failed", message, details)


class BudgetError(SBFlagError):
    """Enumeração ultrapassou o orçamento configurado."""

    exit_code = 5

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__("budget-exceeded", message, details)
