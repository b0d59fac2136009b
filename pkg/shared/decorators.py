"""
Decoradores reutilizáveis para flows e comandos.

Automatiza o registro de início, duração e resumo de execução.
"""

from datetime import datetime
from functools import wraps
from typing import Any, Callable, Dict, Optional

from .utils import format_duration, get_logger


def run_summary(
    name: str,
    extract_summary: Optional[Callable[[Any], Dict[str, Any]]] = None,
):
    """
    Decorador que registra no log o resultado de um flow ou comando.

    Uso:
    ```python
    @flow
    @run_summary(
        name="Suíte de oráculos",
        extract_summary=lambda report: {"checks": report.total, "falhas": report.failed}
    )
    def oracle_suite_flow():
        ...
    ```

    Args:
        name: Nome exibido no log
        extract_summary: Função opcional que extrai um dict de resumo do resultado

    Returns:
        Decorador que envolve a função
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger("run")
            start_time = datetime.now()
            logger.info(f"▶️  {name}: iniciando")

            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration_seconds = (datetime.now() - start_time).total_seconds()
                logger.error(f"❌ {name}: {type(e).__name__}: {e} (após {format_duration(duration_seconds)})")
                raise

            duration_seconds = (datetime.now() - start_time).total_seconds()

            summary = {}
            if extract_summary and result is not None:
                try:
                    summary = extract_summary(result)
                except Exception as e:
                    logger.warning(f"Erro ao extrair resumo: {e}")

            details = ", ".join(f"{key}={value}" for key, value in summary.items())
            logger.info(f"✅ {name}: concluído em {format_duration(duration_seconds)}" + (f" | {details}" if details else ""))
            return result

        return wrapper
    return decorator
