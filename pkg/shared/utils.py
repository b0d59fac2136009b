import json
import logging
from typing import Any, Dict, Type, TypeVar

from prefect.exceptions import MissingContextError
from prefect.logging import get_logger as get_prefect_logger
from prefect.logging import get_run_logger
from pydantic import BaseModel, ValidationError

from .errors import InputError, SBFlagError

ModelT = TypeVar("ModelT", bound=BaseModel)


def get_logger(name: str) -> logging.Logger:
    """
    Retorna o logger do run Prefect ativo ou, fora de um flow/task, o logger
    do pacote (filho de "prefect", mesmo handler de console em stderr).

    Args:
        name: Nome curto do módulo (ex: "global_brauer")

    Example:
        logger = get_logger("equiv_chain")
        logger.info("🔗 Construindo cadeia...")
    """
    try:
        return get_run_logger()
    except MissingContextError:
        return get_prefect_logger(f"sbflag.{name}")


def format_duration(seconds: float) -> str:
    """
    Duração para o log: milissegundos abaixo de 1 s, depois h/min/s.

    Example:
        0.0421 -> "42 ms"
        75.3   -> "1min 15s"
        3725   -> "1h 02min 05s"
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    minutes, secs = divmod(int(seconds), 60)
    hours, minutes = divmod(minutes, 60)
    if hours:
        return f"{hours}h {minutes:02d}min {secs:02d}s"
    if minutes:
        return f"{minutes}min {secs:02d}s"
    return f"{seconds:.1f}s"


def parse_model(model: Type[ModelT], raw: Any, what: str) -> ModelT:
    """
    Valida um payload bruto contra um modelo pydantic.

    Erros de domínio (SBFlagError) levantados pelos validadores passam direto;
    qualquer outra falha de validação vira InputError("invalid-payload").

    Args:
        model: Classe pydantic de destino
        raw: Dados brutos (dict vindo de JSON)
        what: Nome do campo para a mensagem de erro

    Raises:
        SBFlagError: Payload inválido
    """
    try:
        return model.model_validate(raw)
    except SBFlagError:
        raise
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise InputError(
            "invalid-payload",
            f"{what} inválido em '{location or what}': {first.get('msg')}",
        ) from e


def canonical_json(record: Dict[str, Any]) -> str:
    """Serialização determinística (chaves ordenadas, sem espaços extras)."""
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
