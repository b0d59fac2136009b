"""
Configuração do projeto.

Ordem de resolução do arquivo de configuração:
    1. caminho explícito (flag --config da CLI)
    2. variável de ambiente SBFLAG_CONFIG
    3. nenhum arquivo (valores padrão)

O arquivo é um .env lido com dotenv_values; nada é carregado implicitamente.
"""

import os
from pathlib import Path
from typing import Dict, Literal, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import InputError
from .utils import get_logger

CONFIG_ENV_VAR = "SBFLAG_CONFIG"

# Chave do .env -> campo de Settings
CONFIG_KEYS = {
    "SBFLAG_MAX_PLACES": "max_places",
    "SBFLAG_MAX_DENOMINATOR": "max_denominator",
    "SBFLAG_MAX_DEGREE": "max_degree",
    "SBFLAG_MAX_INDEX": "max_index",
    "SBFLAG_MAX_LEMMA_PAIRS": "max_lemma_pairs",
    "SBFLAG_RANDOM_SAMPLES": "random_samples",
    "SBFLAG_RANDOM_SEED": "random_seed",
    "SBFLAG_DEFAULT_FIELD_KIND": "default_field_kind",
    "SBFLAG_OUTPUT": "output",
}


class Settings(BaseModel):
    """Configuração resolvida (orçamento do oráculo + padrões da CLI)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_places: int = Field(default=3, ge=1)
    max_denominator: int = Field(default=12, ge=1)
    max_degree: int = Field(default=6, ge=1)
    max_index: int = Field(default=360, ge=1)
    max_lemma_pairs: Optional[int] = Field(default=None, ge=1)
    random_samples: int = Field(default=2000, ge=0)
    random_seed: int = 20240611
    default_field_kind: Literal["abstract", "local", "global"] = "abstract"
    output: Literal["json", "human"] = "json"


def resolve_config_path(explicit: Optional[str] = None) -> Optional[Path]:
    """
    Resolve o caminho do arquivo de configuração.

    Args:
        explicit: Caminho passado pela flag --config (tem prioridade)

    Returns:
        Path do arquivo ou None se nenhum foi indicado
    """
    if explicit:
        return Path(explicit)
    from_env = os.environ.get(CONFIG_ENV_VAR)
    if from_env:
        return Path(from_env)
    return None


def load_settings(explicit: Optional[str] = None, overrides: Optional[Dict[str, object]] = None) -> Settings:
    """
    Carrega Settings a partir do arquivo resolvido e aplica overrides da CLI.

    Args:
        explicit: Caminho explícito do arquivo (.env)
        overrides: Valores que sobrescrevem o arquivo (None é ignorado)

    Raises:
        InputError: Arquivo inexistente, chave desconhecida ou valor inválido
    """
    logger = get_logger("config")
    values: Dict[str, object] = {}

    path = resolve_config_path(explicit)
    if path is not None:
        if not path.is_file():
            raise InputError("invalid-config", f"arquivo de configuração não encontrado: {path}")
        logger.debug(f"⚙️  Lendo configuração de {path}")
        for key, raw in dotenv_values(path).items():
            if key not in CONFIG_KEYS:
                raise InputError("invalid-config", f"chave desconhecida no arquivo de configuração: {key}")
            if raw is not None:
                values[CONFIG_KEYS[key]] = raw

    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    try:
        return Settings.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        raise InputError("invalid-config", f"configuração inválida em '{first['loc'][0]}': {first['msg']}") from e
