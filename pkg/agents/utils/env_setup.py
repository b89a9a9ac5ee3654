"""
Configuração de Ambiente
------------------------
Este módulo prepara o ambiente de execução do laboratório:
- Carregamento de variáveis de ambiente de um arquivo .env (se existir).
- Aplicação das variáveis TSGE_SEED, TSGE_LOG_LEVEL e TSGE_OUTPUT_DIR sobre
  a seção 'harness' de um experimento.
- Ajuste do nível de log a partir da configuração.
"""

import os
import sys
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.config import load_config, get_setting
from agents.utils.logger import get_logger, set_log_level

logger = get_logger(__name__)

SEED_ENV_VAR = 'TSGE_SEED'
LOG_LEVEL_ENV_VAR = 'TSGE_LOG_LEVEL'
OUTPUT_DIR_ENV_VAR = 'TSGE_OUTPUT_DIR'


def setup_environment(dotenv_path: Optional[str] = None, config: Optional[Dict[str, Any]] = None) -> None:
    """Carrega o .env e ajusta o nível de log (variável de ambiente tem precedência sobre o YAML)."""
    loaded = load_dotenv(dotenv_path=dotenv_path, override=False)
    if loaded:
        logger.info("Variáveis de ambiente carregadas do arquivo .env.")

    if config is None:
        config = load_config()
    level = os.getenv(LOG_LEVEL_ENV_VAR) or get_setting('logging', 'level', 'INFO', config)
    set_log_level(level)
    logger.debug(f"Nível de log ajustado para {level}.")


def environment_overrides() -> Dict[str, Any]:
    """
    Lê as variáveis TSGE_* que sobrescrevem a seção 'harness'.

    Returns:
        Dict[str, Any]: Chaves 'base_seed' e/ou 'output_dir' quando definidas.
    """
    overrides: Dict[str, Any] = {}
    raw_seed = os.getenv(SEED_ENV_VAR)
    if raw_seed not in (None, ''):
        try:
            overrides['base_seed'] = int(raw_seed)
            logger.info(f"Semente base sobrescrita por {SEED_ENV_VAR}={overrides['base_seed']}.")
        except ValueError:
            logger.warning(f"{SEED_ENV_VAR}='{raw_seed}' não é inteiro; ignorando.")
    output_dir = os.getenv(OUTPUT_DIR_ENV_VAR)
    if output_dir:
        overrides['output_dir'] = output_dir
        logger.info(f"Diretório de saída sobrescrito por {OUTPUT_DIR_ENV_VAR}={output_dir}.")
    return overrides


__all__ = ['setup_environment', 'environment_overrides', 'SEED_ENV_VAR']
