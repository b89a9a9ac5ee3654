# utils/logger.py
"""
Utilitário de Logging
-------------------
Este módulo fornece uma instância configurada de logger para uso consistente
em todo o laboratório. Todas as partes da aplicação obtêm um logger que
exibe mensagens em formato padronizado no console.

Quando uma replicação de experimento está em execução, o seu identificador
fica no ContextVar `current_run_id_var` e os registros daquela replicação
também são gravados em CSV pelo CsvRunHandler.
"""

# ============================================================================
# Imports
# ============================================================================

import logging
import os
import sys
from typing import Optional, Union
import contextvars

from .logger_run_csv import CsvRunHandler, DEFAULT_LOGS_RUNS_DIR

# ============================================================================
# ContextVars da Execução Atual
# ============================================================================

# ID da replicação em andamento; get_logger usa o valor quando run_id não é informado.
current_run_id_var: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar("current_run_id_var", default=None)

# Diretório dos CSVs de execução (o harness aponta para <output_dir>/logs).
current_logs_dir_var: contextvars.ContextVar[str] = contextvars.ContextVar("current_logs_dir_var", default=DEFAULT_LOGS_RUNS_DIR)

# ============================================================================
# Configurações e Constantes
# ============================================================================

LOG_LEVEL = logging.getLevelName(os.getenv('TSGE_LOG_LEVEL', 'INFO').upper())
if not isinstance(LOG_LEVEL, int):
    LOG_LEVEL = logging.INFO

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# Cache de loggers já configurados para evitar adicionar múltiplos handlers
_configured_loggers = {}


class _RunIdFilter(logging.Filter):
    """Deixa passar apenas registros emitidos dentro do contexto da própria replicação."""

    def __init__(self, run_id: str):
        super().__init__()
        self.run_id = run_id

    def filter(self, record: logging.LogRecord) -> bool:
        return current_run_id_var.get() == self.run_id

# ============================================================================
# Funções Principais
# ============================================================================

def set_log_level(level: Union[int, str]) -> None:
    """
    Ajusta o nível de todos os loggers já configurados e dos próximos.

    Args:
        level (Union[int, str]): Nível numérico ou nome ('DEBUG', 'INFO', ...).
    """
    global LOG_LEVEL
    if isinstance(level, str):
        resolved = logging.getLevelName(level.upper())
        if not isinstance(resolved, int):
            logging.getLogger(__name__).warning(f"Nível de log desconhecido '{level}'. Mantendo {logging.getLevelName(LOG_LEVEL)}.")
            return
        level = resolved
    LOG_LEVEL = level
    for configured in _configured_loggers.values():
        configured.setLevel(level)
        for handler in configured.handlers:
            handler.setLevel(level)


def get_logger(name: str, run_id: Optional[str] = None) -> logging.Logger:
    """
    Obtém uma instância configurada de logger.

    Se um logger com o nome fornecido já foi configurado por esta função,
    retorna a instância existente. Caso contrário, cria um novo logger com
    StreamHandler no stdout e o formatador padrão.

    Args:
        name (str): Nome do logger, tipicamente `__name__` do módulo chamador.
        run_id (Optional[str]): ID da replicação. Se fornecido, ou se houver um
                                ID no ContextVar 'current_run_id_var', um
                                CsvRunHandler é adicionado.

    Returns:
        logging.Logger: A instância configurada do logger.
    """
    if name in _configured_loggers:
        logger = _configured_loggers[name]
    else:
        logger = logging.getLogger(name)
        logger.setLevel(LOG_LEVEL)
        logger.propagate = True
        _configured_loggers[name] = logger

    if not any(type(h) is logging.StreamHandler for h in logger.handlers):
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(LOG_LEVEL)
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(console_handler)

    effective_run_id = run_id if run_id is not None else current_run_id_var.get()

    if effective_run_id and effective_run_id.strip():
        run_handler_exists = any(
            isinstance(h, CsvRunHandler) and h.run_id == effective_run_id for h in logger.handlers
        )
        if not run_handler_exists:
            csv_handler = CsvRunHandler(run_id=effective_run_id, logs_dir=current_logs_dir_var.get())
            if csv_handler.csv_writer:
                # Loggers são compartilhados entre threads; o filtro isola a replicação.
                csv_handler.addFilter(_RunIdFilter(effective_run_id))
                logger.addHandler(csv_handler)
            else:
                logging.getLogger().warning(f"Falha ao inicializar CsvRunHandler para logger '{name}' com run_id: {effective_run_id}.")
    return logger


def close_run_handlers(run_id: str) -> int:
    """
    Fecha e remove os CsvRunHandler de uma replicação em todos os loggers do cache.

    Returns:
        int: Quantidade de handlers fechados.
    """
    closed = 0
    for configured in _configured_loggers.values():
        for handler in list(configured.handlers):
            if isinstance(handler, CsvRunHandler) and handler.run_id == run_id:
                handler.close()
                configured.removeHandler(handler)
                closed += 1
    return closed

# ============================================================================
# Exports
# ============================================================================

__all__ = ['get_logger', 'set_log_level', 'close_run_handlers', 'current_run_id_var', 'current_logs_dir_var']
