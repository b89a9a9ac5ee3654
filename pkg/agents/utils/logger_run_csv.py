"""
Log CSV por Replicação
----------------------
Handler que grava os registros de uma replicação num arquivo
[data]_[run_id].csv. Campos de contexto passados em `extra=` (slot, fase,
episódio, braço) viram colunas, o que permite cruzar o log com o trace por
slot e com a tabela de episódios.
"""

import csv
import logging
import os
from datetime import datetime
from typing import Any, Dict, Optional, TextIO

# agents/logs_runs/ quando o harness não informa outro diretório
AGENTS_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_LOGS_RUNS_DIR = os.path.join(AGENTS_DIR, "logs_runs")

CONTEXT_FIELDS = ('slot', 'phase', 'episode', 'arm')
CSV_HEADER = ['timestamp', 'run_id', 'level', 'module', 'function', 'message', *CONTEXT_FIELDS]

# Erros do próprio handler vão para este logger (sem handler CSV) para evitar recursão
_internal = logging.getLogger(__name__)


def run_log_path(run_id: str, logs_dir: str, day: Optional[datetime] = None) -> str:
    """Caminho do CSV da replicação para o dia informado (hoje por padrão)."""
    stamp = (day or datetime.now()).strftime("%Y-%m-%d")
    return os.path.join(logs_dir, f"{stamp}_{run_id}.csv")


def context_fields(record: logging.LogRecord) -> Dict[str, Any]:
    """Valores de slot/fase/episódio/braço trazidos pelo registro (vazio quando ausentes)."""
    values = {}
    for name in CONTEXT_FIELDS:
        value = getattr(record, name, '')
        values[name] = getattr(value, 'value', value)
    return values


class CsvRunHandler(logging.Handler):
    """Grava em CSV os registros de uma única replicação (identificada por run_id)."""

    def __init__(self, run_id: Optional[str], logs_dir: str = DEFAULT_LOGS_RUNS_DIR):
        super().__init__()
        self.run_id = run_id
        self.logs_dir = logs_dir
        self.log_file_path: Optional[str] = None
        self._stream: Optional[TextIO] = None
        self.csv_writer: Optional[csv.DictWriter] = None

        if not run_id:
            _internal.warning("CsvRunHandler sem run_id: o log da replicação não será gravado.")
            return
        try:
            os.makedirs(logs_dir, exist_ok=True)
            self.log_file_path = run_log_path(run_id, logs_dir)
            is_new = not os.path.exists(self.log_file_path)
            self._stream = open(self.log_file_path, 'a', newline='', encoding='utf-8')
        except OSError as e:
            _internal.error(f"Não foi possível abrir o log da replicação {run_id} em {logs_dir}: {e}")
            self._stream = None
            return

        self.csv_writer = csv.DictWriter(self._stream, fieldnames=CSV_HEADER, quoting=csv.QUOTE_ALL)
        if is_new:
            self.csv_writer.writeheader()
            self._stream.flush()

    def emit(self, record: logging.LogRecord) -> None:
        if self.csv_writer is None:
            return
        try:
            row = {
                'timestamp': datetime.fromtimestamp(record.created).isoformat(sep=' ', timespec='milliseconds'),
                'run_id': self.run_id,
                'level': record.levelname,
                'module': record.module,
                'function': record.funcName,
                'message': self.format(record),
                **context_fields(record),
            }
            self.csv_writer.writerow(row)
            self.flush()
        except Exception as e:
            _internal.error(f"Falha ao gravar o log da replicação {self.run_id}: {e}")

    def flush(self) -> None:
        if self._stream is not None and not self._stream.closed:
            self._stream.flush()

    def close(self) -> None:
        if self._stream is not None and not self._stream.closed:
            try:
                self._stream.close()
            except OSError as e:
                _internal.error(f"Falha ao fechar o log da replicação {self.run_id}: {e}")
        self.csv_writer = None
        super().close()


__all__ = ['CsvRunHandler', 'DEFAULT_LOGS_RUNS_DIR', 'CSV_HEADER', 'context_fields', 'run_log_path']
