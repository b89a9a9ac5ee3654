"""
Persistência de Resultados
-------------------------
Gravação determinística dos arquivos de resultado dos experimentos.

Os CSVs começam com uma linha de comentário que identifica o esquema e a
versão (ex: '# schema: regret_curve v1'); as colunas e a formatação de
ponto flutuante são fixas, então a mesma configuração e a mesma semente
produzem exatamente os mesmos bytes. Os JSONs são gravados com chaves
ordenadas.
"""

# ============================================================================
# Imports
# ============================================================================

import json
import math
import os
import sys
from typing import Any, Dict

import numpy as np
import pandas as pd

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Configurações e Constantes
# ============================================================================

SCHEMA_VERSION = 1
FLOAT_FORMAT = '%.10g'

# ============================================================================
# Funções Principais
# ============================================================================

def _to_builtin(value: Any) -> Any:
    """Converte tipos numpy/pandas para tipos nativos serializáveis em JSON."""
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_to_builtin(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        # NaN/inf não são JSON válido; viram null
        return value if math.isfinite(value) else None
    return value


def write_csv(df: pd.DataFrame, path: str, schema: str, version: int = SCHEMA_VERSION) -> str:
    """
    Grava um DataFrame em CSV com cabeçalho de esquema versionado.

    Args:
        df (pd.DataFrame): Tabela a gravar (o índice não é gravado).
        path (str): Caminho do arquivo.
        schema (str): Nome do esquema (ex: 'bound_curve').
        version (int): Versão do esquema.

    Returns:
        str: O caminho gravado.
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        f.write(f"# schema: {schema} v{version}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info(f"CSV '{schema}' gravado em {path} ({len(df)} linhas).")
    return path


def read_csv(path: str) -> pd.DataFrame:
    """Lê um CSV gravado por write_csv, ignorando a linha de esquema."""
    return pd.read_csv(path, comment='#')


def write_json(payload: Dict[str, Any], path: str) -> str:
    """
    Grava um dicionário em JSON com chaves ordenadas.

    Returns:
        str: O caminho gravado.
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(_to_builtin(payload), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')
    logger.info(f"JSON gravado em {path}.")
    return path


def read_json(path: str) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)

# ============================================================================
# Exports
# ============================================================================

__all__ = ['write_csv', 'read_csv', 'write_json', 'read_json', 'SCHEMA_VERSION']
