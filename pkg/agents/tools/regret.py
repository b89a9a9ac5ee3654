"""
Arrependimento Empírico
-----------------------
Reconstrói as médias verdadeiras slot a slot a partir das médias iniciais e
do log de mudanças do ambiente, e anota o trace de um agente com a média
do conjunto jogado, a melhor média e o arrependimento acumulado:

    R(t) = Σ_s [ max_i μ_i(s) - média de μ sobre o conjunto jogado em s ]

Os agentes nunca veem as médias verdadeiras; este módulo é o único
consumidor do oráculo.
"""

# ============================================================================
# Imports
# ============================================================================

import os
import sys
from typing import Any, Dict, Iterable, Sequence, Tuple, Union

import numpy as np
import pandas as pd

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import TraceMismatchError
from agents.bandit_env import CHANGE_LOG_COLUMNS, ChangeRecord
from agents.tools.analysis import BoundCurve

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Funções Auxiliares
# ============================================================================

def _change_frame(change_log: Union[pd.DataFrame, Iterable[ChangeRecord]]) -> pd.DataFrame:
    if isinstance(change_log, pd.DataFrame):
        frame = change_log[CHANGE_LOG_COLUMNS]
    else:
        frame = pd.DataFrame([(c.slot, c.arm, c.old_mean, c.new_mean) for c in change_log],
                             columns=CHANGE_LOG_COLUMNS)
    # Ordenação estável: mudanças no mesmo slot são aplicadas na ordem do log
    return frame.sort_values('slot', kind='stable').reset_index(drop=True)

# ============================================================================
# Funções Principais
# ============================================================================

def annotate_regret(trace: pd.DataFrame, change_log: Union[pd.DataFrame, Iterable[ChangeRecord]],
                    initial_means: Sequence[float]) -> pd.DataFrame:
    """
    Acrescenta ao trace as colunas played_mean, best_mean, regret_increment e cumulative_regret.

    Args:
        trace (pd.DataFrame): Trace com as colunas 'slot' (0..n-1 contíguos) e 'arms'.
        change_log: Log de mudanças do ambiente (DataFrame ou lista de ChangeRecord).
        initial_means (Sequence[float]): Médias no slot 0.

    Returns:
        pd.DataFrame: Cópia do trace anotada.

    Raises:
        TraceMismatchError: Slots não contíguos ou mudança registrada além do trace.
    """
    changes = _change_frame(change_log)
    n = len(trace)
    annotated = trace.copy()
    if n == 0:
        if len(changes):
            raise TraceMismatchError("Log de mudanças não vazio para um trace vazio.")
        for column in ('played_mean', 'best_mean', 'regret_increment', 'cumulative_regret'):
            annotated[column] = pd.Series(dtype=float)
        return annotated

    slots = trace['slot'].to_numpy()
    if slots[0] != 0 or not np.array_equal(slots, np.arange(n)):
        raise TraceMismatchError("O trace deve cobrir os slots 0..n-1 sem lacunas.")
    if len(changes) and int(changes['slot'].max()) >= n:
        raise TraceMismatchError(
            f"Mudança no slot {int(changes['slot'].max())} além do trace de {n} slots."
        )

    means = np.array(initial_means, dtype=float)
    arms_column = trace['arms'].tolist()
    played = np.empty(n, dtype=float)
    best = np.empty(n, dtype=float)

    change_slots = changes['slot'].to_numpy(dtype=np.int64)
    boundaries = sorted(set(change_slots.tolist()) | {0, n})
    pointer = 0
    for start, end in zip(boundaries[:-1], boundaries[1:]):
        while pointer < len(changes) and change_slots[pointer] == start:
            means[int(changes.at[pointer, 'arm'])] = float(changes.at[pointer, 'new_mean'])
            pointer += 1
        best[start:end] = means.max()
        cache: Dict[Tuple[int, ...], float] = {}
        for i in range(start, end):
            arms = arms_column[i]
            value = cache.get(arms)
            if value is None:
                value = float(means[list(arms)].mean())
                cache[arms] = value
            played[i] = value

    increments = best - played
    annotated['played_mean'] = played
    annotated['best_mean'] = best
    annotated['regret_increment'] = increments
    annotated['cumulative_regret'] = np.cumsum(increments)
    return annotated


def empirical_regret(trace: pd.DataFrame, change_log: Union[pd.DataFrame, Iterable[ChangeRecord]],
                     initial_means: Sequence[float], label: str = 'empirical') -> BoundCurve:
    """
    Curva de arrependimento acumulado de um trace.

    Returns:
        BoundCurve: grid = slots (1-indexados: o valor em t soma os t primeiros slots).
    """
    annotated = annotate_regret(trace, change_log, initial_means)
    grid = annotated['slot'].to_numpy(dtype=float) + 1.0
    return BoundCurve(grid=grid, values=annotated['cumulative_regret'].to_numpy(dtype=float), label=label)


def sample_curve(annotated: pd.DataFrame, every: int) -> pd.DataFrame:
    """Amostra o arrependimento acumulado a cada `every` slots (e sempre no último)."""
    n = len(annotated)
    if n == 0:
        return pd.DataFrame({'slot': [], 'cumulative_regret': []})
    idx = np.unique(np.append(np.arange(every - 1, n, every), n - 1))
    return pd.DataFrame({
        'slot': idx + 1,
        'cumulative_regret': annotated['cumulative_regret'].to_numpy()[idx],
    })


def trace_sampling_age(trace: pd.DataFrame, num_arms: int, start_slot: int = 0) -> int:
    """
    Maior idade de amostragem (slot - último slot em que o braço foi jogado,
    individualmente ou em conjunto) observada a partir de `start_slot`,
    incluindo o fim do trace.
    """
    n = len(trace)
    if n == 0:
        return 0
    exploded = trace[['slot', 'arms']].explode('arms')
    arms = exploded['arms'].to_numpy(dtype=np.int64)
    slots = exploded['slot'].to_numpy(dtype=np.int64)
    worst = 0
    for arm in range(num_arms):
        points = np.concatenate(([-1], slots[arms == arm], [n]))
        ends = points[1:]
        gaps = np.diff(points)[ends >= start_slot]
        if gaps.size:
            worst = max(worst, int(gaps.max()))
    return worst

# ============================================================================
# Exports
# ============================================================================

__all__ = ['annotate_regret', 'empirical_regret', 'sample_curve', 'trace_sampling_age']
