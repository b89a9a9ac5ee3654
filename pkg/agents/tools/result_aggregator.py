"""
Agregador de Resultados
-----------------------
Este módulo junta os registros das replicações de um experimento em
tabelas finais. A agregação é independente da ordem de chegada: os
registros são ordenados pelo índice da replicação antes de qualquer
redução, então a execução paralela produz exatamente os mesmos bytes
que a execução sequencial.
"""

# ============================================================================
# Imports
# ============================================================================

import os
import sys
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

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

CURVE_COLUMNS = ['scenario', 'slot', 'agent', 'mean_regret', 'ci_low', 'ci_high']
FINAL_COLUMNS = ['scenario', 'agent', 'mean_final_regret', 'ci_low', 'ci_high', 'replications']
CASE_SUMMARY_COLUMNS = ['num_devices', 'algorithm', 'mean_throughput_bps', 'min_harvested_watts',
                        'worst_harvested_watts', 'min_run_harvested_watts', 'max_energy_age', 'replications']

# ============================================================================
# Funções Auxiliares
# ============================================================================

def mean_confidence_interval(values: Sequence[float], confidence: float = 0.95) -> Tuple[float, float, float]:
    """
    Média e intervalo de confiança t de Student.

    Returns:
        Tuple[float, float, float]: (média, limite inferior, limite superior); com uma
                                    única amostra o intervalo degenera na média.
    """
    data = np.asarray(values, dtype=float)
    mean = float(data.mean())
    if data.size < 2:
        return mean, mean, mean
    sem = float(stats.sem(data))
    if sem == 0.0:
        return mean, mean, mean
    half = sem * float(stats.t.ppf(0.5 + confidence / 2.0, data.size - 1))
    return mean, mean - half, mean + half


def sort_records(records: Iterable[Any]) -> List[Any]:
    """Ordena registros de replicação pelo índice (atributo `replication`)."""
    return sorted(records, key=lambda record: record.replication)

# ============================================================================
# Funções Principais
# ============================================================================

def aggregate_curves(records: Iterable[Any], confidence: float = 0.95) -> pd.DataFrame:
    """
    Curvas médias de arrependimento acumulado com banda de confiança.

    Cada registro traz em payload['curves'] um DataFrame (scenario, agent, slot, cumulative_regret).
    """
    frames = []
    for record in sort_records(records):
        try:
            frames.append(record.payload['curves'].assign(replication=record.replication))
        except (KeyError, AttributeError) as e:
            logger.error(f"Result Aggregator: replicação {getattr(record, 'replication', '?')} sem curvas: {e}")
    if not frames:
        return pd.DataFrame(columns=CURVE_COLUMNS)

    data = pd.concat(frames, ignore_index=True)
    rows = []
    for (scenario, agent, slot), group in data.groupby(['scenario', 'agent', 'slot'], sort=True):
        mean, low, high = mean_confidence_interval(group.sort_values('replication')['cumulative_regret'], confidence)
        rows.append({'scenario': scenario, 'slot': int(slot), 'agent': agent,
                     'mean_regret': mean, 'ci_low': low, 'ci_high': high})
    logger.info(f"Result Aggregator: {len(rows)} pontos de curva agregados de {len(frames)} replicações.")
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def aggregate_finals(records: Iterable[Any], confidence: float = 0.95) -> pd.DataFrame:
    """Arrependimento final médio por (cenário, agente); payload['finals'] = {(cenário, agente): valor}."""
    collected: Dict[Tuple[str, str], List[float]] = {}
    for record in sort_records(records):
        for key, value in record.payload.get('finals', {}).items():
            collected.setdefault(tuple(key), []).append(float(value))
    rows = []
    for (scenario, agent) in sorted(collected):
        values = collected[(scenario, agent)]
        mean, low, high = mean_confidence_interval(values, confidence)
        rows.append({'scenario': scenario, 'agent': agent, 'mean_final_regret': mean,
                     'ci_low': low, 'ci_high': high, 'replications': len(values)})
    return pd.DataFrame(rows, columns=FINAL_COLUMNS)


def aggregate_case_rows(rows: pd.DataFrame) -> pd.DataFrame:
    """
    Resume as linhas do estudo de caso por (num_devices, algorithm): médias entre sementes,
    pior energia entre sementes e maior idade de transferência de energia.
    """
    if rows.empty:
        return pd.DataFrame(columns=CASE_SUMMARY_COLUMNS)
    ordered = rows.sort_values(['num_devices', 'algorithm', 'seed'], kind='stable')
    summary = ordered.groupby(['num_devices', 'algorithm'], sort=True).agg(
        mean_throughput_bps=('mean_throughput_bps', 'mean'),
        min_harvested_watts=('min_harvested_watts', 'mean'),
        worst_harvested_watts=('min_harvested_watts', 'min'),
        min_run_harvested_watts=('min_run_harvested_watts', 'mean'),
        max_energy_age=('max_energy_age', 'max'),
        replications=('seed', 'count'),
    ).reset_index()
    return summary[CASE_SUMMARY_COLUMNS]


def ordering_summary(finals: pd.DataFrame, scenario: str, order: Sequence[str]) -> Dict[str, Any]:
    """
    Verifica a ordem esperada dos arrependimentos finais e a separação dos intervalos.

    Returns:
        Dict[str, Any]: ordem observada, se ela coincide com `order` e se os intervalos
                        consecutivos não se sobrepõem.
    """
    subset = finals[finals['scenario'] == scenario].set_index('agent')
    present = [agent for agent in order if agent in subset.index]
    observed = list(subset.sort_values('mean_final_regret').index)
    separated = all(
        subset.at[a, 'ci_high'] < subset.at[b, 'ci_low'] for a, b in zip(present[:-1], present[1:])
    )
    return {
        'observed_order': observed,
        'expected_order': list(order),
        'order_holds': observed == present,
        'intervals_separated': bool(separated),
        'final_means': {agent: float(subset.at[agent, 'mean_final_regret']) for agent in present},
    }


def case_comparison(summary: pd.DataFrame) -> Dict[str, Any]:
    """
    Compara TS-GE e M-UCB por K_dev a partir de aggregate_case_rows: quem lidera a vazão,
    se a liderança troca de lado ao longo da varredura e onde algum dispositivo
    ficou sem energia numa janela.
    """
    table = summary.set_index(['num_devices', 'algorithm'])
    sweep = sorted({int(k) for k in summary['num_devices']})
    leaders: Dict[str, str] = {}
    starved: Dict[str, List[str]] = {}
    for k in sweep:
        present = [a for a in ('tsge', 'mucb') if (k, a) in table.index]
        if present:
            leaders[str(k)] = max(present, key=lambda a: table.at[(k, a), 'mean_throughput_bps'])
            starved[str(k)] = [a for a in present if table.at[(k, a), 'worst_harvested_watts'] <= 0.0]
    first, last = (leaders.get(str(sweep[0])), leaders.get(str(sweep[-1]))) if sweep else (None, None)
    return {
        'throughput_leader': leaders,
        'mucb_leads_smallest': first == 'mucb',
        'tsge_leads_largest': last == 'tsge',
        'crossover_observed': first == 'mucb' and last == 'tsge',
        'starved_algorithms': starved,
    }


# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'mean_confidence_interval', 'sort_records', 'aggregate_curves', 'aggregate_finals',
    'aggregate_case_rows', 'case_comparison', 'ordering_summary',
    'CURVE_COLUMNS', 'FINAL_COLUMNS', 'CASE_SUMMARY_COLUMNS',
]
