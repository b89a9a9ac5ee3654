"""
Estado dos Agentes
------------------
Este módulo define os tipos de domínio compartilhados pelos agentes de
bandit: a crença de cada braço (priori Beta + média estimada), os
super-braços da exploração em grupo, o estado de fase do episódio, as
estatísticas de detecção e os registros produzidos por uma execução
(trace por slot, relatório por episódio e o resultado consolidado).
"""

# ============================================================================
# Imports
# ============================================================================

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

# ============================================================================
# Fases
# ============================================================================

class Phase(str, Enum):
    """Fases de um episódio do TS-GE (e rótulos usados pelos baselines)."""
    ETC = 'ETC'
    TS = 'TS'
    BP = 'BP'
    GE = 'GE'
    UCB = 'UCB'
    EXPLORE = 'EXPLORE'

# ============================================================================
# Crenças e Super-braços
# ============================================================================

@dataclass
class ArmBelief:
    """
    Crença sobre um braço.

    Attributes:
        alpha (float): Parâmetro α da priori Beta (>= 1).
        beta (float): Parâmetro β da priori Beta (>= 1).
        mu_hat (float): Média corrente das recompensas brutas observadas.
        pull_count (int): Quantidade de amostras que compõem mu_hat.
        last_probed_slot (int): Último slot em que o braço foi jogado (-1 se nunca).
    """
    alpha: float = 1.0
    beta: float = 1.0
    mu_hat: float = 0.0
    pull_count: int = 0
    last_probed_slot: int = -1

    def observe(self, reward: float, slot: int) -> None:
        """Atualiza a média corrente com uma recompensa individual do braço."""
        self.pull_count += 1
        self.mu_hat += (reward - self.mu_hat) / self.pull_count
        self.last_probed_slot = slot


@dataclass
class SuperArm:
    """Super-braço B_k: braços cujo bit k (1-indexado) do código binário vale 1."""
    bit_index: int
    members: Tuple[int, ...]
    mu_hat_B: float = 0.0

    def real_members(self, num_real_arms: int) -> Tuple[int, ...]:
        """Membros que existem fisicamente (exclui braços fictícios de preenchimento)."""
        return tuple(i for i in self.members if i < num_real_arms)


@dataclass
class PhaseState:
    """Posição do agente dentro do episódio corrente."""
    phase: Phase = Phase.ETC
    episode_index: int = -1
    slot_in_phase: int = 0
    bp_accumulator: float = 0.0
    ge_accumulators: List[float] = field(default_factory=list)

    def enter(self, phase: Phase) -> None:
        self.phase = phase
        self.slot_in_phase = 0
        if phase == Phase.BP:
            self.bp_accumulator = 0.0


@dataclass(frozen=True)
class DetectionStat:
    """Valor de uma estatística de teste comparada ao seu limiar."""
    value: float
    threshold: float

    @property
    def fired(self) -> bool:
        # Folga numérica para igualdades exatas no limiar
        return self.value >= self.threshold - 1e-12

# ============================================================================
# Registros de Execução
# ============================================================================

@dataclass
class EpisodeReport:
    """Resumo de um episódio do TS-GE."""
    episode: int
    start_slot: int
    end_slot: int = -1
    ts_slots: int = 0
    bp_slots: int = 0
    ge_slots: int = 0
    bp_mean: Optional[float] = None
    bp_statistic: Optional[float] = None
    detected: bool = False
    identified_arm: Optional[int] = None
    ge_means: List[float] = field(default_factory=list)
    true_changed_arm: Optional[int] = None

    def as_row(self) -> Dict[str, Any]:
        return {
            'episode': self.episode,
            'start_slot': self.start_slot,
            'end_slot': self.end_slot,
            'ts_slots': self.ts_slots,
            'bp_slots': self.bp_slots,
            'ge_slots': self.ge_slots,
            'bp_statistic': self.bp_statistic,
            'detected': self.detected,
            'identified_arm': self.identified_arm,
            'true_changed_arm': self.true_changed_arm,
        }


EPISODE_COLUMNS = ['episode', 'start_slot', 'end_slot', 'ts_slots', 'bp_slots', 'ge_slots',
                   'bp_statistic', 'detected', 'identified_arm', 'true_changed_arm']


class TraceRecorder:
    """
    Acumula o trace por slot em colunas (slot, phase, action, arms, reward).

    As médias verdadeiras não passam por aqui: o arrependimento é calculado
    depois, a partir do log de mudanças do ambiente (agents.tools.regret).
    """

    def __init__(self):
        self.slots: List[int] = []
        self.phases: List[str] = []
        self.actions: List[str] = []
        self.arms: List[Tuple[int, ...]] = []
        self.rewards: List[float] = []

    def record(self, slot: int, phase: Phase, action: str, arms: Tuple[int, ...], reward: float) -> None:
        self.slots.append(slot)
        self.phases.append(phase.value)
        self.actions.append(action)
        self.arms.append(arms)
        self.rewards.append(reward)

    def __len__(self) -> int:
        return len(self.slots)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'slot': np.asarray(self.slots, dtype=np.int64),
            'phase': self.phases,
            'action': self.actions,
            'arms': self.arms,
            'reward': np.asarray(self.rewards, dtype=float),
        })


@dataclass
class AgentRun:
    """
    Resultado de uma execução completa de um agente.

    Attributes:
        agent (str): Nome do agente ('tsge', 'ts', 'mucb').
        trace (pd.DataFrame): Trace por slot, já anotado com o arrependimento.
        episodes (pd.DataFrame): Tabela por episódio (vazia para os baselines).
        max_sampling_age (int): Maior idade de amostragem observada após o ETC.
        restarts (List[int]): Slots em que houve reinício (M-UCB).
        extra (Dict[str, Any]): Informações específicas do agente.
    """
    agent: str
    trace: pd.DataFrame
    episodes: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=EPISODE_COLUMNS))
    max_sampling_age: int = 0
    restarts: List[int] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def final_regret(self) -> float:
        if self.trace.empty or 'cumulative_regret' not in self.trace:
            return 0.0
        return float(self.trace['cumulative_regret'].iloc[-1])


def beliefs_as_arrays(beliefs: Sequence[ArmBelief]) -> Tuple[np.ndarray, np.ndarray]:
    """Retorna os vetores (alpha, beta) de uma sequência de crenças."""
    alphas = np.fromiter((b.alpha for b in beliefs), dtype=float, count=len(beliefs))
    betas = np.fromiter((b.beta for b in beliefs), dtype=float, count=len(beliefs))
    return alphas, betas

# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'Phase', 'ArmBelief', 'SuperArm', 'PhaseState', 'DetectionStat',
    'EpisodeReport', 'EPISODE_COLUMNS', 'TraceRecorder', 'AgentRun', 'beliefs_as_arrays',
]
