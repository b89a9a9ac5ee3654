"""
Agentes de Comparação
---------------------
Baselines usados na corrida de arrependimento e no estudo de caso:

- ClassicTS: Thompson Sampling clássico, sem fases BP/GE. Usa exatamente o
  mesmo núcleo (ts_select/ts_update) e a mesma ordem de consumo do gerador
  que a fase TS do TS-GE.
- MUCB: UCB monitorado. Exploração forçada em rodízio numa fração γ dos
  slots, UCB1 sobre as amostras desde o último reinício e, após cada
  jogada, um teste de janela de tamanho w no braço jogado; se a diferença
  entre as somas das duas metades da janela passa de b, todo o histórico é
  descartado e o algoritmo recomeça.
"""

# ============================================================================
# Imports
# ============================================================================

import math
import os
import sys
from collections import deque
from dataclasses import dataclass
from typing import Any, Deque, Dict, List, Optional

import numpy as np

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError
from agents.bandit_env import BanditEnv, PullOutcome
from agents.state.beliefs import AgentRun, ArmBelief, Phase, TraceRecorder
from agents.tools.regret import annotate_regret, trace_sampling_age
from agents.tsge_agent import UPDATE_RULES, ts_select, ts_update

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Funções Auxiliares
# ============================================================================

def _check_env(env: BanditEnv, num_arms: int) -> None:
    if env.num_real_arms != num_arms:
        raise ArgumentError(f"Agente configurado para {num_arms} braços; ambiente tem {env.num_real_arms}.")
    if env.t != 0:
        raise ArgumentError("O ambiente já foi utilizado; crie um novo para cada execução.")

# ============================================================================
# Thompson Sampling Clássico
# ============================================================================

class ClassicTS:
    """Thompson Sampling com prioris Beta(1, 1), alheio a mudanças."""

    name = 'ts'

    def __init__(self, num_arms: int, seed: int = 0, update_rule: str = 'literal'):
        if num_arms < 1:
            raise ArgumentError(f"num_arms deve ser >= 1 (recebido {num_arms}).")
        if update_rule not in UPDATE_RULES:
            raise ArgumentError(f"update_rule deve ser um de {UPDATE_RULES}.")
        self.num_arms = num_arms
        self.update_rule = update_rule
        self.rng = np.random.default_rng(int(seed))
        self.beliefs: List[ArmBelief] = [ArmBelief() for _ in range(num_arms)]
        self.recorder = TraceRecorder()
        self.logger = get_logger(__name__)

    def step(self, env: BanditEnv) -> PullOutcome:
        """classic_ts_step: seleciona por amostragem Beta, joga e atualiza a crença do braço."""
        arm = ts_select(self.beliefs, self.rng)
        outcome = env.pull(arm)
        self.recorder.record(outcome.slot, Phase.TS, f'arm:{arm}', (arm,), outcome.reward)
        ts_update(self.beliefs[arm], outcome, self.rng, self.update_rule)
        return outcome

    def run(self, env: BanditEnv, horizon: Optional[int] = None) -> AgentRun:
        _check_env(env, self.num_arms)
        horizon = env.horizon if horizon is None else int(horizon)
        while env.t < horizon:
            self.step(env)
        trace = annotate_regret(self.recorder.to_frame(), env.export_change_log(), env.cfg.initial_means)
        self.logger.info(f"Execução TS clássico concluída: {len(trace)} slots.")
        return AgentRun(
            agent=self.name, trace=trace,
            max_sampling_age=trace_sampling_age(trace, self.num_arms),
        )

# ============================================================================
# M-UCB
# ============================================================================

@dataclass
class MucbConfig:
    """
    Parâmetros do M-UCB. Valores None são resolvidos por `resolve(K, T)`:
    b = sqrt(w/2 · log(2 K T²)) e γ = min(1, scale · sqrt(K log T / T)).
    """
    window: int = 100
    threshold: Optional[float] = None
    exploration_rate: Optional[float] = None
    exploration_scale: float = 1.0

    def __post_init__(self):
        if int(self.window) < 2 or int(self.window) % 2:
            raise ArgumentError(f"A janela w deve ser par e positiva (recebido {self.window}).")
        self.window = int(self.window)
        if self.threshold is not None and self.threshold <= 0:
            raise ArgumentError(f"O limiar b deve ser positivo (recebido {self.threshold}).")
        if self.exploration_rate is not None and not 0.0 <= self.exploration_rate <= 1.0:
            raise ArgumentError(f"γ deve estar em [0, 1] (recebido {self.exploration_rate}).")
        if self.exploration_scale <= 0:
            raise ArgumentError("exploration_scale deve ser positivo.")

    def resolve(self, num_arms: int, horizon: int) -> 'MucbConfig':
        threshold = self.threshold
        if threshold is None:
            threshold = math.sqrt(self.window / 2.0 * math.log(2.0 * num_arms * horizon ** 2))
        rate = self.exploration_rate
        if rate is None:
            rate = min(1.0, self.exploration_scale * math.sqrt(num_arms * math.log(horizon) / horizon))
        return MucbConfig(window=self.window, threshold=threshold, exploration_rate=rate,
                          exploration_scale=self.exploration_scale)

    @classmethod
    def from_dict(cls, section: Dict[str, Any], **overrides: Any) -> 'MucbConfig':
        merged = {**(section or {}), **overrides}
        return cls(**{k: v for k, v in merged.items() if k in cls.__dataclass_fields__ and v is not None})


class MUCB:
    """
    M-UCB sobre os braços reais do ambiente.

    A exploração forçada segue um cronograma determinístico: no slot t,
    a = (t - τ) mod floor(K/γ); se a < K o braço a é jogado. τ é o slot do
    último reinício. É a forma do algoritmo M-UCB publicado: a fração γ dos
    slots vai para a exploração em rodízio, sem sorteio de Bernoulli(γ).
    """

    name = 'mucb'

    def __init__(self, num_arms: int, horizon: int, cfg: Optional[MucbConfig] = None):
        if num_arms < 1:
            raise ArgumentError(f"num_arms deve ser >= 1 (recebido {num_arms}).")
        self.num_arms = num_arms
        self.cfg = (cfg or MucbConfig()).resolve(num_arms, max(2, int(horizon)))
        rate = self.cfg.exploration_rate
        self.period = int(num_arms / rate) if rate > 0 else 0
        self.recorder = TraceRecorder()
        self.restarts: List[int] = []
        self.logger = get_logger(__name__)
        self.flush(0)

    def flush(self, slot: int) -> None:
        """Descarta todo o histórico (contagens, somas e janelas) e recomeça no slot informado."""
        self.tau = slot
        self.counts = np.zeros(self.num_arms, dtype=np.int64)
        self.sums = np.zeros(self.num_arms, dtype=float)
        self.windows: List[Deque[float]] = [deque(maxlen=self.cfg.window) for _ in range(self.num_arms)]

    def select(self, slot: int) -> tuple:
        """Retorna (braço, fase) para o slot informado."""
        elapsed = slot - self.tau
        if self.period:
            forced = elapsed % self.period
            if forced < self.num_arms:
                return forced, Phase.EXPLORE
        unplayed = np.flatnonzero(self.counts == 0)
        if unplayed.size:
            return int(unplayed[0]), Phase.UCB
        bonus = np.sqrt(2.0 * math.log(max(elapsed, 1)) / self.counts)
        return int(np.argmax(self.sums / self.counts + bonus)), Phase.UCB

    def change_detected(self, arm: int) -> bool:
        """Teste de janela: |soma da metade recente - soma da metade antiga| > b."""
        window = self.windows[arm]
        if len(window) < self.cfg.window:
            return False
        half = self.cfg.window // 2
        samples = np.fromiter(window, dtype=float, count=len(window))
        return abs(samples[half:].sum() - samples[:half].sum()) > self.cfg.threshold

    def step(self, env: BanditEnv) -> PullOutcome:
        """mucb_step: escolhe, joga, atualiza e testa o braço jogado."""
        arm, phase = self.select(env.t)
        outcome = env.pull(arm)
        self.recorder.record(outcome.slot, phase, f'arm:{arm}', (arm,), outcome.reward)
        self.counts[arm] += 1
        self.sums[arm] += outcome.reward
        self.windows[arm].append(outcome.reward)
        if self.change_detected(arm):
            self.restarts.append(outcome.slot)
            self.logger.info(f"M-UCB: mudança detectada no braço {arm}; histórico descartado.",
                             extra={'slot': outcome.slot, 'phase': phase.value})
            self.flush(outcome.slot + 1)
        return outcome

    def run(self, env: BanditEnv, horizon: Optional[int] = None) -> AgentRun:
        _check_env(env, self.num_arms)
        horizon = env.horizon if horizon is None else int(horizon)
        while env.t < horizon:
            self.step(env)
        trace = annotate_regret(self.recorder.to_frame(), env.export_change_log(), env.cfg.initial_means)
        self.logger.info(f"Execução M-UCB concluída: {len(trace)} slots, {len(self.restarts)} reinícios.")
        return AgentRun(
            agent=self.name, trace=trace, restarts=list(self.restarts),
            max_sampling_age=trace_sampling_age(trace, self.num_arms),
            extra={'window': self.cfg.window, 'threshold': self.cfg.threshold,
                   'exploration_rate': self.cfg.exploration_rate},
        )

# ============================================================================
# Exports
# ============================================================================

__all__ = ['ClassicTS', 'MucbConfig', 'MUCB']

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    from agents.bandit_env import EnvConfig

    print("\n=== Testando os baselines ===")
    cfg = EnvConfig(num_arms=4, sigma=0.1, horizon=20_000, rng_seed=3,
                    forced_changes=[{'episode': 20, 'arm': 3, 'delta': -0.6}])
    for agent in (ClassicTS(4, seed=3), MUCB(4, 20_000)):
        result = agent.run(BanditEnv(cfg))
        print(f"{agent.name}: arrependimento final {result.final_regret:.2f}, reinícios {result.restarts}")
