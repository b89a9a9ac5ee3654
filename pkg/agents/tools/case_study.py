"""
Estudo de Caso SWIPT
--------------------
Simula a rede IIoT ao longo do horizonte (10⁵ slots de 10 ms por padrão)
com os dispositivos como braços do bandit:

- média de cada braço = potência recebida média do dispositivo,
  normalizada pela maior potência LOS possível (κ P_t min(1, r_min^{-γ_L}));
- a cada `flip_period_slots` slots um dispositivo sorteado troca de
  visibilidade (LOS <-> NLOS), aplicado no ambiente por `schedule_flip`;
- mapeamento das jogadas: jogada individual (TS, ETC, M-UCB) = unicast,
  com transferência de informação e de energia para o dispositivo;
  BP = transferência de energia para todos; GE = energia para o grupo.

As métricas são a vazão média (bits/s sobre todos os slots), a menor
potência média colhida por dispositivo e a maior idade de transferência
de energia.
"""

# ============================================================================
# Imports
# ============================================================================

import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.bandit_env import BanditEnv, EnvConfig, pad_to_power_of_two
from agents.baselines import MUCB, MucbConfig
from agents.tsge_agent import TsgeAgent, TsgeConfig
from agents.state.beliefs import AgentRun
from agents.tools.regret import trace_sampling_age
from agents.tools.swipt import (
    SwiptScenario, DeviceRealization, harvest_power, path_gain, received_power, sample_realization, shannon_rate,
)

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Configurações e Constantes
# ============================================================================

# Agente do estudo de caso: ETC curto o bastante para caber no horizonte com K_dev grande.
# Com σ = 0.2 a menor mudança 2σ = 0.4 coincide com o limiar 4δ.
DEFAULT_CASE_AGENT = {
    'sigma': 0.2, 'delta': 0.1, 'loc_fail_prob': 0.05,
    'update_rule': 'conjugate', 'statistic_scale': 'group_sum',
}

CASE_COLUMNS = ['num_devices', 'algorithm', 'mean_throughput_bps', 'min_harvested_watts',
                'min_run_harvested_watts', 'max_energy_age']

# ============================================================================
# Tipos
# ============================================================================

@dataclass
class FlipPlan:
    """Trocas de visibilidade: slots, dispositivos e o estado LOS após cada troca."""
    slots: np.ndarray
    devices: np.ndarray
    los_after: np.ndarray

    def los_at(self, initial_los: np.ndarray, device: int, slots: np.ndarray) -> np.ndarray:
        """Estado LOS do dispositivo em cada slot informado."""
        flip_slots = self.slots[self.devices == device]
        flips = np.searchsorted(flip_slots, slots, side='right')
        return np.where(flips % 2 == 1, ~initial_los[device], initial_los[device])


@dataclass
class CaseStudyReport:
    num_devices: int
    seed: int
    horizon: int
    episode_len: int
    flips: int
    energy_window: int = 0
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=CASE_COLUMNS)

    def metric(self, algorithm: str, name: str) -> float:
        for row in self.rows:
            if row['algorithm'] == algorithm:
                return float(row[name])
        raise KeyError(algorithm)

# ============================================================================
# Funções Auxiliares
# ============================================================================

def arm_means(scenario: SwiptScenario, realization: DeviceRealization, los: Optional[np.ndarray] = None) -> np.ndarray:
    """Potência média de cada dispositivo normalizada pela maior potência LOS da realização."""
    los = realization.los_flags if los is None else los
    norm = scenario.peak_power * float(path_gain(realization.distances.min(), scenario.gamma_los))
    return received_power(scenario, realization.distances, los) / norm


def plan_flips(scenario: SwiptScenario, realization: DeviceRealization, horizon: int,
               rng: np.random.Generator) -> FlipPlan:
    """Sorteia o dispositivo de cada troca nos slots múltiplos do período."""
    slots = np.arange(scenario.flip_period_slots, horizon, scenario.flip_period_slots, dtype=np.int64)
    devices = rng.integers(scenario.num_devices, size=slots.size)
    los = realization.los_flags.copy()
    after = np.empty(slots.size, dtype=bool)
    for i, device in enumerate(devices):
        los[device] = ~los[device]
        after[i] = los[device]
    return FlipPlan(slots=slots, devices=devices, los_after=after)


def _build_env(scenario: SwiptScenario, realization: DeviceRealization, plan: FlipPlan, horizon: int,
               sigma: float, seed: int) -> BanditEnv:
    k_dev = scenario.num_devices
    means = arm_means(scenario, realization)
    cfg = pad_to_power_of_two(EnvConfig(
        num_arms=k_dev, sigma=sigma, horizon=horizon, initial_means=means.tolist(),
        change_magnitude_range=(max(2 * sigma, 1e-9),) * 2, rng_seed=seed,
    ))
    env = BanditEnv(cfg)
    los = realization.los_flags.copy()
    for slot, device, state in zip(plan.slots, plan.devices, plan.los_after):
        los[device] = state
        env.schedule_flip(int(slot), int(device), float(arm_means(scenario, realization, los)[device]))
    return env


def windowed_min_power(slots: np.ndarray, devices: np.ndarray, harvest: np.ndarray, num_devices: int,
                       num_slots: int, window: Optional[int]) -> float:
    """
    Menor potência média colhida por um dispositivo em uma janela completa de `window` slots.
    Sem janela completa, usa o horizonte inteiro.
    """
    windows = num_slots // window if window else 0
    if windows < 1:
        return float((np.bincount(devices, weights=harvest, minlength=num_devices)[:num_devices] / num_slots).min())
    keep = (slots < windows * window) & (devices < num_devices)
    cells = (slots[keep] // window) * num_devices + devices[keep]
    energy = np.bincount(cells, weights=harvest[keep], minlength=windows * num_devices)
    return float(energy.reshape(windows, num_devices).min() / window)


def evaluate_trace(scenario: SwiptScenario, realization: DeviceRealization, plan: FlipPlan,
                   run: AgentRun, fading: np.ndarray, window: Optional[int] = None) -> Dict[str, float]:
    """
    Converte o trace de um agente em vazão e energia.

    Args:
        fading (np.ndarray): Desvanecimento Exp(1) por slot do enlace unicast.
        window (Optional[int]): Janela da energia mínima (T_l + T_GE do TS-GE); None usa o horizonte.
    """
    trace = run.trace
    n = len(trace)
    k_dev = scenario.num_devices
    group_size = trace['arms'].map(len).to_numpy(dtype=np.int64)
    exploded = trace[['slot', 'arms']].assign(group=group_size).explode('arms')
    slots = exploded['slot'].to_numpy(dtype=np.int64)
    devices = exploded['arms'].to_numpy(dtype=np.int64)
    groups = exploded['group'].to_numpy(dtype=np.int64)

    los = np.empty(slots.size, dtype=bool)
    for device in range(k_dev):
        mask = devices == device
        los[mask] = plan.los_at(realization.los_flags, device, slots[mask])

    distances = realization.distances[devices]
    harvest = harvest_power(scenario, distances, los, groups)
    per_device = np.bincount(devices, weights=harvest, minlength=k_dev)[:k_dev] / n

    unicast = groups == 1
    rates = np.zeros(slots.size, dtype=float)
    power = received_power(scenario, distances[unicast], los[unicast], fading[slots[unicast]])
    rates[unicast] = shannon_rate(scenario, power)

    return {
        'mean_throughput_bps': float(rates.sum() / n),
        'min_harvested_watts': windowed_min_power(slots, devices, harvest, k_dev, n, window),
        'min_run_harvested_watts': float(per_device.min()),
        'max_energy_age': trace_sampling_age(trace, k_dev),
    }

# ============================================================================
# Funções Principais
# ============================================================================

def run_case_study(scenario: SwiptScenario, agent_cfg: Optional[Dict[str, Any]] = None, seed: int = 0,
                   mucb_cfg: Optional[Dict[str, Any]] = None, horizon: Optional[int] = None) -> CaseStudyReport:
    """
    Executa TS-GE e M-UCB sobre a mesma realização da rede e o mesmo plano de trocas.

    Args:
        scenario (SwiptScenario): Parâmetros da rede (num_devices = K_dev).
        agent_cfg (Optional[Dict[str, Any]]): Campos de TsgeConfig; 'sigma' também define o ruído do ambiente.
        seed (int): Semente da realização, das trocas e dos agentes.
        mucb_cfg (Optional[Dict[str, Any]]): Campos de MucbConfig.
        horizon (Optional[int]): Número de slots; padrão duration_seconds / slot_seconds.

    Returns:
        CaseStudyReport: Uma linha por algoritmo.
    """
    horizon = scenario.horizon_slots if horizon is None else int(horizon)
    agent_section = {**DEFAULT_CASE_AGENT, **(agent_cfg or {})}
    sigma = float(agent_section['sigma'])
    geometry_seed, flip_seed, fading_seed, env_seed, agent_seed = np.random.SeedSequence(int(seed)).generate_state(5)
    realization = sample_realization(scenario, np.random.default_rng(geometry_seed))
    plan = plan_flips(scenario, realization, horizon, np.random.default_rng(flip_seed))
    fading = np.random.default_rng(fading_seed).exponential(1.0, horizon)
    k_dev = scenario.num_devices

    logger.info(f"Estudo de caso: K_dev={k_dev}, {horizon} slots, {plan.slots.size} trocas de visibilidade "
                f"(LOS inicial: {int(realization.los_flags.sum())}/{k_dev}).")

    tsge = TsgeAgent(TsgeConfig.from_dict(agent_section, horizon=horizon, num_arms=k_dev, seed=int(agent_seed),
                                          min_change=max(2 * sigma, 1e-9)))
    tsge_run = tsge.run(_build_env(scenario, realization, plan, horizon, sigma, int(env_seed)))

    mucb = MUCB(k_dev, horizon, MucbConfig.from_dict(mucb_cfg or {}))
    mucb_run = mucb.run(_build_env(scenario, realization, plan, horizon, sigma, int(env_seed)))

    report = CaseStudyReport(num_devices=k_dev, seed=int(seed), horizon=horizon,
                             episode_len=tsge.schedule.T_l, flips=int(plan.slots.size),
                             energy_window=tsge.schedule.T_l + tsge.schedule.T_GE)
    for name, run in (('tsge', tsge_run), ('mucb', mucb_run)):
        metrics = evaluate_trace(scenario, realization, plan, run, fading, report.energy_window)
        report.rows.append({'num_devices': k_dev, 'algorithm': name, **metrics})
        logger.info(f"{name}: vazão {metrics['mean_throughput_bps']:.4g} bps, "
                    f"energia mínima {metrics['min_harvested_watts']:.4g} W, idade máxima {metrics['max_energy_age']}")
    return report

# ============================================================================
# Exports
# ============================================================================

__all__ = ['CaseStudyReport', 'FlipPlan', 'CASE_COLUMNS', 'arm_means', 'plan_flips', 'evaluate_trace',
           'windowed_min_power', 'run_case_study']

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    print("\n=== Testando o estudo de caso ===")
    result = run_case_study(SwiptScenario(num_devices=8), seed=1, horizon=20_000)
    print(result.to_frame())
