"""
Ambiente de Bandit Estacionário por Partes
------------------------------------------
Este módulo implementa o bandit Gaussiano de K braços com o processo de
mudança episódico: o horizonte (após o ETC) é dividido em episódios de
T_l = floor(sqrt(T)) slots; em cada slot, enquanto o episódio ainda não
teve mudança, um Bernoulli(p_b) decide se um braço escolhido
uniformemente desloca a sua média em ±Δ, Δ ~ U[Δ_min, Δ_max]. Há no
máximo uma mudança por episódio. Quando o agente TS-GE dirige o ambiente,
as fronteiras de episódio passam a ser as dele (begin_episode), já que
seus episódios com GE duram T_l + T_GE slots.

Cada slot consome uma jogada: `pull` (um braço) ou `pull_set` (vários
braços jogados simultaneamente, observando apenas a média das
recompensas). O processo de mudança e as recompensas usam fluxos
aleatórios independentes derivados da mesma semente, então todos os
agentes executados sobre a mesma configuração enfrentam exatamente o
mesmo histórico de mudanças.
"""

# ============================================================================
# Imports
# ============================================================================

import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Configurações e Constantes
# ============================================================================

# Média dos braços fictícios de preenchimento (substitui -inf)
DUMMY_MEAN = -1.0e6

DEFAULT_MEAN_RANGE = (0.1, 0.9)

CHANGE_LOG_COLUMNS = ['slot', 'arm', 'old_mean', 'new_mean']

# ============================================================================
# Comprimentos do Horizonte
# ============================================================================

def episode_length(horizon: int) -> int:
    """T_l = floor(sqrt(T)), calculado em aritmética inteira."""
    return math.isqrt(int(horizon))


def probe_length(horizon: int) -> int:
    """T_BP = floor(T^(2/5)): maior inteiro c com c^5 <= T^2."""
    horizon = int(horizon)
    target = horizon * horizon
    c = int(math.floor(horizon ** 0.4))
    while c > 0 and c ** 5 > target:
        c -= 1
    while (c + 1) ** 5 <= target:
        c += 1
    return c


def change_episode_probability(p_b: float, episode_len: int) -> float:
    """
    Probabilidade de um episódio ter mudança: Σ_{k=1}^{T_l} (1-p_b)^{k-1} p_b.

    Args:
        p_b (float): Probabilidade de mudança por slot.
        episode_len (int): T_l.

    Returns:
        float: 1 - (1 - p_b)^{T_l}.
    """
    if not 0.0 <= p_b <= 1.0:
        raise ArgumentError(f"p_b deve estar em [0, 1] (recebido {p_b}).")
    return float(-np.expm1(episode_len * np.log1p(-p_b))) if p_b < 1.0 else 1.0


def min_change_prob(horizon: int) -> float:
    """
    Limite inferior de p_b no modo de suposição de mudança frequente:
    1 - (1/T)^(1 / (floor(sqrt T) - floor(T^(2/5)))).

    Raises:
        ArgumentError: Se floor(sqrt T) <= floor(T^(2/5)).
    """
    gap = episode_length(horizon) - probe_length(horizon)
    if gap <= 0:
        raise ArgumentError(f"Horizonte T={horizon} curto demais: floor(sqrt T) <= floor(T^0.4).")
    return float(-np.expm1(-math.log(horizon) / gap))

# ============================================================================
# Tipos de Domínio
# ============================================================================

@dataclass(frozen=True)
class ForcedChange:
    """Mudança programada: episódio, braço (None = uniforme), Δ com sinal (None = sorteado) e deslocamento no episódio."""
    episode: int
    arm: Optional[int] = None
    delta: Optional[float] = None
    offset: int = 0

    @classmethod
    def coerce(cls, value: Any) -> 'ForcedChange':
        if isinstance(value, ForcedChange):
            return value
        if isinstance(value, dict):
            return cls(episode=int(value['episode']),
                       arm=None if value.get('arm') is None else int(value['arm']),
                       delta=None if value.get('delta') is None else float(value['delta']),
                       offset=int(value.get('offset', 0) or 0))
        if isinstance(value, (list, tuple)) and 1 <= len(value) <= 4:
            return cls.coerce(dict(zip(('episode', 'arm', 'delta', 'offset'), value)))
        raise ArgumentError(f"Mudança programada inválida: {value!r}")


@dataclass
class EnvConfig:
    """
    Configuração do ambiente.

    `change_start_slot` marca o fim do ETC: o processo de mudança e a
    contagem de episódios só começam a partir dele. `num_real_arms` é
    preenchido por pad_to_power_of_two; braços com índice >= num_real_arms
    são fictícios e nunca mudam.
    """
    num_arms: int = 8
    sigma: float = 0.1
    horizon: int = 100_000
    episode_len: Optional[int] = None
    change_prob_per_slot: float = 0.0
    change_magnitude_range: Tuple[float, float] = (0.2, 0.4)
    reward_cap: float = 1.0
    initial_means: Optional[Sequence[float]] = None
    rng_seed: int = 0
    frequent_changes: bool = False
    forced_changes: Sequence[Any] = ()
    change_start_slot: int = 0
    num_real_arms: Optional[int] = None

    def __post_init__(self):
        if int(self.num_arms) < 1:
            raise ArgumentError(f"num_arms deve ser >= 1 (recebido {self.num_arms}).")
        self.num_arms = int(self.num_arms)
        if self.num_real_arms is None:
            self.num_real_arms = self.num_arms
        if not 1 <= self.num_real_arms <= self.num_arms:
            raise ArgumentError("num_real_arms deve estar entre 1 e num_arms.")
        if self.sigma < 0:
            raise ArgumentError(f"sigma deve ser não negativo (recebido {self.sigma}).")
        if int(self.horizon) < 1:
            raise ArgumentError(f"horizon deve ser >= 1 (recebido {self.horizon}).")
        self.horizon = int(self.horizon)
        if self.episode_len is None:
            self.episode_len = max(1, episode_length(self.horizon))
        if int(self.episode_len) < 1:
            raise ArgumentError(f"episode_len deve ser >= 1 (recebido {self.episode_len}).")
        self.episode_len = int(self.episode_len)
        if not 0.0 <= self.change_prob_per_slot <= 1.0:
            raise ArgumentError(f"change_prob_per_slot deve estar em [0, 1] (recebido {self.change_prob_per_slot}).")

        low, high = (float(v) for v in self.change_magnitude_range)
        if not 0 < low <= high:
            raise ArgumentError(f"change_magnitude_range inválido: {self.change_magnitude_range}.")
        if low < 2 * self.sigma - 1e-12:
            raise ArgumentError(f"Δ_min={low} menor que 2σ={2 * self.sigma}.")
        self.change_magnitude_range = (low, high)

        if self.initial_means is None:
            self.initial_means = tuple(np.linspace(*DEFAULT_MEAN_RANGE, self.num_real_arms).tolist()) \
                if self.num_real_arms > 1 else (DEFAULT_MEAN_RANGE[1],)
            self.initial_means += (DUMMY_MEAN,) * (self.num_arms - self.num_real_arms)
        self.initial_means = tuple(float(m) for m in self.initial_means)
        if len(self.initial_means) != self.num_arms:
            raise ArgumentError(f"initial_means tem {len(self.initial_means)} valores para {self.num_arms} braços.")
        if any(m > self.reward_cap + 1e-12 for m in self.initial_means):
            raise ArgumentError(f"Todas as médias iniciais devem ser <= R_max={self.reward_cap}.")

        if self.frequent_changes:
            bound = min_change_prob(self.horizon)
            if self.change_prob_per_slot < bound:
                raise ArgumentError(f"p_b={self.change_prob_per_slot} abaixo do limite {bound:.6g} exigido no modo de mudança frequente.")

        forced = tuple(ForcedChange.coerce(fc) for fc in (self.forced_changes or ()))
        episodes = [fc.episode for fc in forced]
        if len(set(episodes)) != len(episodes):
            raise ArgumentError("No máximo uma mudança programada por episódio.")
        for fc in forced:
            if fc.episode < 0 or not 0 <= fc.offset < self.episode_len:
                raise ArgumentError(f"Mudança programada fora do episódio: {fc}.")
            if fc.arm is not None and not 0 <= fc.arm < self.num_real_arms:
                raise ArgumentError(f"Braço da mudança programada fora do intervalo: {fc}.")
        self.forced_changes = forced
        if self.change_start_slot < 0:
            raise ArgumentError("change_start_slot deve ser não negativo.")

    @property
    def forced_by_episode(self) -> Dict[int, ForcedChange]:
        return {fc.episode: fc for fc in self.forced_changes}

    @classmethod
    def from_dict(cls, section: Dict[str, Any], **overrides: Any) -> 'EnvConfig':
        """Cria a configuração a partir da seção 'env' do YAML; chaves desconhecidas são ignoradas."""
        known = {k: v for k, v in {**(section or {}), **overrides}.items() if k in cls.__dataclass_fields__}
        if known.get('change_magnitude_range') is not None:
            known['change_magnitude_range'] = tuple(known['change_magnitude_range'])
        return cls(**{k: v for k, v in known.items() if v is not None})


@dataclass
class ChangeRecord:
    slot: int
    arm: int
    old_mean: float
    new_mean: float
    episode: int = -1


@dataclass
class EnvState:
    current_means: np.ndarray
    t: int = 0
    episode_index: int = -1
    change_log: List[ChangeRecord] = field(default_factory=list)
    episode_changed_flag: bool = False
    episode_start_slot: int = 0
    agent_episodes: bool = False


@dataclass(frozen=True)
class PullOutcome:
    """Resultado de uma jogada: recompensa bruta, recompensa normalizada em [0, 1] e slot."""
    reward: float
    normalized_reward: float
    slot: int
    arms: Tuple[int, ...] = ()


def normalize_reward(reward: float, reward_cap: float) -> float:
    return min(1.0, max(0.0, reward / reward_cap))

# ============================================================================
# Funções Principais
# ============================================================================

def pad_to_power_of_two(cfg: EnvConfig) -> EnvConfig:
    """
    Completa K até a próxima potência de dois com braços fictícios de média DUMMY_MEAN.

    Returns:
        EnvConfig: Nova configuração (a original não é alterada).
    """
    real = cfg.num_real_arms
    padded = 1 << (real - 1).bit_length() if real > 1 else 1
    if padded == cfg.num_arms:
        return cfg
    means = tuple(cfg.initial_means[:real]) + (DUMMY_MEAN,) * (padded - real)
    logger.info(f"K={real} completado para {padded} com {padded - real} braços fictícios.")
    return replace(cfg, num_arms=padded, num_real_arms=real, initial_means=means)


def _apply_change(state: EnvState, cfg: EnvConfig, arm: int, delta: float, episode: int) -> None:
    old = float(state.current_means[arm])
    new = min(old + delta, cfg.reward_cap)
    state.current_means[arm] = new
    state.change_log.append(ChangeRecord(slot=state.t, arm=arm, old_mean=old, new_mean=new, episode=episode))
    state.episode_changed_flag = True
    logger.info(f"Mudança no slot {state.t} (episódio {episode}): braço {arm} {old:.4f} -> {new:.4f}",
                extra={'slot': state.t, 'phase': 'env'})


def _draw_delta(cfg: EnvConfig, rng: np.random.Generator) -> float:
    magnitude = rng.uniform(*cfg.change_magnitude_range)
    return magnitude if rng.random() < 0.5 else -magnitude


def step_change_process(state: EnvState, cfg: EnvConfig, rng: np.random.Generator) -> EnvState:
    """
    Avança o processo de mudança para o slot state.t (chamado antes da jogada do slot).

    Sem `agent_episodes`, os episódios seguem o relógio fixo de T_l slots a
    partir de change_start_slot. Depois que o agente chama
    BanditEnv.begin_episode, o episódio corrente e o deslocamento dentro dele
    vêm das fronteiras informadas pelo agente, que podem durar T_l + T_GE.

    Returns:
        EnvState: O mesmo estado, possivelmente com uma mudança aplicada.
    """
    if state.agent_episodes:
        episode = state.episode_index
        offset = state.t - state.episode_start_slot
    else:
        if state.t < cfg.change_start_slot:
            return state
        relative = state.t - cfg.change_start_slot
        episode, offset = divmod(relative, cfg.episode_len)
        if episode != state.episode_index:
            state.episode_index = episode
            state.episode_changed_flag = False
    if state.episode_changed_flag:
        return state

    if cfg.forced_changes:
        planned = cfg.forced_by_episode.get(episode)
        if planned is not None and offset == planned.offset:
            arm = planned.arm if planned.arm is not None else int(rng.integers(cfg.num_real_arms))
            delta = planned.delta if planned.delta is not None else _draw_delta(cfg, rng)
            _apply_change(state, cfg, arm, delta, episode)
        return state

    if cfg.change_prob_per_slot <= 0.0:
        return state
    if rng.random() < cfg.change_prob_per_slot:
        arm = int(rng.integers(cfg.num_real_arms))
        _apply_change(state, cfg, arm, _draw_delta(cfg, rng), episode)
    return state


def oracle_best_mean(state: EnvState) -> float:
    """Maior média verdadeira no estado atual (uso exclusivo do cálculo de arrependimento)."""
    return float(np.max(state.current_means))

# ============================================================================
# Ambiente
# ============================================================================

class BanditEnv:
    """
    Bandit Gaussiano estacionário por partes.

    Cada chamada a `pull` ou `pull_set` consome um slot: aplica as trocas
    agendadas, avança o processo de mudança e sorteia as recompensas.
    """

    def __init__(self, cfg: EnvConfig):
        self.cfg = cfg
        change_seq, reward_seq = np.random.SeedSequence(int(cfg.rng_seed)).spawn(2)
        self._change_rng = np.random.default_rng(change_seq)
        self._reward_rng = np.random.default_rng(reward_seq)
        self.state = EnvState(current_means=np.array(cfg.initial_means, dtype=float))
        self._scheduled_flips: Dict[int, List[Tuple[int, float]]] = {}
        self.real_arms: Tuple[int, ...] = tuple(range(cfg.num_real_arms))

    # ------------------------------------------------------------------
    # Propriedades
    # ------------------------------------------------------------------

    @property
    def num_arms(self) -> int:
        return self.cfg.num_arms

    @property
    def num_real_arms(self) -> int:
        return self.cfg.num_real_arms

    @property
    def horizon(self) -> int:
        return self.cfg.horizon

    @property
    def t(self) -> int:
        return self.state.t

    @property
    def change_log(self) -> List[ChangeRecord]:
        return self.state.change_log

    # ------------------------------------------------------------------
    # Jogadas
    # ------------------------------------------------------------------

    def _begin_slot(self) -> None:
        for arm, new_mean in self._scheduled_flips.pop(self.state.t, ()):
            self.flip_arm(arm, new_mean)
        step_change_process(self.state, self.cfg, self._change_rng)

    def _check_arm(self, arm: int) -> int:
        if not 0 <= int(arm) < self.cfg.num_arms:
            raise ArgumentError(f"Braço {arm} fora do intervalo [0, {self.cfg.num_arms}).")
        return int(arm)

    def pull(self, arm: int) -> PullOutcome:
        """
        Joga um braço no slot corrente.

        Raises:
            ArgumentError: Índice fora do intervalo.
        """
        arm = self._check_arm(arm)
        self._begin_slot()
        reward = float(self.state.current_means[arm] + self.cfg.sigma * self._reward_rng.standard_normal())
        outcome = PullOutcome(reward, normalize_reward(reward, self.cfg.reward_cap), self.state.t, (arm,))
        self.state.t += 1
        return outcome

    def pull_set(self, arms: Iterable[int]) -> PullOutcome:
        """
        Joga um conjunto de braços simultaneamente; a recompensa é a média de
        uma amostra Gaussiana nova por braço.

        Raises:
            ArgumentError: Conjunto vazio ou índice fora do intervalo.
        """
        played = tuple(sorted({self._check_arm(a) for a in arms}))
        if not played:
            raise ArgumentError("pull_set exige um conjunto não vazio de braços.")
        self._begin_slot()
        means = self.state.current_means[list(played)]
        samples = means + self.cfg.sigma * self._reward_rng.standard_normal(len(played))
        reward = float(np.mean(samples))
        outcome = PullOutcome(reward, normalize_reward(reward, self.cfg.reward_cap), self.state.t, played)
        self.state.t += 1
        return outcome

    # ------------------------------------------------------------------
    # Oráculo, trocas diretas e exportação
    # ------------------------------------------------------------------

    def begin_episode(self, index: Optional[int] = None) -> int:
        """
        Abre um novo episódio no slot corrente. A partir da primeira chamada, o
        processo de mudança deixa o relógio fixo e passa a seguir as fronteiras
        do agente, garantindo no máximo uma mudança por episódio do agente.

        Args:
            index (Optional[int]): Índice do episódio; por padrão, o anterior + 1.

        Returns:
            int: Índice do episódio aberto.
        """
        state = self.state
        state.agent_episodes = True
        state.episode_index = state.episode_index + 1 if index is None else int(index)
        state.episode_start_slot = state.t
        state.episode_changed_flag = False
        return state.episode_index

    @classmethod
    def replaying(cls, cfg: EnvConfig, change_log: Sequence[ChangeRecord]) -> 'BanditEnv':
        """
        Ambiente que reproduz um histórico de mudanças já registrado, sem
        processo aleatório próprio. As recompensas usam o mesmo fluxo da semente.
        """
        quiet = replace(cfg, forced_changes=(), change_prob_per_slot=0.0, frequent_changes=False)
        env = cls(quiet)
        for record in change_log:
            env.schedule_flip(record.slot, record.arm, record.new_mean)
        return env

    def oracle_best_mean(self) -> float:
        return oracle_best_mean(self.state)

    def flip_arm(self, arm: int, new_mean: float) -> None:
        """Atribui diretamente uma nova média a um braço (registrada no log de mudanças)."""
        arm = self._check_arm(arm)
        old = float(self.state.current_means[arm])
        self.state.current_means[arm] = float(new_mean)
        self.state.change_log.append(ChangeRecord(self.state.t, arm, old, float(new_mean), self.state.episode_index))
        logger.debug(f"Troca direta no slot {self.state.t}: braço {arm} {old:.4f} -> {new_mean:.4f}",
                     extra={'slot': self.state.t, 'phase': 'env'})

    def schedule_flip(self, slot: int, arm: int, new_mean: float) -> None:
        """Agenda uma troca direta para o início do slot informado."""
        self._check_arm(arm)
        if slot < self.state.t:
            raise ArgumentError(f"Slot {slot} já passou (slot atual {self.state.t}).")
        self._scheduled_flips.setdefault(int(slot), []).append((int(arm), float(new_mean)))

    def export_change_log(self) -> pd.DataFrame:
        return export_change_log(self.state)


def export_change_log(state: EnvState) -> pd.DataFrame:
    """Tabela (slot, arm, old_mean, new_mean) do log de mudanças."""
    rows = [(c.slot, c.arm, c.old_mean, c.new_mean) for c in state.change_log]
    return pd.DataFrame(rows, columns=CHANGE_LOG_COLUMNS)

# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'DUMMY_MEAN', 'EnvConfig', 'EnvState', 'PullOutcome', 'ForcedChange', 'ChangeRecord', 'BanditEnv',
    'episode_length', 'probe_length', 'change_episode_probability', 'min_change_prob',
    'pad_to_power_of_two', 'step_change_process', 'oracle_best_mean', 'export_change_log',
    'normalize_reward', 'CHANGE_LOG_COLUMNS',
]

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    print("\n=== Testando o ambiente ===")
    env = BanditEnv(EnvConfig(num_arms=5, sigma=0.1, horizon=10_000, change_prob_per_slot=0.01, rng_seed=7))
    for _ in range(2_000):
        env.pull(int(env.t % env.num_arms))
    print(f"Mudanças após {env.t} slots: {len(env.change_log)}")
    print(env.export_change_log().head())
    padded = pad_to_power_of_two(EnvConfig(num_arms=5))
    print(f"K=5 completado: {padded.num_arms} braços, médias {padded.initial_means}")
