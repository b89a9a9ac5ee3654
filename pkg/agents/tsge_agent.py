"""
Agente TS-GE
------------
Implementação do agente Thompson Sampling com Exploração em Grupo:

1. ETC: cada braço é jogado n_ETC = ceil(ln(1/p_L) / (2δ²)) vezes para
   localizar as médias (as prioris Beta continuam em (1, 1)).
2. Episódios de T_l = floor(sqrt T) slots, cada um com uma fase TS de
   T_TS = T_l - T_BP slots e uma fase BP (broadcast probing) de
   T_BP = floor(T^(2/5)) slots em que todos os braços são jogados juntos.
3. Ao fim da BP, a média observada é comparada à média das estimativas;
   se o desvio atinge 4δ, uma fase GE joga os d = log2 K super-braços
   (braços com o bit k do código ligado), n_ge vezes cada. Os super-braços
   cujo desvio atinge 2δ formam o código binário do braço alterado, cuja
   média é reestimada e cuja priori é copiada do braço de média mais próxima.

Os códigos dos braços vão de 0 a K-1; o código 0 (nenhum super-braço
disparou) identifica o braço 0. Quando K não é potência de dois, os
códigos acima de K-1 pertencem a braços fictícios que nunca são jogados.
"""

# ============================================================================
# Imports
# ============================================================================

import math
import os
import sys
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError
from agents.bandit_env import BanditEnv, PullOutcome, episode_length, probe_length
from agents.state.beliefs import (
    AgentRun, ArmBelief, DetectionStat, EpisodeReport, EPISODE_COLUMNS, Phase, PhaseState,
    SuperArm, TraceRecorder, beliefs_as_arrays,
)
from agents.tools.regret import annotate_regret

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Configurações e Constantes
# ============================================================================

UPDATE_RULES = ('conjugate', 'literal')
STATISTIC_SCALES = ('group_sum', 'mean')

# ============================================================================
# Configuração e Cronograma
# ============================================================================

@dataclass
class TsgeConfig:
    """
    Configuração do agente.

    Attributes:
        horizon (int): T.
        num_arms (int): Número de braços reais.
        sigma (float): Desvio padrão comum das recompensas (define o δ padrão).
        delta (Optional[float]): Meia-largura de localização; padrão σ/2.
        loc_fail_prob (Optional[float]): p_L; padrão 1/T.
        n_ge (Optional[int]): Jogadas por super-braço na GE; padrão floor(sqrt T).
        update_rule (str): 'literal' (padrão: α += 1 - R*, β += R*) ou a variante
                           'conjugate' (α += R*, β += 1 - R*).
        statistic_scale (str): 'mean' (padrão) compara médias por braço; a variante
                               'group_sum' multiplica os desvios pelo tamanho do grupo.
        min_change (Optional[float]): Δ_min do ambiente; quando informado exige 4δ <= Δ_min.
        seed (int): Semente do gerador do agente.
    """
    horizon: int
    num_arms: int
    sigma: float = 0.1
    delta: Optional[float] = None
    loc_fail_prob: Optional[float] = None
    n_ge: Optional[int] = None
    update_rule: str = 'literal'
    statistic_scale: str = 'mean'
    min_change: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.horizon < 1 or self.num_arms < 1:
            raise ArgumentError("horizon e num_arms devem ser positivos.")
        if self.delta is None:
            self.delta = self.sigma / 2.0
        if self.delta <= 0:
            raise ArgumentError(f"delta deve ser positivo (recebido {self.delta}).")
        if self.loc_fail_prob is None:
            self.loc_fail_prob = 1.0 / self.horizon
        if not 0.0 < self.loc_fail_prob <= 1.0:
            raise ArgumentError(f"loc_fail_prob deve estar em (0, 1] (recebido {self.loc_fail_prob}).")
        if self.n_ge is None:
            self.n_ge = max(1, episode_length(self.horizon))
        if int(self.n_ge) < 1:
            raise ArgumentError(f"n_ge deve ser >= 1 (recebido {self.n_ge}).")
        self.n_ge = int(self.n_ge)
        if self.update_rule not in UPDATE_RULES:
            raise ArgumentError(f"update_rule deve ser um de {UPDATE_RULES}.")
        if self.statistic_scale not in STATISTIC_SCALES:
            raise ArgumentError(f"statistic_scale deve ser um de {STATISTIC_SCALES}.")
        if self.min_change is not None and self.bp_threshold > self.min_change + 1e-12:
            raise ArgumentError(f"Limiar 4δ={self.bp_threshold} acima da menor mudança Δ_min={self.min_change}.")

    @property
    def bp_threshold(self) -> float:
        return 4.0 * self.delta

    @property
    def ge_threshold(self) -> float:
        return 2.0 * self.delta

    @classmethod
    def from_dict(cls, section: Dict[str, Any], **overrides: Any) -> 'TsgeConfig':
        merged = {**(section or {}), **overrides}
        known = {k: v for k, v in merged.items() if k in cls.__dataclass_fields__ and v is not None}
        return cls(**known)


@dataclass(frozen=True)
class PhaseSchedule:
    """Comprimentos das fases derivados de (T, K, δ, p_L, n_ge)."""
    T_l: int
    T_TS: int
    T_BP: int
    n_ETC: int
    T_ETC: int
    d: int
    n_ge: int
    T_GE: int
    N_l: int

    def as_dict(self) -> Dict[str, int]:
        return asdict(self)


def code_width(num_arms: int) -> int:
    """d = número de bits dos códigos 0..K-1 (log2 K após completar para potência de dois)."""
    return (int(num_arms) - 1).bit_length() if num_arms > 1 else 0


def etc_length(delta: float, loc_fail_prob: float) -> int:
    """
    n_ETC = ceil((1/(2δ²)) ln(1/p_L)).

    Raises:
        ArgumentError: δ <= 0 ou p_L fora de (0, 1].
    """
    if delta <= 0:
        raise ArgumentError(f"delta deve ser positivo (recebido {delta}).")
    if not 0.0 < loc_fail_prob <= 1.0:
        raise ArgumentError(f"p_L deve estar em (0, 1] (recebido {loc_fail_prob}).")
    return int(math.ceil(math.log(1.0 / loc_fail_prob) / (2.0 * delta * delta)))


def phase_lengths(horizon: int, num_arms: int, delta: float, loc_fail_prob: float,
                  n_ge: Optional[int] = None) -> PhaseSchedule:
    """
    Calcula o cronograma de fases.

    Raises:
        ArgumentError: Horizonte curto demais para uma fase TS (T_TS < 1).
    """
    t_l = episode_length(horizon)
    t_bp = probe_length(horizon)
    t_ts = t_l - t_bp
    if t_ts < 1:
        raise ArgumentError(f"Horizonte T={horizon} curto demais: T_TS = {t_ts}.")
    n_etc = etc_length(delta, loc_fail_prob)
    t_etc = num_arms * n_etc
    d = code_width(num_arms)
    n_ge = int(n_ge) if n_ge is not None else max(1, t_l)
    return PhaseSchedule(
        T_l=t_l, T_TS=t_ts, T_BP=t_bp, n_ETC=n_etc, T_ETC=t_etc,
        d=d, n_ge=n_ge, T_GE=d * n_ge, N_l=max(0, (horizon - t_etc) // t_l),
    )

# ============================================================================
# Núcleo Thompson Sampling
# ============================================================================

def ts_select(beliefs: Sequence[ArmBelief], rng: np.random.Generator) -> int:
    """Sorteia θ_i ~ Beta(α_i, β_i) e retorna argmax (empate: menor índice)."""
    alphas, betas = beliefs_as_arrays(beliefs)
    return int(np.argmax(rng.beta(alphas, betas)))


def ts_update(belief: ArmBelief, outcome: PullOutcome, rng: np.random.Generator,
              update_rule: str = 'literal') -> ArmBelief:
    """
    Atualiza a crença com R* ~ Bernoulli(R_π) e a média corrente com a recompensa bruta.
    """
    success = 1.0 if rng.random() < outcome.normalized_reward else 0.0
    if update_rule == 'literal':
        belief.alpha += 1.0 - success
        belief.beta += success
    else:
        belief.alpha += success
        belief.beta += 1.0 - success
    belief.observe(outcome.reward, outcome.slot)
    return belief

# ============================================================================
# Detecção e Identificação
# ============================================================================

def bp_statistic(beliefs: Sequence[ArmBelief], bp_mean: float, delta: float,
                 statistic_scale: str = 'mean') -> DetectionStat:
    """|média das estimativas - média da BP|, multiplicado por K em 'group_sum', contra 4δ."""
    estimate = float(np.mean([b.mu_hat for b in beliefs]))
    scale = len(beliefs) if statistic_scale == 'group_sum' else 1
    return DetectionStat(value=abs(estimate - bp_mean) * scale, threshold=4.0 * delta)


def bp_detect(beliefs: Sequence[ArmBelief], bp_mean: float, m: int, delta: float,
              statistic_scale: str = 'mean') -> bool:
    """Teste de mudança ao fim da fase BP do episódio m."""
    stat = bp_statistic(beliefs, bp_mean, delta, statistic_scale)
    if stat.fired:
        logger.debug(f"Episódio {m}: estatística BP {stat.value:.4f} >= {stat.threshold:.4f}")
    return stat.fired


def construct_super_arms(num_arms: int) -> List[SuperArm]:
    """
    Constrói os d = log2 K super-braços: o braço i pertence a B_k sse o bit k de i vale 1.

    Raises:
        ArgumentError: K não é potência de dois.
    """
    if num_arms < 1 or num_arms & (num_arms - 1):
        raise ArgumentError(f"K={num_arms} não é potência de dois.")
    d = num_arms.bit_length() - 1
    return [
        SuperArm(bit_index=k, members=tuple(i for i in range(num_arms) if (i >> (k - 1)) & 1))
        for k in range(1, d + 1)
    ]


def super_arm_estimates(super_arms: Sequence[SuperArm], beliefs: Sequence[ArmBelief]) -> List[float]:
    """μ̂_{B_k} = média das estimativas dos membros reais de cada super-braço."""
    num_real = len(beliefs)
    values = []
    for sa in super_arms:
        members = sa.real_members(num_real)
        sa.mu_hat_B = float(np.mean([beliefs[i].mu_hat for i in members])) if members else 0.0
        values.append(sa.mu_hat_B)
    return values


def ge_identify(super_arms: Sequence[SuperArm], ge_means: Sequence[float], beliefs: Sequence[ArmBelief],
                delta: float, statistic_scale: str = 'mean') -> Optional[int]:
    """
    Monta a assinatura binária (bit k = 1 sse o desvio de B_k atinge 2δ) e retorna o braço
    com esse código. Assinatura nula retorna o braço 0; código de braço fictício retorna None.
    """
    num_real = len(beliefs)
    estimates = super_arm_estimates(super_arms, beliefs)
    code = 0
    for sa, estimate, observed in zip(super_arms, estimates, ge_means):
        size = len(sa.real_members(num_real))
        scale = size if statistic_scale == 'group_sum' else 1
        if DetectionStat(value=abs(estimate - observed) * scale, threshold=2.0 * delta).fired:
            code |= 1 << (sa.bit_index - 1)
    return code if code < num_real else None


def nearest_prior_source(mu_hats: Sequence[float], changed_arm: int) -> Optional[int]:
    """argmin_{i != j} |μ̂_i - μ̂_j| (empate: menor índice); None se não há outro braço."""
    values = np.asarray(mu_hats, dtype=float)
    if values.size <= 1:
        return None
    distances = np.abs(values - values[changed_arm])
    distances[changed_arm] = np.inf
    return int(np.argmin(distances))


def repair_changed_arm(beliefs: List[ArmBelief], changed_arm: int, super_arms: Sequence[SuperArm],
                       ge_means: Sequence[float], bp_mean: Optional[float] = None,
                       ge_plays: int = 1, bp_plays: int = 1) -> List[ArmBelief]:
    """
    Reestima o braço alterado j e copia a priori do braço de média mais próxima.

    Para cada B_k que contém j: μ_j^(k) = |B_k| · (média GE de B_k) - Σ_{i∈B_k, i≠j} μ̂_i;
    μ̂_j é a média dessas estimativas. Se j não pertence a nenhum super-braço (código 0),
    a média da BP faz o mesmo papel com todos os braços. A contagem de amostras de j passa
    a ser a das jogadas que sustentam a nova estimativa.

    Raises:
        ArgumentError: j fora do intervalo ou sem dados para a reestimação.
    """
    num_real = len(beliefs)
    if not 0 <= changed_arm < num_real:
        raise ArgumentError(f"Braço alterado {changed_arm} fora do intervalo [0, {num_real}).")

    estimates = []
    for sa, observed in zip(super_arms, ge_means):
        members = sa.real_members(num_real)
        if changed_arm in members:
            others = sum(beliefs[i].mu_hat for i in members if i != changed_arm)
            estimates.append(len(members) * observed - others)

    target = beliefs[changed_arm]
    if estimates:
        target.mu_hat = float(np.mean(estimates))
        target.pull_count = max(1, ge_plays * len(estimates))
    elif bp_mean is not None:
        others = sum(b.mu_hat for i, b in enumerate(beliefs) if i != changed_arm)
        target.mu_hat = float(num_real * bp_mean - others)
        target.pull_count = max(1, bp_plays)
    else:
        raise ArgumentError(f"Sem observações para reestimar o braço {changed_arm}.")

    source = nearest_prior_source([b.mu_hat for b in beliefs], changed_arm)
    if source is not None:
        target.alpha, target.beta = beliefs[source].alpha, beliefs[source].beta
    return beliefs

# ============================================================================
# Agente
# ============================================================================

class TsgeAgent:
    """Agente TS-GE (ETC + episódios TS/BP com GE condicional)."""

    name = 'tsge'

    def __init__(self, cfg: TsgeConfig):
        self.cfg = cfg
        # Obtido aqui para que o handler CSV da replicação em curso seja anexado
        self.logger = get_logger(__name__)
        self.rng = np.random.default_rng(int(cfg.seed))
        self.schedule = phase_lengths(cfg.horizon, cfg.num_arms, cfg.delta, cfg.loc_fail_prob, cfg.n_ge)
        self.super_arms = construct_super_arms(1 << self.schedule.d)
        self.beliefs: List[ArmBelief] = [ArmBelief() for _ in range(cfg.num_arms)]
        self.phase_state = PhaseState()
        self.recorder = TraceRecorder()
        self.episodes: List[EpisodeReport] = []
        self.max_sampling_age = 0
        self._all_arms = tuple(range(cfg.num_arms))
        self._arm_sets = tuple((i,) for i in range(cfg.num_arms))
        self._arm_labels = tuple(f'arm:{i}' for i in range(cfg.num_arms))
        self._super_sets = [sa.real_members(cfg.num_arms) for sa in self.super_arms]

    # ------------------------------------------------------------------
    # Jogadas
    # ------------------------------------------------------------------

    def _play_arm(self, env: BanditEnv, arm: int, phase: Phase) -> PullOutcome:
        outcome = env.pull(arm)
        self.recorder.record(outcome.slot, phase, self._arm_labels[arm], self._arm_sets[arm], outcome.reward)
        self.phase_state.slot_in_phase += 1
        return outcome

    def _play_set(self, env: BanditEnv, arms: tuple, phase: Phase, label: str) -> PullOutcome:
        outcome = env.pull_set(arms)
        self.recorder.record(outcome.slot, phase, label, arms, outcome.reward)
        self.phase_state.slot_in_phase += 1
        return outcome

    def sampling_age(self, slot: int) -> np.ndarray:
        """Idade de amostragem de cada braço no slot informado."""
        return slot - np.array([b.last_probed_slot for b in self.beliefs], dtype=np.int64)

    def _track_age(self, slot: int) -> None:
        self.max_sampling_age = max(self.max_sampling_age, int(self.sampling_age(slot).max()))

    # ------------------------------------------------------------------
    # Fases
    # ------------------------------------------------------------------

    def run_etc(self, env: BanditEnv, horizon: int) -> None:
        """Joga cada braço n_ETC vezes em rodízio, sem tocar nas prioris."""
        self.phase_state.enter(Phase.ETC)
        for _ in range(self.schedule.n_ETC):
            for arm in self._all_arms:
                if env.t >= horizon:
                    self.logger.warning(f"Horizonte {horizon} esgotado durante o ETC.")
                    return
                outcome = self._play_arm(env, arm, Phase.ETC)
                self.beliefs[arm].observe(outcome.reward, outcome.slot)
        self.logger.info(
            f"ETC concluído em {env.t} slots (n_ETC={self.schedule.n_ETC}); "
            f"médias estimadas: {[round(b.mu_hat, 4) for b in self.beliefs]}",
            extra={'slot': env.t, 'phase': Phase.ETC.value},
        )

    def ts_step(self, env: BanditEnv) -> PullOutcome:
        """Um slot da fase TS."""
        arm = ts_select(self.beliefs, self.rng)
        outcome = self._play_arm(env, arm, Phase.TS)
        ts_update(self.beliefs[arm], outcome, self.rng, self.cfg.update_rule)
        return outcome

    def _run_group_exploration(self, env: BanditEnv, horizon: int, report: EpisodeReport, bp_mean: float) -> None:
        self.phase_state.enter(Phase.GE)
        n_ge = self.schedule.n_ge
        self.phase_state.ge_accumulators = [0.0] * len(self._super_sets)
        for idx, members in enumerate(self._super_sets):
            label = f'super:{idx + 1}'
            for _ in range(n_ge):
                if env.t >= horizon:
                    self.logger.info("Horizonte esgotado durante a GE; identificação descartada.")
                    return
                outcome = self._play_set(env, members, Phase.GE, label)
                self.phase_state.ge_accumulators[idx] += outcome.reward
                report.ge_slots += 1
            for arm in members:
                self.beliefs[arm].last_probed_slot = env.t - 1

        report.ge_means = [total / n_ge for total in self.phase_state.ge_accumulators]
        changed = ge_identify(self.super_arms, report.ge_means, self.beliefs,
                              self.cfg.delta, self.cfg.statistic_scale)
        report.identified_arm = changed
        if changed is None:
            self.logger.warning(f"Episódio {report.episode}: assinatura GE aponta para braço fictício; nada reparado.")
            return
        before = self.beliefs[changed].mu_hat
        repair_changed_arm(self.beliefs, changed, self.super_arms, report.ge_means, bp_mean,
                           ge_plays=n_ge, bp_plays=report.bp_slots)
        self.logger.info(
            f"Episódio {report.episode}: braço {changed} identificado; μ̂ {before:.4f} -> {self.beliefs[changed].mu_hat:.4f}",
            extra={'slot': env.t, 'phase': Phase.GE.value},
        )

    def run_episode(self, env: BanditEnv, horizon: Optional[int] = None) -> EpisodeReport:
        """
        Executa um episódio: T_TS slots de TS, T_BP slots de BP e, se o teste
        disparar, a GE com reparo do braço identificado. O episódio é truncado
        no horizonte.
        """
        horizon = env.horizon if horizon is None else horizon
        report = EpisodeReport(episode=len(self.episodes), start_slot=env.t)
        self.phase_state.episode_index = report.episode
        env.begin_episode(report.episode)

        self.phase_state.enter(Phase.TS)
        for _ in range(self.schedule.T_TS):
            if env.t >= horizon:
                break
            self.ts_step(env)
            report.ts_slots += 1

        if env.t < horizon:
            self._track_age(env.t)
        self.phase_state.enter(Phase.BP)
        for _ in range(self.schedule.T_BP):
            if env.t >= horizon:
                break
            outcome = self._play_set(env, self._all_arms, Phase.BP, 'broadcast')
            self.phase_state.bp_accumulator += outcome.reward
            report.bp_slots += 1
        if report.bp_slots:
            for belief in self.beliefs:
                belief.last_probed_slot = env.t - 1

        if report.bp_slots == self.schedule.T_BP:
            report.bp_mean = self.phase_state.bp_accumulator / self.schedule.T_BP
            stat = bp_statistic(self.beliefs, report.bp_mean, self.cfg.delta, self.cfg.statistic_scale)
            report.bp_statistic = stat.value
            if stat.fired:
                report.detected = True
                self.logger.info(
                    f"Episódio {report.episode}: mudança detectada (estatística {stat.value:.4f} >= {stat.threshold:.4f}).",
                    extra={'slot': env.t, 'phase': Phase.BP.value},
                )
                self._run_group_exploration(env, horizon, report, report.bp_mean)

        report.end_slot = env.t
        self.episodes.append(report)
        self.logger.debug(f"Episódio {report.episode} encerrado: {report.as_row()}")
        return report

    # ------------------------------------------------------------------
    # Execução completa
    # ------------------------------------------------------------------

    def run(self, env: BanditEnv, horizon: Optional[int] = None) -> AgentRun:
        """
        ETC seguido de episódios até o horizonte.

        Raises:
            ArgumentError: Ambiente já utilizado ou com número de braços reais diferente.
        """
        if env.num_real_arms != self.cfg.num_arms:
            raise ArgumentError(f"Agente configurado para {self.cfg.num_arms} braços; ambiente tem {env.num_real_arms}.")
        if env.t != 0:
            raise ArgumentError("O ambiente já foi utilizado; crie um novo para cada execução.")
        horizon = env.horizon if horizon is None else int(horizon)

        self.run_etc(env, horizon)
        while env.t < horizon:
            self.run_episode(env, horizon)
        if self.episodes:
            self._track_age(env.t)

        change_log = env.export_change_log()
        trace = annotate_regret(self.recorder.to_frame(), change_log, env.cfg.initial_means)
        episodes = self._episode_frame(change_log)
        detections = int(episodes['detected'].sum()) if len(episodes) else 0
        self.logger.info(
            f"Execução TS-GE concluída: {len(trace)} slots, {len(self.episodes)} episódios, "
            f"{detections} detecções, arrependimento final {trace['cumulative_regret'].iloc[-1] if len(trace) else 0.0:.2f}."
        )
        return AgentRun(
            agent=self.name, trace=trace, episodes=episodes,
            max_sampling_age=self.max_sampling_age,
            extra={'schedule': self.schedule.as_dict(), 'detections': detections},
        )

    def _episode_frame(self, change_log: pd.DataFrame) -> pd.DataFrame:
        slots = change_log['slot'].to_numpy() if len(change_log) else np.array([], dtype=np.int64)
        arms = change_log['arm'].to_numpy() if len(change_log) else np.array([], dtype=np.int64)
        for report in self.episodes:
            inside = np.nonzero((slots >= report.start_slot) & (slots < report.end_slot))[0]
            report.true_changed_arm = int(arms[inside[0]]) if inside.size else None
        return pd.DataFrame([r.as_row() for r in self.episodes], columns=EPISODE_COLUMNS)

# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'TsgeConfig', 'PhaseSchedule', 'TsgeAgent', 'UPDATE_RULES',
    'code_width', 'etc_length', 'phase_lengths', 'ts_select', 'ts_update',
    'bp_statistic', 'bp_detect', 'construct_super_arms', 'super_arm_estimates',
    'ge_identify', 'nearest_prior_source', 'repair_changed_arm',
]

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    from agents.bandit_env import EnvConfig

    print("\n=== Testando o agente TS-GE ===")
    horizon = 20_000
    agent_cfg = TsgeConfig(horizon=horizon, num_arms=8, sigma=0.1, delta=0.025, loc_fail_prob=0.05, seed=1)
    schedule = phase_lengths(horizon, 8, agent_cfg.delta, agent_cfg.loc_fail_prob)
    env = BanditEnv(EnvConfig(num_arms=8, sigma=0.1, horizon=horizon, change_start_slot=schedule.T_ETC,
                              forced_changes=[{'episode': 5, 'arm': 3, 'delta': 0.4}], rng_seed=1))
    result = TsgeAgent(agent_cfg).run(env)
    print(f"Cronograma: {schedule}")
    print(f"Arrependimento final: {result.final_regret:.2f}; idade máxima: {result.max_sampling_age}")
    print(result.episodes[result.episodes['detected']])
