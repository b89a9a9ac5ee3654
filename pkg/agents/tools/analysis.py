"""
Análise em Forma Fechada
------------------------
Avaliadores das probabilidades e dos limites de arrependimento do TS-GE:

- Função Q (cauda Gaussiana) e sua inversa.
- Desvio padrão da estatística sem mudança, probabilidade de falso alarme.
- Probabilidades de detecção perdida para mudanças na fase TS e na fase BP
  (classificação nos quatro casos da fronteira t⁻ ≤ T_BP(|Δ| - 4δ)/|Δ|).
- Limites de arrependimento do TS-GE e do competidor √(N_C K t log t),
  pontos de cruzamento T1/T2/T3 e decomposição do arrependimento.

Todas as funções são puras. Os limites assintóticos usam constante 1 e
logaritmo natural (exceto log2 K no termo de exploração em grupo).
"""

# ============================================================================
# Imports
# ============================================================================

import math
import os
import sys
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import optimize, special

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError, DomainError

# ============================================================================
# Configuração do Logger
# ============================================================================

logger = get_logger(__name__)

# ============================================================================
# Configurações e Constantes
# ============================================================================

VARIANCE_FORMS = ('per_group', 'per_arm')
STATISTIC_SCALES = ('group_sum', 'mean')

ArrayLike = Union[float, Sequence[float], np.ndarray]

# ============================================================================
# Tipos
# ============================================================================

@dataclass
class BoundParams:
    """
    Parâmetros dos limites.

    `variance_form` escolhe a variância da estatística Z' das mudanças:
    'per_group' usa σ²/K² e 'per_arm' usa σ²/K.
    """
    num_arms: int
    horizon: int
    num_changes: int = 0
    sigma: float = 0.1
    delta: float = 0.05
    n_etc: int = 100
    t_bp: int = 100
    t_ts: int = 216
    delta_max: float = 0.4
    delta_change: float = 0.2
    p_c: float = 0.0
    variance_form: str = 'per_group'

    def __post_init__(self):
        for name in ('num_arms', 'horizon', 'n_etc', 't_bp', 't_ts'):
            if getattr(self, name) <= 0:
                raise ArgumentError(f"{name} deve ser positivo (recebido {getattr(self, name)}).")
        if self.sigma <= 0 or self.delta <= 0:
            raise ArgumentError("sigma e delta devem ser positivos.")
        if self.num_changes < 0:
            raise ArgumentError("num_changes deve ser não negativo.")
        if self.num_changes > math.sqrt(self.horizon):
            raise ArgumentError(f"N_C={self.num_changes} excede sqrt(T)={math.sqrt(self.horizon):.1f}.")
        if self.variance_form not in VARIANCE_FORMS:
            raise ArgumentError(f"variance_form deve ser um de {VARIANCE_FORMS}.")

    @property
    def episode_len(self) -> int:
        return self.t_ts + self.t_bp


@dataclass
class BoundCurve:
    """Limite (ou arrependimento empírico) avaliado sobre uma grade crescente de slots."""
    grid: np.ndarray
    values: np.ndarray
    label: str

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t': self.grid, self.label: self.values})


class BpMissedDetection(NamedTuple):
    """Caso da fronteira (case1..case4) e a probabilidade de detecção perdida.

    Nos casos 2/4 a probabilidade é o limite inferior 1 - 1/T (regime 'alto').
    """
    case_label: str
    probability: float


@dataclass
class CrossingPoints:
    T1: float
    T2: Optional[float]
    T3: Optional[float]
    roots: List[float] = field(default_factory=list)
    sign_pattern: List[str] = field(default_factory=list)
    upward_crossing: Optional[float] = None

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RegretDecomposition:
    etc_term: float
    no_change_term: float
    false_alarm_term: float
    change_term: float
    missed_detection_term: float
    p_false_alarm: float
    p_missed: float
    num_episodes: int
    total: float

# ============================================================================
# Função Q
# ============================================================================

def q_function(x: ArrayLike) -> Union[float, np.ndarray]:
    """Q(x) = P(N(0,1) > x) = erfc(x/√2)/2."""
    value = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(value) if np.ndim(value) == 0 else value


def q_function_inv(p: ArrayLike) -> Union[float, np.ndarray]:
    """Inversa de Q: x tal que Q(x) = p, para p em (0, 1)."""
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr <= 0) | (p_arr >= 1)):
        raise ArgumentError("q_function_inv exige p em (0, 1).")
    value = math.sqrt(2.0) * special.erfcinv(2.0 * p_arr)
    return float(value) if np.ndim(value) == 0 else value

# ============================================================================
# Estatísticas de Teste
# ============================================================================

def sigma_nc(params: BoundParams, m: int, per_arm_counts: Sequence[float]) -> float:
    """
    σ_NC = sqrt((σ²/K)(1/n_ETC + 1/(m T_BP) + Σ_j 1/n_j)).

    Raises:
        ArgumentError: Contagem nula ou negativa.
    """
    counts = np.asarray(per_arm_counts, dtype=float)
    if m <= 0 or counts.size == 0 or np.any(counts <= 0):
        raise ArgumentError("sigma_nc exige m > 0 e contagens positivas.")
    variance = (params.sigma ** 2 / params.num_arms) * (
        1.0 / params.n_etc + 1.0 / (m * params.t_bp) + float(np.sum(1.0 / counts))
    )
    return math.sqrt(variance)


def detection_sigma(params: BoundParams, per_arm_counts: Sequence[float], statistic_scale: str = 'mean') -> float:
    """Desvio padrão da estatística do teste por episódio (m = 1), na escala usada pelo agente."""
    if statistic_scale not in STATISTIC_SCALES:
        raise ArgumentError(f"statistic_scale deve ser um de {STATISTIC_SCALES}.")
    base = sigma_nc(params, 1, per_arm_counts)
    return base * params.num_arms if statistic_scale == 'group_sum' else base


def p_false_alarm(params: BoundParams, sigma_nc_value: float, two_sided: bool = False) -> float:
    """
    P_FA <= Q(4δ/σ_NC); com two_sided=True retorna min(1, 2Q(4δ/σ_NC)).
    """
    if sigma_nc_value <= 0:
        raise ArgumentError("σ_NC deve ser positivo.")
    value = q_function(4.0 * params.delta / sigma_nc_value)
    return min(1.0, 2.0 * value) if two_sided else value


def _z_prime_sigma(params: BoundParams, samples_after: float) -> float:
    if samples_after <= 0:
        raise ArgumentError("t⁻ + t⁺ deve ser positivo.")
    spread = math.sqrt(1.0 / params.n_etc + 1.0 / samples_after + 1.0 / params.t_bp)
    if params.variance_form == 'per_group':
        return params.sigma / params.num_arms * spread
    return params.sigma / math.sqrt(params.num_arms) * spread


def p_missed_ts(params: BoundParams, t_minus: int, t_plus: int) -> float:
    """
    Detecção perdida de uma mudança na fase TS: Q((|Δ| - 2δ)/σ_Z').

    Raises:
        DomainError: |Δ| < 2δ (limite vazio).
    """
    magnitude = abs(params.delta_change)
    if magnitude < 2.0 * params.delta - 1e-12:
        raise DomainError(f"|Δ|={magnitude} < 2δ={2 * params.delta}: limite vazio.")
    if t_minus < 0 or t_plus < 0:
        raise ArgumentError("t⁻ e t⁺ devem ser não negativos.")
    numerator = max(0.0, magnitude - 2.0 * params.delta)
    return q_function(numerator / _z_prime_sigma(params, t_minus + t_plus))


def bp_case_boundary(params: BoundParams) -> float:
    """Maior t⁻ do caso de detecção provável: T_BP(|Δ| - 4δ)/|Δ| (negativo se |Δ| <= 4δ)."""
    magnitude = abs(params.delta_change)
    if magnitude == 0:
        return -float('inf')
    return params.t_bp * (magnitude - 4.0 * params.delta) / magnitude


def p_missed_bp(params: BoundParams, t_minus: int, t_plus: int) -> BpMissedDetection:
    """
    Classifica uma mudança na fase BP e retorna a probabilidade de detecção perdida.

    Casos 1/3 (Δ > 0 / Δ < 0): |Δ| > 4δ e t⁻|Δ| <= T_BP(|Δ| - 4δ), fronteira inclusiva;
    probabilidade Q((t⁺|Δ|/T_BP - 4δ)/σ_Z'). Casos 2/4: demais, probabilidade 1 - 1/T.

    Raises:
        ArgumentError: t⁻ + t⁺ diferente de T_BP.
    """
    if t_minus < 0 or t_plus < 0 or t_minus + t_plus != params.t_bp:
        raise ArgumentError(f"t⁻ + t⁺ deve ser T_BP={params.t_bp} (recebido {t_minus} + {t_plus}).")
    magnitude = abs(params.delta_change)
    threshold = 4.0 * params.delta
    positive = params.delta_change >= 0
    likely_detected = (
        magnitude > threshold
        and t_minus * magnitude <= params.t_bp * (magnitude - threshold) + 1e-12 * params.t_bp
    )
    if likely_detected:
        deviation = t_plus * magnitude / params.t_bp - threshold
        probability = q_function(max(0.0, deviation) / _z_prime_sigma(params, params.t_bp))
        return BpMissedDetection('case1' if positive else 'case3', probability)
    return BpMissedDetection('case2' if positive else 'case4', 1.0 - 1.0 / params.horizon)

# ============================================================================
# Limites de Arrependimento
# ============================================================================

def regret_bound_tsge(params: BoundParams, t: ArrayLike) -> Union[float, np.ndarray]:
    """K log t + √t · max{N_C(1 + log2 K), t^(2/5)}."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 1):
        raise ArgumentError("regret_bound_tsge exige t >= 1.")
    group_term = params.num_changes * (1.0 + math.log2(params.num_arms))
    value = params.num_arms * np.log(t_arr) + np.sqrt(t_arr) * np.maximum(group_term, t_arr ** 0.4)
    return float(value) if np.ndim(value) == 0 else value


def regret_bound_competitor(params: BoundParams, t: ArrayLike) -> Union[float, np.ndarray]:
    """√(N_C K t log t)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 1):
        raise ArgumentError("regret_bound_competitor exige t >= 1.")
    value = np.sqrt(params.num_changes * params.num_arms * t_arr * np.log(t_arr))
    return float(value) if np.ndim(value) == 0 else value


def log_grid(t_min: int, t_max: int, points: int) -> np.ndarray:
    """Grade inteira crescente, espaçada logaritmicamente, de t_min a t_max (inclusivos)."""
    if not 1 <= t_min <= t_max or points < 2:
        raise ArgumentError("log_grid exige 1 <= t_min <= t_max e points >= 2.")
    grid = np.unique(np.round(np.geomspace(t_min, t_max, points)).astype(np.int64))
    return grid


def bound_curves(params: BoundParams, grid: ArrayLike) -> pd.DataFrame:
    """Tabela (t, tsge_bound, competitor_bound) sobre a grade."""
    t = np.asarray(grid, dtype=float)
    return pd.DataFrame({
        't': np.asarray(grid),
        'tsge_bound': regret_bound_tsge(params, t),
        'competitor_bound': regret_bound_competitor(params, t),
    })


def crossing_points(params: BoundParams, t_max: float, scan_points: int = 4000) -> CrossingPoints:
    """
    T1 = (N_C(1 + log2 K))^(5/2) em forma fechada; T2 <= T3 são as raízes de
    regret_bound_tsge - regret_bound_competitor em [2, t_max], localizadas por
    varredura de sinal e refinadas por bisseção (brentq). Raízes ausentes
    retornam None.
    """
    if t_max < 2:
        raise ArgumentError("crossing_points exige t_max >= 2.")
    t1 = (params.num_changes * (1.0 + math.log2(params.num_arms))) ** 2.5

    def difference(t: float) -> float:
        return regret_bound_tsge(params, t) - regret_bound_competitor(params, t)

    grid = np.geomspace(2.0, float(t_max), scan_points)
    values = regret_bound_tsge(params, grid) - regret_bound_competitor(params, grid)
    signs = np.sign(values)
    roots: List[float] = []
    upward: Optional[float] = None
    for i in range(len(grid) - 1):
        if signs[i] == 0:
            root = float(grid[i])
        elif signs[i] * signs[i + 1] < 0:
            root = float(optimize.brentq(difference, grid[i], grid[i + 1], xtol=1e-12, rtol=4 * np.finfo(float).eps))
        else:
            continue
        if roots and abs(root - roots[-1]) <= 1e-9 * root:
            continue
        roots.append(root)
        if upward is None and signs[i + 1] > 0:
            upward = root

    pattern: List[str] = []
    for s in signs:
        label = '+' if s > 0 else '-' if s < 0 else None
        if label and (not pattern or pattern[-1] != label):
            pattern.append(label)

    result = CrossingPoints(
        T1=t1,
        T2=roots[0] if roots else None,
        T3=roots[1] if len(roots) > 1 else None,
        roots=roots,
        sign_pattern=pattern,
        upward_crossing=upward,
    )
    logger.debug(f"Cruzamentos para K={params.num_arms}, N_C={params.num_changes}: {result}")
    return result

# ============================================================================
# Decomposição do Arrependimento
# ============================================================================

def average_p_missed_bp(params: BoundParams) -> float:
    """Média de p_missed_bp sobre t⁻ = 0..T_BP-1 (mudança uniforme dentro da fase BP)."""
    values = [p_missed_bp(params, t_minus, params.t_bp - t_minus).probability for t_minus in range(params.t_bp)]
    return float(np.mean(values))


def regret_decomposition(params: BoundParams, p_fa: Optional[float] = None,
                         p_m_ts: Optional[float] = None, p_m_bp: Optional[float] = None) -> RegretDecomposition:
    """
    Soma dos termos do arrependimento:

    - ETC: K log T
    - episódio sem mudança: log(T_TS) + T_BP, mais K1 = P_FA Δ_max T
    - episódio com mudança: Δ_max √T, mais K2 = P_M Δ_max T,
      P_M = p_C^TS P_M^TS + p_C^BP P_M^BP com p_C^TS = T_TS/T_l e p_C^BP = T_BP/T_l

    As probabilidades ausentes são avaliadas com as contagens do ETC.
    """
    K, T = params.num_arms, params.horizon
    if p_fa is None:
        p_fa = p_false_alarm(params, sigma_nc(params, 1, [params.n_etc] * K))
    if p_m_ts is None:
        p_m_ts = p_missed_ts(params, 0, params.t_ts)
    if p_m_bp is None:
        p_m_bp = average_p_missed_bp(params)
    t_l = params.episode_len
    p_m = (params.t_ts / t_l) * p_m_ts + (params.t_bp / t_l) * p_m_bp
    num_episodes = T // t_l

    etc_term = K * math.log(T)
    no_change = math.log(params.t_ts) + params.t_bp
    k1 = p_fa * params.delta_max * T
    change = params.delta_max * math.sqrt(T)
    k2 = p_m * params.delta_max * T
    total = etc_term + max(0, num_episodes - params.num_changes) * (no_change + k1) + params.num_changes * (change + k2)
    return RegretDecomposition(
        etc_term=etc_term, no_change_term=no_change, false_alarm_term=k1,
        change_term=change, missed_detection_term=k2,
        p_false_alarm=p_fa, p_missed=p_m, num_episodes=num_episodes, total=total,
    )

# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'BoundParams', 'BoundCurve', 'BpMissedDetection', 'CrossingPoints', 'RegretDecomposition',
    'q_function', 'q_function_inv', 'sigma_nc', 'detection_sigma', 'p_false_alarm',
    'p_missed_ts', 'p_missed_bp', 'bp_case_boundary', 'average_p_missed_bp',
    'regret_bound_tsge', 'regret_bound_competitor', 'log_grid', 'bound_curves',
    'crossing_points', 'regret_decomposition',
]

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    print("\n=== Limites para K em {100, 500, 1000} ===")
    for k in (100, 500, 1000):
        params = BoundParams(num_arms=k, horizon=100_000, num_changes=10)
        print(f"K={k}: {crossing_points(params, 100_000).as_dict()}")
    desk = BoundParams(num_arms=8, horizon=100_000)
    print(f"σ_NC (contagens 100): {sigma_nc(desk, 1, [100] * 8):.5f}")
    print(f"Caso BP t⁻=10, Δ=0.5: {p_missed_bp(BoundParams(num_arms=8, horizon=100_000, delta_change=0.5), 10, 90)}")
