"""
Geometria Estocástica para SWIPT
--------------------------------
Oráculo do estudo de caso IIoT: K_dev dispositivos uniformes no disco
ℬ(0, R) (processo binomial de pontos), cada enlace de comprimento r em
visada direta (LOS) com probabilidade exp(-ωr).

- Probabilidades B_L (todos os enlaces LOS) e B_N (todos NLOS) por
  quadratura da integral interna ∫_0^R exp(-ωt) 2t/R² dt.
- CCDFs da distância ao dispositivo LOS/NLOS mais próximo pela soma
  binomial das probabilidades de vazio.
- Probabilidade de o melhor enlace ser LOS e taxa esperada do melhor
  enlace, ambas sobre a distância efetiva s (s = r em LOS e
  s = r^(γ_N/γ_L) em NLOS, de modo que a potência é κ P_t s^(-γ_L)).
- Potência recebida com limite de campo próximo (ganho de percurso <= 1),
  vazão da rede e energia colhida por dispositivo.
- Estimadores de Monte Carlo vetorizados usados como oráculo independente.

Formas alternativas de B_L e das CCDFs (série geométrica e a integral
com ωR² no expoente) também são expostas (`los_closed_form_inner`, `*_ccdf_closed_form`) para
o relatório de discrepância; elas não são usadas nos cálculos.
"""

# ============================================================================
# Imports
# ============================================================================

import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, special, stats

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

QUAD_LIMIT = 200

# Acima deste z, e^{z} E_1(z) vem da série assintótica (e^{z} estoura em float64)
ASYMPTOTIC_EXP1_FROM = 500.0

ArrayLike = Union[float, Sequence[float], np.ndarray]

# ============================================================================
# Tipos
# ============================================================================

@dataclass
class SwiptScenario:
    """
    Parâmetros da rede (valores padrão de bancada).

    Attributes:
        radius (float): R em metros.
        tx_power (float): P_t em watts.
        blockage_rate (float): ω em 1/metro.
        pathloss_coeff (float): κ (coeficiente de perda de percurso).
        gamma_los (float): Expoente de perda em LOS.
        gamma_nlos (float): Expoente de perda em NLOS.
        bandwidth (float): B_w em hertz.
        noise (float): N_0 em watts.
        harvest_efficiency (float): θ_e em [0, 1].
        num_devices (int): K_dev.
        slot_seconds (float): Duração de um slot.
        duration_seconds (float): Duração total da simulação.
        flip_period_seconds (float): Intervalo entre trocas de visibilidade.
    """
    radius: float = 50.0
    tx_power: float = 1.0
    blockage_rate: float = 0.02
    pathloss_coeff: float = 1e-3
    gamma_los: float = 2.1
    gamma_nlos: float = 3.4
    bandwidth: float = 10e6
    noise: float = 1e-13
    harvest_efficiency: float = 0.5
    num_devices: int = 10
    slot_seconds: float = 0.01
    duration_seconds: float = 1000.0
    flip_period_seconds: float = 30.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ArgumentError(f"O raio deve ser positivo (recebido {self.radius}).")
        if self.blockage_rate <= 0:
            raise ArgumentError(f"ω deve ser positivo (recebido {self.blockage_rate}).")
        if self.gamma_los <= 0 or self.gamma_nlos < self.gamma_los:
            raise ArgumentError(f"Expoentes inválidos: γ_L={self.gamma_los}, γ_N={self.gamma_nlos} (exige γ_N >= γ_L > 0).")
        if not 0.0 <= self.harvest_efficiency <= 1.0:
            raise ArgumentError(f"θ_e deve estar em [0, 1] (recebido {self.harvest_efficiency}).")
        if int(self.num_devices) < 1:
            raise ArgumentError(f"num_devices deve ser >= 1 (recebido {self.num_devices}).")
        self.num_devices = int(self.num_devices)
        if self.tx_power < 0 or self.pathloss_coeff <= 0 or self.bandwidth <= 0 or self.noise <= 0:
            raise ArgumentError("tx_power, pathloss_coeff, bandwidth e noise devem ser positivos.")
        if self.slot_seconds <= 0 or self.duration_seconds < self.slot_seconds:
            raise ArgumentError("Durações de slot/simulação inválidas.")

    @property
    def exponent_ratio(self) -> float:
        """γ_N / γ_L."""
        return self.gamma_nlos / self.gamma_los

    @property
    def horizon_slots(self) -> int:
        return int(round(self.duration_seconds / self.slot_seconds))

    @property
    def flip_period_slots(self) -> int:
        return max(1, int(round(self.flip_period_seconds / self.slot_seconds)))

    @property
    def peak_power(self) -> float:
        """κ P_t: potência recebida máxima (ganho de percurso limitado a 1)."""
        return self.pathloss_coeff * self.tx_power

    @classmethod
    def from_dict(cls, section: Dict[str, Any], **overrides: Any) -> 'SwiptScenario':
        merged = {**(section or {}), **overrides}
        return cls(**{k: v for k, v in merged.items() if k in cls.__dataclass_fields__ and v is not None})


@dataclass
class DeviceRealization:
    """Uma realização do processo: posições, distâncias, visibilidade e desvanecimento."""
    positions: np.ndarray
    distances: np.ndarray
    los_flags: np.ndarray
    fading: np.ndarray

    def effective_distances(self, scenario: SwiptScenario) -> np.ndarray:
        return np.where(self.los_flags, self.distances, self.distances ** scenario.exponent_ratio)


class HarvestedEnergy(NamedTuple):
    per_device: np.ndarray
    total: float

# ============================================================================
# Integrais de Visibilidade
# ============================================================================

def _los_mass(scenario: SwiptScenario, u: ArrayLike) -> np.ndarray:
    """G(u) = ∫_0^u exp(-ωt) 2t/R² dt = 2 P(2, ωu) / (ω² R²), com P a gama incompleta regularizada."""
    omega, radius = scenario.blockage_rate, scenario.radius
    u = np.asarray(u, dtype=float)
    return 2.0 * special.gammainc(2.0, omega * u) / (omega * omega * radius * radius)


def los_inner_integral(scenario: SwiptScenario) -> float:
    """∫_0^R exp(-ωt) 2t/R² dt por quadratura."""
    omega, radius = scenario.blockage_rate, scenario.radius
    value, _ = integrate.quad(lambda t: math.exp(-omega * t) * 2.0 * t / radius ** 2, 0.0, radius, limit=QUAD_LIMIT)
    return float(value)


def los_inner_exact(scenario: SwiptScenario) -> float:
    """Antiderivada da integral interna: 2(1 - e^{-ωR}(ωR + 1)) / (ω² R²)."""
    return float(_los_mass(scenario, scenario.radius))


def los_closed_form_inner(scenario: SwiptScenario) -> float:
    """Forma alternativa com ωR² no expoente: 2(1 - exp(-ωR²)(ωR² + 1)) / (ω² R²)."""
    omega, radius = scenario.blockage_rate, scenario.radius
    w = omega * radius * radius
    return float(2.0 * (1.0 - math.exp(-w) * (w + 1.0)) / (omega * omega * radius * radius))


def prob_any_los(scenario: SwiptScenario) -> float:
    """B_L = [∫_0^R exp(-ωt) 2t/R² dt]^K_dev (todos os dispositivos em LOS)."""
    return los_inner_integral(scenario) ** scenario.num_devices


def prob_any_nlos(scenario: SwiptScenario) -> float:
    """B_N = [1 - ∫_0^R exp(-ωt) 2t/R² dt]^K_dev (todos os dispositivos em NLOS)."""
    return (1.0 - los_inner_integral(scenario)) ** scenario.num_devices

# ============================================================================
# Distância ao Dispositivo Mais Próximo
# ============================================================================

def _check_inside(scenario: SwiptScenario, x: ArrayLike) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if np.any(values <= 0.0) or np.any(values >= scenario.radius):
        raise ArgumentError(f"x deve estar em (0, R={scenario.radius}).")
    return values


def _nearest_ccdf(scenario: SwiptScenario, x: ArrayLike, los: bool) -> Union[float, np.ndarray]:
    values = _check_inside(scenario, x)
    k_dev = scenario.num_devices
    p_inside = values ** 2 / scenario.radius ** 2
    # Probabilidade condicional de LOS para um dispositivo dentro do disco de raio x
    los_given_inside = _los_mass(scenario, values) / p_inside
    miss = 1.0 - los_given_inside if los else los_given_inside
    k = np.arange(k_dev + 1).reshape((-1,) + (1,) * values.ndim)
    terms = stats.binom.pmf(k, k_dev, p_inside) * np.power(miss, k)
    result = terms.sum(axis=0)
    return float(result) if np.ndim(result) == 0 else result


def nearest_los_ccdf(scenario: SwiptScenario, x: ArrayLike) -> Union[float, np.ndarray]:
    """
    ℙ(r_L1 >= x): nenhum dos dispositivos dentro do disco de raio x está em LOS.

    Soma binomial sobre o número k de dispositivos dentro de x, cada um
    NLOS com probabilidade 1 - a(x), a(x) = ∫_0^x exp(-ωt) 2t/x² dt.

    Raises:
        ArgumentError: x fora de (0, R).
    """
    return _nearest_ccdf(scenario, x, los=True)


def nearest_nlos_ccdf(scenario: SwiptScenario, x: ArrayLike) -> Union[float, np.ndarray]:
    """ℙ(r_N1 >= x): todos os dispositivos dentro de x estão em LOS."""
    return _nearest_ccdf(scenario, x, los=False)


def _displayed_u(scenario: SwiptScenario, x: np.ndarray, los: bool) -> np.ndarray:
    omega = scenario.blockage_rate
    u_los = 2.0 * (1.0 - np.exp(-omega * x * (omega * x + 1.0))) / (omega * omega * x)
    return u_los if los else x - u_los


def _closed_form_ccdf(scenario: SwiptScenario, x: ArrayLike, los: bool) -> Union[float, np.ndarray]:
    values = _check_inside(scenario, x)
    radius2 = scenario.radius ** 2
    k_dev = scenario.num_devices
    ratio = values ** 2 * _displayed_u(scenario, values, los) * radius2 / (radius2 - values ** 2)
    outside = ((radius2 - values ** 2) / radius2) ** k_dev
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        series = np.where(np.isclose(ratio, 1.0), k_dev + 1.0, (ratio ** (k_dev + 1) - 1.0) / (ratio - 1.0))
    result = series * outside
    return float(result) if np.ndim(result) == 0 else result


def nearest_los_ccdf_closed_form(scenario: SwiptScenario, x: ArrayLike) -> Union[float, np.ndarray]:
    """Forma alternativa em série geométrica para ℙ(r_L1 >= x) (apenas para comparação)."""
    return _closed_form_ccdf(scenario, x, los=True)


def nearest_nlos_ccdf_closed_form(scenario: SwiptScenario, x: ArrayLike) -> Union[float, np.ndarray]:
    """Forma alternativa em série geométrica para ℙ(r_N1 >= x) (apenas para comparação)."""
    return _closed_form_ccdf(scenario, x, los=False)

# ============================================================================
# Distância Efetiva e Melhor Enlace
# ============================================================================

def _nlos_radius(scenario: SwiptScenario, s: np.ndarray) -> np.ndarray:
    return np.minimum(np.power(s, 1.0 / scenario.exponent_ratio), scenario.radius)


def effective_cdf(scenario: SwiptScenario, s: ArrayLike) -> np.ndarray:
    """F(s) = ℙ(distância efetiva de um dispositivo <= s), somando as partes LOS e NLOS."""
    s = np.asarray(s, dtype=float)
    los_part = _los_mass(scenario, np.minimum(s, scenario.radius))
    r_n = _nlos_radius(scenario, s)
    nlos_part = r_n ** 2 / scenario.radius ** 2 - _los_mass(scenario, r_n)
    return np.clip(los_part + nlos_part, 0.0, 1.0)


def _los_density(scenario: SwiptScenario, s: np.ndarray) -> np.ndarray:
    inside = s < scenario.radius
    return np.where(inside, np.exp(-scenario.blockage_rate * s) * 2.0 * s / scenario.radius ** 2, 0.0)


def _nlos_density(scenario: SwiptScenario, s: np.ndarray) -> np.ndarray:
    g = scenario.exponent_ratio
    r = np.power(s, 1.0 / g)
    inside = r < scenario.radius
    with np.errstate(divide='ignore', invalid='ignore'):
        jacobian = np.power(s, 1.0 / g - 1.0) / g
        density = (1.0 - np.exp(-scenario.blockage_rate * r)) * 2.0 * r / scenario.radius ** 2 * jacobian
    return np.where(inside & np.isfinite(density), density, 0.0)


def best_distance_density(scenario: SwiptScenario, s: ArrayLike) -> np.ndarray:
    """Densidade do mínimo das K_dev distâncias efetivas."""
    s = np.asarray(s, dtype=float)
    k_dev = scenario.num_devices
    survival = 1.0 - effective_cdf(scenario, s)
    return k_dev * (_los_density(scenario, s) + _nlos_density(scenario, s)) * survival ** (k_dev - 1)


def _max_effective_distance(scenario: SwiptScenario) -> float:
    return max(scenario.radius, scenario.radius ** scenario.exponent_ratio)


def _breakpoints(scenario: SwiptScenario, upper: float) -> list:
    return sorted({p for p in (1.0, scenario.radius) if 0.0 < p < upper})


def prob_best_is_los(scenario: SwiptScenario) -> float:
    """
    𝒫_L: probabilidade de o dispositivo de menor distância efetiva estar em LOS,
    K_dev ∫ f_L(s) (1 - F(s))^{K_dev - 1} ds.
    """
    k_dev = scenario.num_devices

    def integrand(s: float) -> float:
        s_arr = np.asarray(s, dtype=float)
        survival = 1.0 - float(effective_cdf(scenario, s_arr))
        return k_dev * float(_los_density(scenario, s_arr)) * survival ** (k_dev - 1)

    value, _ = integrate.quad(integrand, 0.0, scenario.radius, limit=QUAD_LIMIT)
    return float(min(1.0, max(0.0, value)))

# ============================================================================
# Potência, Vazão e Energia
# ============================================================================

def path_gain(distance: ArrayLike, exponent: float) -> np.ndarray:
    """min(1, r^{-γ}): ganho de percurso com limite de campo próximo."""
    distance = np.asarray(distance, dtype=float)
    with np.errstate(divide='ignore'):
        return np.minimum(1.0, np.power(distance, -exponent))


def received_power(scenario: SwiptScenario, distance: ArrayLike, los: Union[bool, np.ndarray],
                   fading: ArrayLike = 1.0) -> np.ndarray:
    """P_r = κ P_t h min(1, r^{-γ}), com γ = γ_L em LOS e γ_N em NLOS."""
    los = np.asarray(los, dtype=bool)
    gain = np.where(los, path_gain(distance, scenario.gamma_los), path_gain(distance, scenario.gamma_nlos))
    return scenario.peak_power * np.asarray(fading, dtype=float) * gain


def shannon_rate(scenario: SwiptScenario, power: ArrayLike) -> np.ndarray:
    """B_w log2(1 + P/N_0) em bits/s."""
    return scenario.bandwidth * np.log2(1.0 + np.asarray(power, dtype=float) / scenario.noise)


def fading_averaged_rate(scenario: SwiptScenario, mean_power: ArrayLike) -> np.ndarray:
    """
    𝔼_h[B_w log2(1 + h P/N_0)] com h ~ Exp(1), pela identidade B_w e^{z} E_1(z) / ln 2, z = N_0/P.
    Para z grande usa a série assintótica de e^{z} E_1(z); potência nula dá taxa nula.
    """
    power = np.asarray(mean_power, dtype=float)
    scaled = np.zeros(power.shape, dtype=float)
    positive = power > 0
    z = scenario.noise / power[positive]
    values = np.empty(z.shape, dtype=float)
    direct = z <= ASYMPTOTIC_EXP1_FROM
    values[direct] = np.exp(z[direct]) * special.exp1(z[direct])
    inv = 1.0 / z[~direct]
    values[~direct] = inv * (1.0 - inv + 2.0 * inv ** 2 - 6.0 * inv ** 3)
    scaled[positive] = values
    return scenario.bandwidth * scaled / math.log(2.0)


def best_link_rate(scenario: SwiptScenario) -> float:
    """
    𝔼[B_w log2(1 + h P_r/N_0)] do melhor enlace: média sobre h ~ Exp(1) e sobre a densidade de s_min,
    com P_r = κ P_t min(1, s^{-γ_L}).
    """
    upper = _max_effective_distance(scenario)

    def integrand(s: float) -> float:
        s_arr = np.asarray(s, dtype=float)
        power = scenario.peak_power * path_gain(s_arr, scenario.gamma_los)
        return float(fading_averaged_rate(scenario, power) * best_distance_density(scenario, s_arr))

    value, _ = integrate.quad(integrand, 0.0, upper, points=_breakpoints(scenario, upper), limit=QUAD_LIMIT)
    return float(value)


def _schedule_value(schedule: Any, name: str) -> float:
    if isinstance(schedule, Mapping):
        return float(schedule[name])
    return float(getattr(schedule, name))


def throughput_prefactor(schedule: Any, num_changes: int = 0) -> float:
    """
    N_l T_TS / (N_l T_BP + T_ETC + N_C T_GE).

    Raises:
        DomainError: Denominador nulo.
    """
    n_l = _schedule_value(schedule, 'N_l')
    denominator = (n_l * _schedule_value(schedule, 'T_BP') + _schedule_value(schedule, 'T_ETC')
                   + num_changes * _schedule_value(schedule, 'T_GE'))
    if denominator <= 0:
        raise DomainError("Prefator de vazão degenerado: N_l T_BP + T_ETC + N_C T_GE = 0.")
    return n_l * _schedule_value(schedule, 'T_TS') / denominator


def network_throughput(scenario: SwiptScenario, schedule: Any, num_changes: int = 0) -> float:
    """
    Vazão da rede: prefator de compartilhamento de tempo vezes a taxa esperada do melhor enlace.

    Args:
        scenario (SwiptScenario): Parâmetros da rede.
        schedule: PhaseSchedule ou mapeamento com N_l, T_TS, T_BP, T_ETC, T_GE.
        num_changes (int): N_C.
    """
    return throughput_prefactor(schedule, num_changes) * best_link_rate(scenario)


def harvest_power(scenario: SwiptScenario, distance: ArrayLike, los: Union[bool, np.ndarray],
                  group_size: ArrayLike, fading: ArrayLike = 1.0) -> np.ndarray:
    """
    Potência colhida por um dispositivo de um grupo de N_J dispositivos atendidos no slot.

    LOS: θ_e (N_J/K_dev) κ P_t h min(1, r^{-γ_L}); NLOS: θ_e (N_J/K_dev) B_w N_0 / N_J.
    """
    group_size = np.asarray(group_size, dtype=float)
    share = group_size / scenario.num_devices
    los_value = share * received_power(scenario, distance, True, fading)
    nlos_value = share * scenario.bandwidth * scenario.noise / group_size
    return scenario.harvest_efficiency * np.where(np.asarray(los, dtype=bool), los_value, nlos_value)


def harvested_energy(scenario: SwiptScenario, realization: DeviceRealization,
                     device_subset: Sequence[int]) -> HarvestedEnergy:
    """
    Potência colhida por dispositivo (zero fora do subconjunto) e a soma da rede num slot.

    Raises:
        ArgumentError: Subconjunto vazio ou com índice inválido.
    """
    members = np.unique(np.asarray(list(device_subset), dtype=np.int64))
    if members.size == 0:
        raise ArgumentError("O subconjunto de dispositivos não pode ser vazio.")
    if members.min() < 0 or members.max() >= scenario.num_devices:
        raise ArgumentError(f"Dispositivo fora do intervalo [0, {scenario.num_devices}).")
    per_device = np.zeros(scenario.num_devices, dtype=float)
    per_device[members] = harvest_power(
        scenario, realization.distances[members], realization.los_flags[members],
        members.size, realization.fading[members],
    )
    return HarvestedEnergy(per_device=per_device, total=float(per_device.sum()))

# ============================================================================
# Monte Carlo
# ============================================================================

def sample_realization(scenario: SwiptScenario, rng: np.random.Generator) -> DeviceRealization:
    """Sorteia K_dev dispositivos uniformes no disco (r = R sqrt(U)), visibilidade e desvanecimento Exp(1)."""
    k_dev = scenario.num_devices
    distances = scenario.radius * np.sqrt(rng.random(k_dev))
    angles = rng.uniform(0.0, 2.0 * np.pi, k_dev)
    los = rng.random(k_dev) < np.exp(-scenario.blockage_rate * distances)
    fading = rng.exponential(1.0, k_dev)
    positions = np.column_stack((distances * np.cos(angles), distances * np.sin(angles)))
    return DeviceRealization(positions=positions, distances=distances, los_flags=los, fading=fading)


def _sample_batch(scenario: SwiptScenario, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    distances = scenario.radius * np.sqrt(rng.random((n, scenario.num_devices)))
    los = rng.random((n, scenario.num_devices)) < np.exp(-scenario.blockage_rate * distances)
    return distances, los


def _proportion(hits: np.ndarray) -> Tuple[float, float]:
    p = float(np.mean(hits))
    return p, math.sqrt(max(p * (1.0 - p), 0.0) / hits.size)


def mc_prob_all_los(scenario: SwiptScenario, n: int, rng: np.random.Generator) -> Tuple[float, float]:
    """Fração de realizações com todos os dispositivos em LOS (estimativa, erro padrão)."""
    _, los = _sample_batch(scenario, n, rng)
    return _proportion(los.all(axis=1))


def mc_prob_all_nlos(scenario: SwiptScenario, n: int, rng: np.random.Generator) -> Tuple[float, float]:
    _, los = _sample_batch(scenario, n, rng)
    return _proportion((~los).all(axis=1))


def mc_nearest_ccdf(scenario: SwiptScenario, x: ArrayLike, n: int, rng: np.random.Generator,
                    los: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """CCDF empírica da distância ao dispositivo mais próximo da classe pedida (inf se não há nenhum)."""
    values = _check_inside(scenario, np.atleast_1d(x))
    distances, flags = _sample_batch(scenario, n, rng)
    selected = flags if los else ~flags
    nearest = np.where(selected, distances, np.inf).min(axis=1)
    hits = nearest[:, None] >= values[None, :]
    p = hits.mean(axis=0)
    return p, np.sqrt(p * (1.0 - p) / n)


def mc_prob_best_is_los(scenario: SwiptScenario, n: int, rng: np.random.Generator) -> Tuple[float, float]:
    """Fração de realizações em que o dispositivo de menor distância efetiva está em LOS."""
    distances, los = _sample_batch(scenario, n, rng)
    effective = np.where(los, distances, distances ** scenario.exponent_ratio)
    best = np.argmin(effective, axis=1)
    return _proportion(los[np.arange(n), best])


def mc_best_link_rate(scenario: SwiptScenario, n: int, rng: np.random.Generator) -> Tuple[float, float]:
    """Taxa média do melhor enlace sobre n realizações, com um desvanecimento h ~ Exp(1) por realização."""
    distances, los = _sample_batch(scenario, n, rng)
    effective = np.where(los, distances, distances ** scenario.exponent_ratio).min(axis=1)
    fading = rng.exponential(1.0, n)
    rates = shannon_rate(scenario, received_power(scenario, effective, True, fading))
    return float(rates.mean()), float(rates.std(ddof=1) / math.sqrt(n))


def geometry_report(scenario: SwiptScenario, n: int, rng: np.random.Generator,
                    grid_points: int = 20) -> Dict[str, Any]:
    """
    Compara cada grandeza fechada com o seu estimador de Monte Carlo.

    Returns:
        Dict[str, Any]: Para cada grandeza, valor fechado, estimativa, erro padrão e |gap|/ep;
                        inclui as formas alternativas para o relatório de discrepância.
    """
    def entry(closed: float, estimate: float, se: float) -> Dict[str, float]:
        return {'closed_form': closed, 'monte_carlo': estimate, 'std_error': se,
                'z': abs(closed - estimate) / se if se > 0 else (0.0 if closed == estimate else math.inf)}

    grid = np.linspace(scenario.radius / (grid_points + 1), scenario.radius * grid_points / (grid_points + 1), grid_points)
    report: Dict[str, Any] = {
        'all_los': entry(prob_any_los(scenario), *mc_prob_all_los(scenario, n, rng)),
        'all_nlos': entry(prob_any_nlos(scenario), *mc_prob_all_nlos(scenario, n, rng)),
        'best_is_los': entry(prob_best_is_los(scenario), *mc_prob_best_is_los(scenario, n, rng)),
        'best_link_rate': entry(best_link_rate(scenario), *mc_best_link_rate(scenario, n, rng)),
    }
    for label, los in (('los_ccdf', True), ('nlos_ccdf', False)):
        closed = _nearest_ccdf(scenario, grid, los)
        estimate, se = mc_nearest_ccdf(scenario, grid, n, rng, los)
        with np.errstate(divide='ignore', invalid='ignore'):
            z = np.where(se > 0, np.abs(closed - estimate) / se, 0.0)
        report[label] = {'grid': grid.tolist(), 'closed_form': closed.tolist(),
                         'monte_carlo': estimate.tolist(), 'max_z': float(z.max())}
    report['displayed_forms'] = {
        'inner_integral': los_inner_integral(scenario),
        'inner_displayed': los_closed_form_inner(scenario),
        'los_ccdf_displayed': np.asarray(nearest_los_ccdf_closed_form(scenario, grid)).tolist(),
    }
    logger.info(f"Relatório geométrico: B_L={report['all_los']['closed_form']:.4g}, "
                f"𝒫_L={report['best_is_los']['closed_form']:.4f}")
    return report

# ============================================================================
# Exports
# ============================================================================

__all__ = [
    'SwiptScenario', 'DeviceRealization', 'HarvestedEnergy',
    'los_inner_integral', 'los_inner_exact', 'los_closed_form_inner', 'prob_any_los', 'prob_any_nlos',
    'nearest_los_ccdf', 'nearest_nlos_ccdf', 'nearest_los_ccdf_closed_form', 'nearest_nlos_ccdf_closed_form',
    'effective_cdf', 'best_distance_density', 'prob_best_is_los',
    'path_gain', 'received_power', 'shannon_rate', 'fading_averaged_rate', 'best_link_rate',
    'throughput_prefactor',
    'network_throughput', 'harvest_power', 'harvested_energy',
    'sample_realization', 'mc_prob_all_los', 'mc_prob_all_nlos', 'mc_nearest_ccdf',
    'mc_prob_best_is_los', 'mc_best_link_rate', 'geometry_report',
]

# ============================================================================
# Execução Local
# ============================================================================

if __name__ == '__main__':
    print("\n=== Testando o oráculo geométrico ===")
    scenario = SwiptScenario()
    rng = np.random.default_rng(0)
    print(f"B_L = {prob_any_los(scenario):.6g} (MC {mc_prob_all_los(scenario, 100_000, rng)[0]:.6g})")
    print(f"𝒫_L = {prob_best_is_los(scenario):.4f} (MC {mc_prob_best_is_los(scenario, 100_000, rng)[0]:.4f})")
    print(f"Taxa do melhor enlace = {best_link_rate(scenario):.4g} bps")
    print(f"Forma exibida da integral interna: {los_closed_form_inner(scenario):.4g} vs {los_inner_integral(scenario):.4g}")
