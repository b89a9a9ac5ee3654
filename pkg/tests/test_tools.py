"""
Testes das Ferramentas
----------------------
Verifica os avaliadores fechados (função Q, probabilidades de falso alarme
e de detecção perdida, limites de arrependimento e cruzamentos), o cálculo
do arrependimento empírico, o oráculo geométrico SWIPT contra Monte Carlo,
o estudo de caso e a agregação dos resultados.
"""

# ============================================================================
# Imports
# ============================================================================

import os
import sys
import math
import logging
import unittest
from types import SimpleNamespace

import numpy as np
import pandas as pd
from scipy import special

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError, DomainError, TraceMismatchError
from agents.bandit_env import ChangeRecord
from agents.tools import analysis
from agents.tools.regret import annotate_regret, empirical_regret, sample_curve, trace_sampling_age
from agents.tools import swipt
from agents.tools.swipt import DeviceRealization, SwiptScenario
from agents.tools.case_study import DEFAULT_CASE_AGENT, arm_means, plan_flips, run_case_study, windowed_min_power
from agents.tools.result_aggregator import (
    aggregate_case_rows, aggregate_finals, case_comparison, mean_confidence_interval, ordering_summary,
)

# ============================================================================
# Configuração do Logger
# ============================================================================

log_file_tools = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'test_tools.log')
file_handler_tools = logging.FileHandler(log_file_tools, mode='w')
file_handler_tools.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
file_handler_tools.setLevel(logging.DEBUG)

root_logger = logging.getLogger()
root_logger.setLevel(logging.DEBUG)
root_logger.addHandler(file_handler_tools)

logger_test_tools = get_logger(__name__)

# ============================================================================
# Classes de Teste
# ============================================================================

class TestToolsBase(unittest.TestCase):
    """Classe base para os testes das ferramentas."""

    @classmethod
    def setUpClass(cls):
        logger_test_tools.info(f"\n{'='*60}\nINICIANDO SUITE DE TESTES PARA: {cls.__name__}\n{'='*60}")

    def setUp(self):
        logger_test_tools.info(f"-- Iniciando teste: {self._testMethodName} --")

    def tearDown(self):
        logger_test_tools.info(f"-- Finalizando teste: {self._testMethodName} --\n")


class TestAnalysis(TestToolsBase):
    """Avaliadores fechados de agents.tools.analysis."""

    def setUp(self):
        super().setUp()
        self.params = analysis.BoundParams(num_arms=8, horizon=100_000, sigma=0.1, delta=0.05,
                                           n_etc=100, t_bp=100, t_ts=216)

    def test_q_function(self):
        self.assertAlmostEqual(analysis.q_function(0.0), 0.5)
        self.assertAlmostEqual(analysis.q_function(1.959963984540054), 0.025, places=9)
        self.assertAlmostEqual(analysis.q_function(analysis.q_function_inv(1e-3)), 1e-3, places=12)
        np.testing.assert_allclose(analysis.q_function([0.0, 0.0]), [0.5, 0.5])
        with self.assertRaises(ArgumentError):
            analysis.q_function_inv(0.0)

    def test_sigma_nc(self):
        value = analysis.sigma_nc(self.params, 1, [100] * 8)
        self.assertAlmostEqual(value, math.sqrt(0.01 / 8 * (0.01 + 0.01 + 0.08)))
        self.assertAlmostEqual(analysis.detection_sigma(self.params, [100] * 8), value)
        self.assertAlmostEqual(analysis.detection_sigma(self.params, [100] * 8, 'group_sum'), 8 * value)
        with self.assertRaises(ArgumentError):
            analysis.sigma_nc(self.params, 1, [100, 0])

    def test_false_alarm(self):
        sigma = 0.05
        one_sided = analysis.p_false_alarm(self.params, sigma)
        self.assertAlmostEqual(one_sided, analysis.q_function(4.0))
        self.assertAlmostEqual(analysis.p_false_alarm(self.params, sigma, two_sided=True), 2 * one_sided)
        with self.assertRaises(ArgumentError):
            analysis.p_false_alarm(self.params, 0.0)

    def test_missed_detection_ts(self):
        params = analysis.BoundParams(**{**self.params.__dict__, 'delta_change': 0.3})
        missed = analysis.p_missed_ts(params, 10, 50)
        self.assertGreaterEqual(missed, 0.0)
        self.assertLess(missed, 1e-6)
        with self.assertRaises(DomainError):
            analysis.p_missed_ts(analysis.BoundParams(**{**self.params.__dict__, 'delta_change': 0.05}), 10, 50)

    def test_missed_detection_bp_cases(self):
        params = analysis.BoundParams(**{**self.params.__dict__, 'delta_change': 0.5})
        self.assertAlmostEqual(analysis.bp_case_boundary(params), 60.0)
        self.assertEqual(analysis.p_missed_bp(params, 60, 40).case_label, 'case1')
        late = analysis.p_missed_bp(params, 61, 39)
        self.assertEqual(late.case_label, 'case2')
        self.assertAlmostEqual(late.probability, 1.0 - 1.0 / params.horizon)
        negative = analysis.BoundParams(**{**self.params.__dict__, 'delta_change': -0.5})
        self.assertEqual(analysis.p_missed_bp(negative, 0, 100).case_label, 'case3')
        self.assertEqual(analysis.p_missed_bp(negative, 99, 1).case_label, 'case4')
        with self.assertRaises(ArgumentError):
            analysis.p_missed_bp(params, 10, 10)

    def test_regret_bounds(self):
        params = analysis.BoundParams(num_arms=8, horizon=100_000, num_changes=0)
        self.assertAlmostEqual(analysis.regret_bound_tsge(params, 1), 1.0)
        self.assertAlmostEqual(analysis.regret_bound_competitor(params, 1), 0.0)
        with self.assertRaises(ArgumentError):
            analysis.regret_bound_tsge(params, 0.5)
        with self.assertRaises(ArgumentError):
            analysis.BoundParams(num_arms=8, horizon=100, num_changes=11)
        grid = analysis.log_grid(2, 100_000, 50)
        self.assertEqual((int(grid[0]), int(grid[-1])), (2, 100_000))
        self.assertTrue(np.all(np.diff(grid) > 0))
        curves = analysis.bound_curves(params, grid)
        self.assertEqual(list(curves.columns), ['t', 'tsge_bound', 'competitor_bound'])

    def test_crossing_points(self):
        params = analysis.BoundParams(num_arms=100, horizon=100_000, num_changes=10)
        points = analysis.crossing_points(params, 100_000)
        self.assertAlmostEqual(points.T1, (10 * (1 + math.log2(100))) ** 2.5)
        for root in points.roots:
            gap = analysis.regret_bound_tsge(params, root) - analysis.regret_bound_competitor(params, root)
            self.assertLess(abs(gap) / analysis.regret_bound_tsge(params, root), 1e-6)
        self.assertEqual(points.T2, points.roots[0] if points.roots else None)
        self.assertIn('sign_pattern', points.as_dict())

    def test_crossing_structure_across_arm_counts(self):
        """Até 1e5 só há a raiz descendente; a raiz ascendente aparece para K=100 e 500 antes de 2e6."""
        downward = {100: (3400.0, 3500.0), 500: (1550.0, 1650.0), 1000: (2050.0, 2150.0)}
        upward = {100: (1.10e5, 1.12e5), 500: (1.04e6, 1.07e6), 1000: None}
        for k in (100, 500, 1000):
            params = analysis.BoundParams(num_arms=k, horizon=100_000, num_changes=10)
            points = analysis.crossing_points(params, 100_000)
            self.assertEqual(points.sign_pattern, ['+', '-'], f"K={k}")
            self.assertEqual(len(points.roots), 1, f"K={k}")
            low, high = downward[k]
            self.assertTrue(low < points.T2 < high, f"K={k}: T2={points.T2}")
            self.assertIsNone(points.T3)
            self.assertIsNone(points.upward_crossing)

            extended = analysis.crossing_points(params, 2_000_000)
            self.assertAlmostEqual(extended.roots[0], points.T2, delta=1e-6 * points.T2)
            if upward[k] is None:
                self.assertIsNone(extended.upward_crossing, f"K={k}")
                self.assertEqual(extended.sign_pattern, ['+', '-'])
            else:
                low, high = upward[k]
                self.assertTrue(low < extended.upward_crossing < high, f"K={k}: {extended.upward_crossing}")
                self.assertEqual(extended.sign_pattern, ['+', '-', '+'])
                self.assertEqual(extended.T3, extended.upward_crossing)

    def test_regret_decomposition(self):
        params = analysis.BoundParams(num_arms=8, horizon=100_000, num_changes=10)
        parts = analysis.regret_decomposition(params)
        self.assertAlmostEqual(parts.etc_term, 8 * math.log(100_000))
        self.assertEqual(parts.num_episodes, 100_000 // 316)
        expected = (parts.etc_term
                    + (parts.num_episodes - 10) * (parts.no_change_term + parts.false_alarm_term)
                    + 10 * (parts.change_term + parts.missed_detection_term))
        self.assertAlmostEqual(parts.total, expected)
        self.assertTrue(0.0 <= parts.p_missed <= 1.0)


class TestRegret(TestToolsBase):
    """Arrependimento empírico a partir do trace e do log de mudanças."""

    def trace(self, arms):
        return pd.DataFrame({'slot': np.arange(len(arms)), 'arms': arms})

    def test_annotate_regret(self):
        changes = [ChangeRecord(slot=2, arm=1, old_mean=0.8, new_mean=0.1)]
        annotated = annotate_regret(self.trace([(0,), (1,), (0, 1), (1,)]), changes, [0.2, 0.8])
        np.testing.assert_allclose(annotated['regret_increment'], [0.6, 0.0, 0.05, 0.1])
        self.assertAlmostEqual(annotated['cumulative_regret'].iloc[-1], 0.75)
        curve = empirical_regret(self.trace([(0,), (1,), (0, 1), (1,)]), changes, [0.2, 0.8])
        self.assertEqual(curve.grid.tolist(), [1.0, 2.0, 3.0, 4.0])

    def test_annotate_regret_mismatch(self):
        with self.assertRaises(TraceMismatchError):
            annotate_regret(self.trace([(0,), (1,)]), [ChangeRecord(5, 0, 0.2, 0.4)], [0.2, 0.8])
        gapped = pd.DataFrame({'slot': [0, 2], 'arms': [(0,), (1,)]})
        with self.assertRaises(TraceMismatchError):
            annotate_regret(gapped, [], [0.2, 0.8])

    def test_sample_curve(self):
        annotated = annotate_regret(self.trace([(0,)] * 5), [], [0.2, 0.8])
        sampled = sample_curve(annotated, 2)
        self.assertEqual(sampled['slot'].tolist(), [2, 4, 5])
        np.testing.assert_allclose(sampled['cumulative_regret'], [1.2, 2.4, 3.0])

    def test_trace_sampling_age(self):
        trace = self.trace([(0,), (1,), (0,), (0,)])
        self.assertEqual(trace_sampling_age(trace, 2), 3)
        self.assertEqual(trace_sampling_age(trace, 2, start_slot=4), 3)
        self.assertEqual(trace_sampling_age(self.trace([(0, 1)] * 3), 2), 1)


class TestSwiptGeometry(TestToolsBase):
    """Oráculo geométrico contra as suas próprias estimativas de Monte Carlo."""

    def setUp(self):
        super().setUp()
        self.scenario = SwiptScenario(num_devices=4)
        self.rng = np.random.default_rng(2024)

    def test_scenario_validation(self):
        with self.assertRaises(ArgumentError):
            SwiptScenario(gamma_los=3.0, gamma_nlos=2.0)
        with self.assertRaises(ArgumentError):
            SwiptScenario(harvest_efficiency=1.5)
        self.assertEqual(SwiptScenario().horizon_slots, 100_000)
        self.assertEqual(SwiptScenario().flip_period_slots, 3000)
        scenario = SwiptScenario.from_dict({'num_devices': 16, 'device_sweep': [4, 8]}, radius=20.0)
        self.assertEqual((scenario.num_devices, scenario.radius), (16, 20.0))

    def test_inner_integral(self):
        inner = swipt.los_inner_integral(self.scenario)
        self.assertAlmostEqual(inner, swipt.los_inner_exact(self.scenario), places=10)
        self.assertAlmostEqual(swipt.prob_any_los(self.scenario), inner ** 4, places=12)
        self.assertAlmostEqual(swipt.prob_any_nlos(self.scenario), (1 - inner) ** 4, places=12)
        clear = SwiptScenario(num_devices=4, blockage_rate=1e-7)
        self.assertAlmostEqual(swipt.prob_any_los(clear), 1.0, places=4)

    def test_nearest_ccdf_limits(self):
        self.assertAlmostEqual(swipt.nearest_los_ccdf(self.scenario, 1e-3), 1.0, places=6)
        values = swipt.nearest_los_ccdf(self.scenario, np.array([5.0, 20.0, 45.0]))
        self.assertTrue(np.all(np.diff(values) < 0))
        with self.assertRaises(ArgumentError):
            swipt.nearest_los_ccdf(self.scenario, 50.0)
        with self.assertRaises(ArgumentError):
            swipt.nearest_nlos_ccdf(self.scenario, 0.0)

    def test_closed_forms_match_monte_carlo(self):
        n = 40_000
        estimate, se = swipt.mc_prob_all_los(self.scenario, n, self.rng)
        self.assertLessEqual(abs(estimate - swipt.prob_any_los(self.scenario)), 5 * se + 1e-3)
        estimate, se = swipt.mc_prob_best_is_los(self.scenario, n, self.rng)
        self.assertLessEqual(abs(estimate - swipt.prob_best_is_los(self.scenario)), 5 * se + 1e-3)
        grid = np.linspace(2.0, 48.0, 20)
        for los in (True, False):
            closed = swipt.nearest_los_ccdf(self.scenario, grid) if los else swipt.nearest_nlos_ccdf(self.scenario, grid)
            estimate, se = swipt.mc_nearest_ccdf(self.scenario, grid, n, self.rng, los=los)
            self.assertTrue(np.all(np.abs(estimate - closed) <= 5 * se + 1e-3), f"CCDF los={los}")
        estimate, se = swipt.mc_best_link_rate(self.scenario, n, self.rng)
        self.assertLessEqual(abs(estimate - swipt.best_link_rate(self.scenario)), 5 * se + 1e-3 * estimate)

    def test_effective_cdf_is_distribution(self):
        upper = self.scenario.radius ** self.scenario.exponent_ratio
        self.assertAlmostEqual(float(swipt.effective_cdf(self.scenario, 0.0)), 0.0)
        self.assertAlmostEqual(float(swipt.effective_cdf(self.scenario, upper)), 1.0, places=9)


class TestSwiptPower(TestToolsBase):
    """Potência recebida, vazão e energia colhida."""

    def setUp(self):
        super().setUp()
        self.scenario = SwiptScenario(num_devices=4)

    def test_path_gain_near_field(self):
        np.testing.assert_allclose(swipt.path_gain([0.5, 1.0, 10.0], 2.0), [1.0, 1.0, 0.01])
        power = swipt.received_power(self.scenario, 10.0, True, fading=2.0)
        self.assertAlmostEqual(float(power), 1e-3 * 2.0 * 10.0 ** -2.1)
        nlos = swipt.received_power(self.scenario, 10.0, False)
        self.assertAlmostEqual(float(nlos), 1e-3 * 10.0 ** -3.4)
        self.assertEqual(float(swipt.shannon_rate(self.scenario, 0.0)), 0.0)

    def test_fading_averaged_rate_matches_monte_carlo(self):
        rng = np.random.default_rng(11)
        fading = rng.exponential(1.0, 200_000)
        for snr in (0.1, 1.0, 10.0, 1000.0):
            power = snr * self.scenario.noise
            averaged = float(swipt.fading_averaged_rate(self.scenario, power))
            samples = swipt.shannon_rate(self.scenario, fading * power)
            se = samples.std(ddof=1) / math.sqrt(samples.size)
            self.assertLessEqual(abs(averaged - samples.mean()), 5 * se, f"SNR={snr}")
            self.assertLess(averaged, float(swipt.shannon_rate(self.scenario, power)))

    def test_fading_averaged_rate_edges(self):
        np.testing.assert_array_equal(swipt.fading_averaged_rate(self.scenario, [0.0, 0.0]), [0.0, 0.0])
        z = 1000.0
        x = 1.0 / z
        low_snr = float(swipt.fading_averaged_rate(self.scenario, self.scenario.noise / z))
        expected = self.scenario.bandwidth * (x - x ** 2 + 2 * x ** 3) / math.log(2.0)
        self.assertAlmostEqual(low_snr / expected, 1.0, places=7)
        z = 600.0
        direct = self.scenario.bandwidth * math.exp(z) * special.exp1(z) / math.log(2.0)
        series = float(swipt.fading_averaged_rate(self.scenario, self.scenario.noise / z))
        self.assertAlmostEqual(series / direct, 1.0, places=8)

    def test_throughput_prefactor(self):
        schedule = {'N_l': 10, 'T_TS': 20, 'T_BP': 5, 'T_ETC': 50, 'T_GE': 30}
        self.assertAlmostEqual(swipt.throughput_prefactor(schedule, 1), 200.0 / 130.0)
        with self.assertRaises(DomainError):
            swipt.throughput_prefactor({'N_l': 0, 'T_TS': 0, 'T_BP': 0, 'T_ETC': 0, 'T_GE': 0}, 0)
        rate = swipt.network_throughput(self.scenario, schedule, 1)
        self.assertAlmostEqual(rate, 200.0 / 130.0 * swipt.best_link_rate(self.scenario))

    def test_harvested_energy(self):
        realization = DeviceRealization(
            positions=np.zeros((4, 2)), distances=np.array([10.0, 20.0, 30.0, 40.0]),
            los_flags=np.array([True, False, True, False]), fading=np.ones(4),
        )
        energy = swipt.harvested_energy(self.scenario, realization, [1, 0])
        expected_los = 0.5 * (2 / 4) * 1e-3 * 10.0 ** -2.1
        expected_nlos = 0.5 * (2 / 4) * 10e6 * 1e-13 / 2
        np.testing.assert_allclose(energy.per_device, [expected_los, expected_nlos, 0.0, 0.0])
        self.assertAlmostEqual(energy.total, expected_los + expected_nlos)
        with self.assertRaises(ArgumentError):
            swipt.harvested_energy(self.scenario, realization, [])
        with self.assertRaises(ArgumentError):
            swipt.harvested_energy(self.scenario, realization, [4])


class TestCaseStudy(TestToolsBase):
    """Estudo de caso curto: 60 s de simulação com uma troca de visibilidade."""

    def setUp(self):
        super().setUp()
        self.scenario = SwiptScenario(num_devices=4, duration_seconds=60.0)

    def test_arm_means_are_normalized(self):
        realization = swipt.sample_realization(self.scenario, np.random.default_rng(1))
        means = arm_means(self.scenario, realization)
        self.assertEqual(means.shape, (4,))
        self.assertTrue(np.all(means > 0) and np.all(means <= 1.0 + 1e-12))

    def test_plan_flips(self):
        realization = swipt.sample_realization(self.scenario, np.random.default_rng(1))
        plan = plan_flips(self.scenario, realization, 6000, np.random.default_rng(2))
        self.assertEqual(plan.slots.tolist(), [3000])
        device = int(plan.devices[0])
        states = plan.los_at(realization.los_flags, device, np.array([2999, 3000]))
        self.assertEqual(bool(states[0]), bool(realization.los_flags[device]))
        self.assertEqual(bool(states[1]), not bool(realization.los_flags[device]))

    def test_run_case_study(self):
        report = run_case_study(self.scenario, seed=3)
        frame = report.to_frame()
        self.assertEqual(sorted(frame['algorithm']), ['mucb', 'tsge'])
        self.assertEqual(report.flips, 1)
        self.assertEqual(report.horizon, 6000)
        self.assertTrue((frame['mean_throughput_bps'] > 0).all())
        self.assertTrue((frame['min_harvested_watts'] >= 0).all())
        self.assertTrue((frame['max_energy_age'] >= 1).all())
        self.assertTrue((frame['min_run_harvested_watts'] > 0).any())
        self.assertGreater(report.energy_window, report.episode_len)
        again = run_case_study(self.scenario, seed=3).to_frame()
        pd.testing.assert_frame_equal(frame, again)

    def test_case_agent_threshold_matches_min_change(self):
        sigma = DEFAULT_CASE_AGENT['sigma']
        self.assertAlmostEqual(4 * DEFAULT_CASE_AGENT['delta'], 2 * sigma)
        with self.assertRaises(ArgumentError):
            run_case_study(self.scenario, agent_cfg={'delta': sigma}, seed=3)

    def test_windowed_min_power(self):
        slots = np.array([0, 1, 2, 3, 4, 4])
        devices = np.array([0, 1, 0, 0, 1, 2])
        harvest = np.ones(6)
        self.assertAlmostEqual(windowed_min_power(slots, devices, harvest, 2, 5, 2), 0.0)
        self.assertAlmostEqual(windowed_min_power(slots, devices, harvest, 2, 5, 1), 0.0)
        self.assertAlmostEqual(windowed_min_power(slots, devices, harvest, 2, 5, None), 2.0 / 5.0)
        self.assertAlmostEqual(windowed_min_power(slots, devices, harvest, 2, 5, 10), 2.0 / 5.0)
        self.assertAlmostEqual(windowed_min_power(np.array([0, 1, 2, 3]), np.array([0, 1, 1, 0]),
                                                  np.ones(4), 2, 4, 2), 0.5)

    def test_mucb_starves_a_device_within_an_episode_window(self):
        """Com exploração rara, algum dispositivo passa uma janela T_l + T_GE inteira sem energia no M-UCB."""
        scenario = SwiptScenario(num_devices=8, duration_seconds=60.0)
        frames = [run_case_study(scenario, seed=seed, mucb_cfg={'exploration_rate': 0.005}).to_frame()
                  for seed in range(4)]
        rows = pd.concat(frames, ignore_index=True)
        mucb = rows[rows['algorithm'] == 'mucb']
        tsge = rows[rows['algorithm'] == 'tsge']
        self.assertTrue((mucb['min_harvested_watts'] == 0.0).any())
        self.assertTrue((tsge['min_harvested_watts'] > 0.0).all())


class TestResultAggregator(TestToolsBase):

    def test_mean_confidence_interval(self):
        mean, low, high = mean_confidence_interval([1.0, 2.0, 3.0])
        self.assertAlmostEqual(mean, 2.0)
        self.assertAlmostEqual(high - mean, (1.0 / math.sqrt(3.0)) * 4.302652729911275, places=6)
        self.assertEqual(mean_confidence_interval([5.0]), (5.0, 5.0, 5.0))
        self.assertEqual(mean_confidence_interval([2.0, 2.0]), (2.0, 2.0, 2.0))

    def test_aggregate_finals_and_ordering(self):
        records = [
            SimpleNamespace(replication=1, payload={'finals': {('changes', 'tsge'): 10.0, ('changes', 'ts'): 50.0}}),
            SimpleNamespace(replication=0, payload={'finals': {('changes', 'tsge'): 12.0, ('changes', 'ts'): 52.0}}),
        ]
        finals = aggregate_finals(records)
        self.assertEqual(finals['agent'].tolist(), ['ts', 'tsge'])
        self.assertEqual(finals['replications'].tolist(), [2, 2])
        summary = ordering_summary(finals, 'changes', ['tsge', 'ts', 'mucb'])
        self.assertTrue(summary['order_holds'])
        self.assertEqual(summary['observed_order'], ['tsge', 'ts'])
        self.assertAlmostEqual(summary['final_means']['tsge'], 11.0)

    def test_aggregate_case_rows(self):
        rows = pd.DataFrame({
            'seed': [2, 1, 1, 2],
            'num_devices': [4, 4, 4, 4],
            'algorithm': ['tsge', 'tsge', 'mucb', 'mucb'],
            'mean_throughput_bps': [10.0, 20.0, 30.0, 50.0],
            'min_harvested_watts': [1e-6, 3e-6, 2e-6, 4e-6],
            'min_run_harvested_watts': [2e-6, 4e-6, 3e-6, 5e-6],
            'max_energy_age': [7, 9, 100, 80],
        })
        summary = aggregate_case_rows(rows).set_index('algorithm')
        self.assertAlmostEqual(summary.loc['tsge', 'mean_throughput_bps'], 15.0)
        self.assertAlmostEqual(summary.loc['mucb', 'worst_harvested_watts'], 2e-6)
        self.assertAlmostEqual(summary.loc['tsge', 'min_run_harvested_watts'], 3e-6)
        self.assertEqual(int(summary.loc['mucb', 'max_energy_age']), 100)
        self.assertEqual(int(summary.loc['tsge', 'replications']), 2)

    def test_case_comparison(self):
        summary = pd.DataFrame({
            'num_devices': [4, 4, 8, 8, 16, 16],
            'algorithm': ['mucb', 'tsge'] * 3,
            'mean_throughput_bps': [9.0, 5.0, 7.0, 7.5, 3.0, 6.0],
            'worst_harvested_watts': [0.0, 1e-6, 0.0, 2e-6, 1e-7, 1e-6],
        })
        comparison = case_comparison(summary)
        self.assertEqual(comparison['throughput_leader'], {'4': 'mucb', '8': 'tsge', '16': 'tsge'})
        self.assertTrue(comparison['crossover_observed'])
        self.assertEqual(comparison['starved_algorithms']['4'], ['mucb'])
        self.assertEqual(comparison['starved_algorithms']['16'], [])
        flat = case_comparison(summary.assign(mean_throughput_bps=[1.0, 2.0] * 3))
        self.assertFalse(flat['mucb_leads_smallest'])
        self.assertTrue(flat['tsge_leads_largest'])
        self.assertFalse(flat['crossover_observed'])

# ============================================================================
# Função para Executar Todos os Testes
# ============================================================================

def run_all_tool_tests():
    loader = unittest.defaultTestLoader
    suite = unittest.TestSuite()
    for case in (TestAnalysis, TestRegret, TestSwiptGeometry, TestSwiptPower, TestCaseStudy, TestResultAggregator):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2, stream=sys.stdout).run(suite)
    logger_test_tools.info(f"Testes executados: {result.testsRun}; falhas: {len(result.failures)}; erros: {len(result.errors)}")
    return result.wasSuccessful()


if __name__ == '__main__':
    success = run_all_tool_tests()
    print(f"\nExecução dos testes de ferramentas concluída. Verifique o arquivo '{log_file_tools}' para logs detalhados.")
    sys.exit(0 if success else 1)
