"""
Testes dos Agentes
------------------
Verifica o núcleo do TS-GE (cronograma, atualização Beta, teste da BP,
códigos dos super-braços, identificação e reparo), uma execução completa
sem ruído e os agentes de comparação (TS clássico e M-UCB).
"""

# ============================================================================
# Imports
# ============================================================================

import os
import sys
import math
import logging
import unittest

import numpy as np

# Adiciona o diretório raiz do projeto ao sys.path para imports absolutos
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from agents.utils.logger import get_logger
from agents.utils.errors import ArgumentError
from agents.bandit_env import BanditEnv, EnvConfig, PullOutcome
from agents.state.beliefs import ArmBelief, Phase
from agents.tsge_agent import (
    TsgeAgent, TsgeConfig, bp_detect, bp_statistic, code_width, construct_super_arms, etc_length,
    ge_identify, nearest_prior_source, phase_lengths, repair_changed_arm, ts_select, ts_update,
)
from agents.baselines import ClassicTS, MUCB, MucbConfig
from agents.tools import analysis

# ============================================================================
# Configuração do Logger
# ============================================================================

log_file = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'test_agents.log')
file_handler = logging.FileHandler(log_file, mode='w')
file_handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
file_handler.setLevel(logging.DEBUG)

root_logger = logging.getLogger()
root_logger.setLevel(logging.DEBUG)
root_logger.addHandler(file_handler)

logger_test_agents = get_logger(__name__)

# ============================================================================
# Funções Auxiliares
# ============================================================================

def beliefs_with_means(means):
    return [ArmBelief(mu_hat=m, pull_count=100) for m in means]


def super_arm_means(super_arms, true_means):
    return [float(np.mean([true_means[i] for i in sa.members])) for sa in super_arms]

# ============================================================================
# Classes de Teste
# ============================================================================

class TestAgentsBase(unittest.TestCase):
    """Classe base para os testes dos agentes."""

    @classmethod
    def setUpClass(cls):
        logger_test_agents.info(f"\n{'='*60}\nINICIANDO SUITE DE TESTES PARA: {cls.__name__}\n{'='*60}")

    def setUp(self):
        logger_test_agents.info(f"-- Iniciando teste: {self._testMethodName} --")

    def tearDown(self):
        logger_test_agents.info(f"-- Finalizando teste: {self._testMethodName} --\n")


class TestSchedule(TestAgentsBase):

    def test_etc_length(self):
        self.assertEqual(etc_length(0.1, 0.05), 150)
        self.assertEqual(etc_length(0.05, 1e-5), 2303)
        for delta, p_l in ((0.0, 0.1), (0.1, 0.0), (0.1, 1.5)):
            with self.assertRaises(ArgumentError):
                etc_length(delta, p_l)

    def test_phase_lengths(self):
        schedule = phase_lengths(100_000, 8, 0.05, 1e-5)
        self.assertEqual((schedule.T_l, schedule.T_BP, schedule.T_TS), (316, 100, 216))
        self.assertEqual((schedule.n_ETC, schedule.T_ETC), (2303, 18424))
        self.assertEqual((schedule.d, schedule.n_ge, schedule.T_GE), (3, 316, 948))
        self.assertEqual(schedule.N_l, 258)
        self.assertEqual(phase_lengths(100_000, 8, 0.05, 1e-5, n_ge=10).T_GE, 30)

    def test_phase_lengths_short_horizon(self):
        with self.assertRaises(ArgumentError):
            phase_lengths(1, 2, 0.1, 0.1)

    def test_code_width(self):
        self.assertEqual([code_width(k) for k in (1, 2, 5, 8, 9)], [0, 1, 3, 3, 4])

    def test_config_defaults_and_validation(self):
        cfg = TsgeConfig(horizon=10_000, num_arms=8, sigma=0.1)
        self.assertAlmostEqual(cfg.delta, 0.05)
        self.assertAlmostEqual(cfg.loc_fail_prob, 1e-4)
        self.assertEqual(cfg.n_ge, 100)
        self.assertAlmostEqual(cfg.bp_threshold, 0.2)
        self.assertAlmostEqual(cfg.ge_threshold, 0.1)
        with self.assertRaises(ArgumentError):
            TsgeConfig(horizon=10_000, num_arms=8, update_rule='outra')
        with self.assertRaises(ArgumentError):
            TsgeConfig(horizon=10_000, num_arms=8, delta=0.05, min_change=0.1)
        from_yaml = TsgeConfig.from_dict({'delta': None, 'loc_fail_prob': 0.01, 'extra': 1}, horizon=400, num_arms=2)
        self.assertEqual(from_yaml.loc_fail_prob, 0.01)


class TestThompsonKernel(TestAgentsBase):

    def test_literal_and_conjugate_updates(self):
        rng = np.random.default_rng(0)
        success = PullOutcome(reward=1.0, normalized_reward=1.0, slot=3, arms=(0,))
        literal = ts_update(ArmBelief(), success, rng)
        self.assertEqual((literal.alpha, literal.beta), (1.0, 2.0))
        self.assertEqual((literal.pull_count, literal.mu_hat, literal.last_probed_slot), (1, 1.0, 3))
        belief = ts_update(ArmBelief(), success, rng, update_rule='conjugate')
        self.assertEqual((belief.alpha, belief.beta), (2.0, 1.0))
        failure = PullOutcome(reward=-0.2, normalized_reward=0.0, slot=4, arms=(0,))
        belief = ts_update(belief, failure, rng, update_rule='conjugate')
        self.assertEqual((belief.alpha, belief.beta), (2.0, 2.0))
        self.assertAlmostEqual(belief.mu_hat, 0.4)

    def test_default_config_update_rule(self):
        # Prioris (1, 1) e R_π = 1: a configuração padrão leva a (1, 2)
        cfg = TsgeConfig(horizon=400, num_arms=2)
        self.assertEqual(cfg.update_rule, 'literal')
        success = PullOutcome(reward=1.0, normalized_reward=1.0, slot=0, arms=(1,))
        belief = ts_update(ArmBelief(), success, np.random.default_rng(1), cfg.update_rule)
        self.assertEqual((belief.alpha, belief.beta), (1.0, 2.0))
        self.assertEqual(ClassicTS(2).update_rule, 'literal')

    def test_select_prefers_confident_arm(self):
        beliefs = [ArmBelief(alpha=1.0, beta=500.0), ArmBelief(alpha=1.0, beta=500.0), ArmBelief(alpha=500.0, beta=1.0)]
        rng = np.random.default_rng(3)
        self.assertEqual({ts_select(beliefs, rng) for _ in range(50)}, {2})

    def test_select_is_symmetric_for_equal_beliefs(self):
        draws = 40_000
        beliefs = [ArmBelief(alpha=3.0, beta=3.0) for _ in range(4)]
        rng = np.random.default_rng(17)
        counts = np.bincount([ts_select(beliefs, rng) for _ in range(draws)], minlength=4)
        tolerance = 4 * math.sqrt(0.25 * 0.75 / draws)
        for count in counts:
            self.assertLessEqual(abs(count / draws - 0.25), tolerance)

    def test_select_frequency_matches_posterior(self):
        # Beta(2, 1) contra Beta(1, 2): ℙ(θ_0 > θ_1) = 5/6
        draws = 20_000
        beliefs = [ArmBelief(alpha=2.0, beta=1.0), ArmBelief(alpha=1.0, beta=2.0)]
        rng = np.random.default_rng(29)
        share = np.mean([ts_select(beliefs, rng) == 0 for _ in range(draws)])
        self.assertLessEqual(abs(share - 5 / 6), 4 * math.sqrt((5 / 6) * (1 / 6) / draws))
        confident = [ArmBelief(alpha=1000.0, beta=1.0), ArmBelief(alpha=1.0, beta=1000.0)]
        share = np.mean([ts_select(confident, rng) == 0 for _ in range(10_000)])
        self.assertGreater(share, 0.99)


class TestDetection(TestAgentsBase):

    def test_bp_statistic_scales(self):
        beliefs = beliefs_with_means([0.25, 0.5])
        per_arm = bp_statistic(beliefs, 0.75, 0.1)
        self.assertAlmostEqual(per_arm.value, 0.375)
        self.assertAlmostEqual(per_arm.threshold, 0.4)
        self.assertFalse(per_arm.fired)
        grouped = bp_statistic(beliefs, 0.75, 0.1, statistic_scale='group_sum')
        self.assertAlmostEqual(grouped.value, 0.75)
        self.assertTrue(grouped.fired)
        self.assertFalse(bp_detect(beliefs, 0.375, m=0, delta=0.1))

    def test_default_statistic_compares_means(self):
        beliefs = beliefs_with_means([0.5] * 8)
        # |0.50 - 0.53| = 0.03 < 4δ = 0.2; multiplicada por K = 8 passaria a 0.24
        self.assertFalse(bp_detect(beliefs, 0.53, m=0, delta=0.05))
        self.assertTrue(bp_detect(beliefs, 0.53, m=0, delta=0.05, statistic_scale='group_sum'))
        self.assertEqual(TsgeConfig(horizon=400, num_arms=8).statistic_scale, 'mean')

    def test_threshold_is_inclusive(self):
        beliefs = beliefs_with_means([0.25, 0.5])
        # |0.375 - 0.575| * 2 = 0.4 = 4δ
        self.assertTrue(bp_detect(beliefs, 0.575, m=1, delta=0.1, statistic_scale='group_sum'))
        # |0.375 - 0.775| = 0.4 = 4δ
        self.assertTrue(bp_detect(beliefs, 0.775, m=1, delta=0.1))

    def test_super_arm_codes(self):
        super_arms = construct_super_arms(8)
        self.assertEqual([sa.bit_index for sa in super_arms], [1, 2, 3])
        self.assertEqual(super_arms[0].members, (1, 3, 5, 7))
        self.assertEqual(super_arms[1].members, (2, 3, 6, 7))
        self.assertEqual(super_arms[2].members, (4, 5, 6, 7))
        self.assertEqual(construct_super_arms(1), [])
        with self.assertRaises(ArgumentError):
            construct_super_arms(6)

    def test_super_arm_codes_up_to_1024(self):
        for d in range(1, 11):
            num_arms = 1 << d
            super_arms = construct_super_arms(num_arms)
            self.assertEqual(len(super_arms), d)
            for arm in range(num_arms):
                code = sum(1 << (sa.bit_index - 1) for sa in super_arms if arm in sa.members)
                self.assertEqual(code, arm)
            self.assertTrue(all(len(sa.members) == num_arms // 2 for sa in super_arms))

    def test_ge_identify_noiseless(self):
        means = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
        super_arms = construct_super_arms(8)
        for changed in range(8):
            new_means = list(means)
            new_means[changed] += 0.3
            observed = super_arm_means(super_arms, new_means)
            code = ge_identify(super_arms, observed, beliefs_with_means(means), 0.05, statistic_scale='group_sum')
            self.assertEqual(code, changed)
            self.assertEqual(ge_identify(super_arms, observed, beliefs_with_means(means), 0.0125), changed)

    def test_ge_identify_every_arm_with_padding(self):
        # K real de 2 a 1024, com e sem braços fictícios; δ = 0.25/K_pad deixa |Δ|/|B_k| >= 4δ
        for d in range(1, 11):
            padded = 1 << d
            for num_real in sorted({padded, padded // 2 + 1}):
                super_arms = construct_super_arms(padded)
                means = np.linspace(0.1, 0.4, num_real).tolist()
                beliefs = beliefs_with_means(means)
                delta = 0.25 / padded
                for changed in range(num_real):
                    new_means = list(means)
                    new_means[changed] += 0.5
                    observed = [float(np.mean([new_means[i] for i in sa.real_members(num_real)]))
                                for sa in super_arms]
                    code = ge_identify(super_arms, observed, beliefs, delta)
                    self.assertEqual(code, changed, f"K={num_real} (completado para {padded}), braço {changed}")

    def test_ge_identify_dummy_code(self):
        super_arms = construct_super_arms(8)
        beliefs = beliefs_with_means([0.1, 0.2, 0.3, 0.4, 0.5])
        estimates = [np.mean([0.2, 0.4]), np.mean([0.3, 0.4]), 0.5]
        observed = [estimates[0] + 0.5, estimates[1], estimates[2] + 0.5]
        self.assertIsNone(ge_identify(super_arms, observed, beliefs, 0.05))


class TestRepair(TestAgentsBase):

    def test_repair_from_super_arms(self):
        means = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]
        beliefs = beliefs_with_means(means)
        beliefs[7].alpha, beliefs[7].beta = 5.0, 2.0
        super_arms = construct_super_arms(8)
        new_means = list(means)
        new_means[5] = 0.9
        repair_changed_arm(beliefs, 5, super_arms, super_arm_means(super_arms, new_means), ge_plays=100)
        self.assertAlmostEqual(beliefs[5].mu_hat, 0.9, places=9)
        self.assertEqual(beliefs[5].pull_count, 200)
        self.assertEqual((beliefs[5].alpha, beliefs[5].beta), (5.0, 2.0))

    def test_repair_arm_zero_uses_broadcast_mean(self):
        beliefs = beliefs_with_means([0.1, 0.2, 0.3, 0.4])
        super_arms = construct_super_arms(4)
        bp_mean = (0.5 + 0.2 + 0.3 + 0.4) / 4
        repair_changed_arm(beliefs, 0, super_arms, [0.3, 0.35], bp_mean=bp_mean, bp_plays=27)
        self.assertAlmostEqual(beliefs[0].mu_hat, 0.5, places=9)
        self.assertEqual(beliefs[0].pull_count, 27)

    def test_repair_without_data(self):
        beliefs = beliefs_with_means([0.1, 0.2, 0.3, 0.4])
        with self.assertRaises(ArgumentError):
            repair_changed_arm(beliefs, 0, construct_super_arms(4), [0.3, 0.35])
        with self.assertRaises(ArgumentError):
            repair_changed_arm(beliefs, 4, construct_super_arms(4), [0.3, 0.35])

    def test_nearest_prior_source(self):
        self.assertEqual(nearest_prior_source([0.5, 0.25, 0.75], 0), 1)
        self.assertEqual(nearest_prior_source([0.1, 0.9, 0.85], 1), 2)
        self.assertIsNone(nearest_prior_source([0.5], 0))


class TestTsgeAgent(TestAgentsBase):
    """Execução completa sem ruído: só a mudança programada pode disparar o teste."""

    HORIZON = 4000

    def build(self, seed: int = 5):
        cfg = TsgeConfig(horizon=self.HORIZON, num_arms=4, sigma=0.1, delta=0.05, loc_fail_prob=0.05, seed=seed,
                         update_rule='conjugate', statistic_scale='group_sum')
        agent = TsgeAgent(cfg)
        env = BanditEnv(EnvConfig(
            num_arms=4, sigma=0.0, horizon=self.HORIZON, rng_seed=seed,
            change_start_slot=agent.schedule.T_ETC,
            forced_changes=[{'episode': 5, 'arm': 2, 'delta': -0.4}],
        ))
        return agent, env

    def test_noiseless_run_detects_and_repairs(self):
        agent, env = self.build()
        self.assertEqual(agent.schedule.T_ETC, 2400)
        run = agent.run(env)
        self.assertEqual(len(run.trace), self.HORIZON)
        self.assertEqual(run.agent, 'tsge')

        episodes = run.episodes.set_index('episode')
        self.assertTrue(bool(episodes.loc[5, 'detected']))
        self.assertEqual(int(episodes.loc[5, 'identified_arm']), 2)
        self.assertEqual(int(episodes.loc[5, 'true_changed_arm']), 2)
        self.assertEqual(int(episodes['detected'].sum()), 1)
        self.assertAlmostEqual(agent.beliefs[2].mu_hat, 0.9 * (2 / 3) + 0.1 / 3 - 0.4, places=6)

        schedule = agent.schedule
        self.assertLessEqual(run.max_sampling_age, schedule.T_l + schedule.T_GE)
        self.assertEqual(set(run.trace['phase']), {Phase.ETC.value, Phase.TS.value, Phase.BP.value, Phase.GE.value})
        self.assertGreater(run.final_regret, 0.0)

    def test_same_seed_same_trace(self):
        agent, env = self.build(7)
        first = agent.run(env)
        agent, env = self.build(7)
        second = agent.run(env)
        self.assertEqual(first.trace['arms'].tolist(), second.trace['arms'].tolist())
        self.assertEqual(first.final_regret, second.final_regret)

    def test_run_rejects_mismatched_or_used_env(self):
        agent, env = self.build()
        env.pull(0)
        with self.assertRaises(ArgumentError):
            agent.run(env)
        with self.assertRaises(ArgumentError):
            agent.run(BanditEnv(EnvConfig(num_arms=8, horizon=self.HORIZON)))

    def test_truncated_horizon(self):
        agent, env = self.build()
        run = agent.run(env, horizon=2450)
        self.assertEqual(len(run.trace), 2450)
        self.assertEqual(len(run.episodes), 1)
        self.assertFalse(bool(run.episodes.iloc[0]['detected']))

    def test_env_episodes_follow_agent_when_n_ge_differs(self):
        # p_b = 1: uma mudança no primeiro slot de cada episódio do agente, inclusive dos que têm GE
        horizon = 20_000
        cfg = TsgeConfig(horizon=horizon, num_arms=4, sigma=0.1, loc_fail_prob=0.05, n_ge=30, seed=3,
                         update_rule='conjugate', statistic_scale='group_sum')
        agent = TsgeAgent(cfg)
        schedule = agent.schedule
        self.assertEqual((schedule.T_l, schedule.T_GE, schedule.T_ETC), (141, 60, 2400))
        env = BanditEnv(EnvConfig(num_arms=4, sigma=0.1, horizon=horizon, change_prob_per_slot=1.0,
                                  change_magnitude_range=(0.2, 0.4), change_start_slot=schedule.T_ETC, rng_seed=3))
        run = agent.run(env)
        episodes = run.episodes
        log = env.export_change_log()
        self.assertGreater(int(episodes['detected'].sum()), 0)
        self.assertEqual(log['slot'].tolist(), episodes['start_slot'].tolist())
        self.assertEqual(episodes['true_changed_arm'].tolist(), log['arm'].tolist())
        lengths = (episodes['end_slot'] - episodes['start_slot']).iloc[:-1]
        self.assertTrue(set(lengths) <= {schedule.T_l, schedule.T_l + schedule.T_GE})
        self.assertIn(schedule.T_l + schedule.T_GE, set(lengths))


class TestTsgeLongRuns(TestAgentsBase):
    """Execuções longas com ruído: sondagem obrigatória e taxa de falso alarme."""

    def test_mandatory_probing_bounds_sampling_age(self):
        horizon = 100_000
        for seed in range(3):
            cfg = TsgeConfig(horizon=horizon, num_arms=8, sigma=0.1, seed=seed,
                             update_rule='conjugate', statistic_scale='group_sum')
            agent = TsgeAgent(cfg)
            env = BanditEnv(EnvConfig(num_arms=8, sigma=0.1, horizon=horizon, change_prob_per_slot=0.005,
                                      initial_means=np.linspace(0.2, 0.7, 8).tolist(),
                                      change_start_slot=agent.schedule.T_ETC, rng_seed=100 + seed))
            run = agent.run(env)
            schedule = agent.schedule
            self.assertLessEqual(run.max_sampling_age, schedule.T_l + schedule.T_GE, f"semente {seed}")
            self.assertGreater(len(run.episodes), 0)

    def test_false_alarm_rate_within_closed_form_bound(self):
        horizon, num_arms = 10_000, 8
        episodes = alarms = 0
        for seed in range(10):
            cfg = TsgeConfig(horizon=horizon, num_arms=num_arms, sigma=0.1, loc_fail_prob=0.05, seed=seed,
                             update_rule='conjugate', statistic_scale='group_sum')
            agent = TsgeAgent(cfg)
            env = BanditEnv(EnvConfig(num_arms=num_arms, sigma=0.1, horizon=horizon,
                                      initial_means=np.linspace(0.2, 0.7, num_arms).tolist(), rng_seed=200 + seed))
            run = agent.run(env)
            episodes += len(run.episodes)
            alarms += int(run.episodes['detected'].sum())
        schedule = agent.schedule
        params = analysis.BoundParams(num_arms=num_arms, horizon=horizon, sigma=0.1, delta=cfg.delta,
                                      n_etc=schedule.n_ETC, t_bp=schedule.T_BP, t_ts=schedule.T_TS)
        spread = analysis.detection_sigma(params, [schedule.n_ETC] * num_arms, 'group_sum')
        bound = analysis.p_false_alarm(params, spread, two_sided=True)
        self.assertGreaterEqual(episodes, 10 * schedule.N_l // 2)
        self.assertLessEqual(alarms / episodes, 3.0 * bound + 1.0 / episodes)


class TestClassicTS(TestAgentsBase):

    def test_shares_kernel_with_tsge(self):
        env_cfg = EnvConfig(num_arms=4, sigma=0.0, horizon=400, rng_seed=1)
        classic = ClassicTS(4, seed=21)
        tsge = TsgeAgent(TsgeConfig(horizon=400, num_arms=4, delta=0.05, loc_fail_prob=0.05, seed=21))
        env_a, env_b = BanditEnv(env_cfg), BanditEnv(env_cfg)
        classic_arms = [classic.step(env_a).arms for _ in range(60)]
        tsge_arms = [tsge.ts_step(env_b).arms for _ in range(60)]
        self.assertEqual(classic_arms, tsge_arms)
        self.assertEqual([b.alpha for b in classic.beliefs], [b.alpha for b in tsge.beliefs])

    def test_run_reports_sampling_age(self):
        run = ClassicTS(2, seed=0).run(BanditEnv(EnvConfig(num_arms=2, sigma=0.0, horizon=300,
                                                           initial_means=(0.0, 1.0))))
        self.assertEqual(len(run.trace), 300)
        self.assertGreaterEqual(run.max_sampling_age, 1)
        self.assertEqual(run.agent, 'ts')


class TestMUCB(TestAgentsBase):

    def test_config_validation_and_resolution(self):
        with self.assertRaises(ArgumentError):
            MucbConfig(window=15)
        with self.assertRaises(ArgumentError):
            MucbConfig(exploration_rate=1.5)
        with self.assertRaises(ArgumentError):
            MucbConfig(threshold=-1.0)
        resolved = MucbConfig(window=100).resolve(8, 10_000)
        self.assertAlmostEqual(resolved.threshold, math.sqrt(50.0 * math.log(2.0 * 8 * 10_000 ** 2)))
        self.assertAlmostEqual(resolved.exploration_rate, math.sqrt(8 * math.log(10_000) / 10_000))

    def test_full_exploration_is_round_robin(self):
        agent = MUCB(4, 40, MucbConfig(window=10, exploration_rate=1.0))
        run = agent.run(BanditEnv(EnvConfig(num_arms=4, sigma=0.0, horizon=40)))
        self.assertEqual(run.trace['arms'].tolist(), [(t % 4,) for t in range(40)])
        self.assertEqual(set(run.trace['phase']), {Phase.EXPLORE.value})
        self.assertEqual(run.restarts, [])

    def test_partial_exploration_is_deterministic(self):
        """Com γ = 1/8 e K = 4, a exploração ocupa os 4 primeiros slots de cada bloco de 32, em qualquer semente."""
        explored = []
        for seed in (1, 2):
            agent = MUCB(4, 320, MucbConfig(window=10, exploration_rate=0.125))
            run = agent.run(BanditEnv(EnvConfig(num_arms=4, sigma=0.1, horizon=320, rng_seed=seed)))
            self.assertEqual(run.restarts, [])
            trace = run.trace[run.trace['phase'] == Phase.EXPLORE.value]
            explored.append(trace['slot'].tolist())
            self.assertEqual(trace['arms'].tolist(), [(t % 32,) for t in trace['slot']])
        self.assertEqual(explored[0], [t for t in range(320) if t % 32 < 4])
        self.assertEqual(explored[0], explored[1])

    def test_restart_after_change(self):
        env = BanditEnv(EnvConfig(num_arms=1, sigma=0.0, horizon=200, episode_len=100,
                                  forced_changes=[{'episode': 0, 'arm': 0, 'delta': -0.5, 'offset': 50}]))
        agent = MUCB(1, 200, MucbConfig(window=20, threshold=2.2, exploration_rate=0.0))
        run = agent.run(env)
        self.assertEqual(run.restarts, [54])
        self.assertEqual(agent.tau, 55)
        self.assertEqual(run.extra['window'], 20)

    def test_restart_flushes_history(self):
        env = BanditEnv(EnvConfig(num_arms=1, sigma=0.0, horizon=200, episode_len=100,
                                  forced_changes=[{'episode': 0, 'arm': 0, 'delta': -0.5, 'offset': 50}]))
        agent = MUCB(1, 200, MucbConfig(window=20, threshold=2.2, exploration_rate=0.0))
        run = agent.run(env, horizon=55)
        self.assertEqual(run.restarts, [54])
        self.assertEqual(agent.counts.tolist(), [0])
        self.assertEqual(agent.sums.tolist(), [0.0])
        self.assertEqual([len(w) for w in agent.windows], [0])

    def test_flush_resets_counts_and_exploration_clock(self):
        agent = MUCB(4, 1000, MucbConfig(window=10, exploration_rate=0.5))
        env = BanditEnv(EnvConfig(num_arms=4, sigma=0.0, horizon=1000))
        for _ in range(30):
            agent.step(env)
        self.assertEqual(int(agent.counts.sum()), 30)
        agent.flush(30)
        self.assertEqual(agent.counts.tolist(), [0, 0, 0, 0])
        self.assertEqual(agent.tau, 30)
        self.assertEqual(agent.select(30), (0, Phase.EXPLORE))

# ============================================================================
# Função para Executar Todos os Testes
# ============================================================================

def run_all_agent_tests():
    loader = unittest.defaultTestLoader
    suite = unittest.TestSuite()
    for case in (TestSchedule, TestThompsonKernel, TestDetection, TestRepair, TestTsgeAgent, TestTsgeLongRuns,
                 TestClassicTS, TestMUCB):
        suite.addTests(loader.loadTestsFromTestCase(case))
    result = unittest.TextTestRunner(verbosity=2, stream=sys.stdout).run(suite)
    logger_test_agents.info(f"Testes executados: {result.testsRun}; falhas: {len(result.failures)}; erros: {len(result.errors)}")
    return result.wasSuccessful()


if __name__ == '__main__':
    sys.exit(0 if run_all_agent_tests() else 1)
