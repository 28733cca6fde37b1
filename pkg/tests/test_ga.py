import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from circuitnet import (
    ContractViolation,
    GaConfig,
    TruthTable,
    analyze,
    evolve,
    fitness,
    mutate,
    parse_truth_table,
    random_population,
    uniform_crossover,
)
from circuitnet.ga import default_m

TABLE1 = parse_truth_table("01000100", 3)


def cfg(**kw):
    base = dict(n=3, target_r=3, target_d=2, m=1000, population=200, max_generations=100, seed=0)
    base.update(kw)
    return GaConfig(**base)


class TestConfig:
    def test_default_m(self):
        assert GaConfig(n=5, target_r=12, target_d=9).m == 1024 + 256 + 1
        assert default_m(3) == 81

    @pytest.mark.parametrize("bad", [
        dict(target_r=9), dict(target_r=0), dict(target_d=5), dict(target_d=-1),
        dict(elite_count=0), dict(elite_count=200), dict(mutation_rate=1.5),
        dict(fitness_mode="nope"), dict(trace_every=0),
    ])
    def test_invalid(self, bad):
        with pytest.raises(ContractViolation):
            cfg(**bad)

    @given(st.integers(1, 8), st.data())
    def test_default_m_keeps_fitness_positive(self, n, data):
        r_t = data.draw(st.integers(1, 1 << n))
        d_t = data.draw(st.integers(0, 1 << (n - 1)))
        c = GaConfig(n=n, target_r=r_t, target_d=d_t, population=2, elite_count=1)
        for r in (1, 1 << n):
            for d in (0, 1 << (n - 1)):
                assert c.m - (r_t - r) ** 2 - (d_t - d) ** 2 > 0


class TestFitness:
    def test_exact_hit(self):
        assert fitness(TABLE1, cfg()) == 1000

    def test_arithmetic(self):
        # constant zero at n=3 has r=1, d=4: deviations 2 and 1
        zero = TruthTable.constant(3)
        assert fitness(zero, cfg(target_r=3, target_d=3)) == 995
        assert fitness(zero, cfg(target_r=3, target_d=3, fitness_mode="printed")) == 1000 - 4 + 1
        assert fitness(zero, cfg(target_r=3, target_d=3, fitness_mode="r_only")) == 1000 - 4

    def test_width_mismatch(self):
        with pytest.raises(ContractViolation):
            fitness(TruthTable.constant(2), cfg())

    @given(st.integers(0, 255), st.integers(1, 8), st.integers(0, 4))
    def test_argmax_invariance(self, code, r_t, d_t):
        gene = TruthTable.from_code(3, code)
        a = analyze(gene)
        c = cfg(target_r=r_t, target_d=d_t)
        assert (fitness(gene, c) == c.m) == ((a.max_cycle_r, a.goe_count_d) == (r_t, d_t))


class TestOperators:
    def test_crossover_identical_parents(self):
        rng = np.random.default_rng(0)
        assert uniform_crossover(TABLE1, TABLE1, rng) == TABLE1

    def test_crossover_binomial_mean(self):
        rng = np.random.default_rng(1)
        zeros, ones = TruthTable.constant(3), TruthTable.constant(3, True)
        counts = [sum(uniform_crossover(zeros, ones, rng).bits) for _ in range(10_000)]
        assert abs(np.mean(counts) - 4.0) < 0.15

    @given(st.integers(0, 2 ** 16 - 1), st.integers(0, 2 ** 16 - 1), st.integers(0, 1000))
    def test_crossover_preserves_agreement(self, ca, cb, seed):
        a, b = TruthTable.from_code(4, ca), TruthTable.from_code(4, cb)
        child = uniform_crossover(a, b, np.random.default_rng(seed))
        for x, y, z in zip(a.bits, b.bits, child.bits):
            if x == y:
                assert z == x
            else:
                assert z in (x, y)

    def test_crossover_width_mismatch(self):
        with pytest.raises(ContractViolation):
            uniform_crossover(TABLE1, TruthTable.constant(2), np.random.default_rng(0))

    def test_mutate_extremes(self):
        rng = np.random.default_rng(2)
        assert mutate(TABLE1, 0.0, rng) == TABLE1
        assert mutate(TABLE1, 1.0, rng).code == 0xFF ^ 0x22

    def test_mutate_rate(self):
        rng = np.random.default_rng(3)
        gene = TruthTable.constant(4)
        flips = [sum(mutate(gene, 0.01, rng).bits) for _ in range(100_000)]
        assert abs(np.mean(flips) - 0.16) < 0.01

    def test_mutate_bad_rate(self):
        with pytest.raises(ContractViolation):
            mutate(TABLE1, -0.1, np.random.default_rng(0))

    def test_random_population(self):
        c = GaConfig(n=4, target_r=3, target_d=2)
        pop = random_population(c, np.random.default_rng(5))
        assert len(pop) == 1000 and all(len(g.bits) == 16 for g in pop)
        assert abs(np.mean([g.bits for g in pop]) - 0.5) < 0.02
        assert pop == random_population(c, np.random.default_rng(5))


class TestEvolve:
    def test_finds_table1_target(self):
        res = evolve(cfg(seed=4))
        assert res.success
        assert (res.best_analysis.max_cycle_r, res.best_analysis.goe_count_d) == (3, 2)
        assert res.best_fitness == 1000

    def test_seeded_target_hits_generation_zero(self):
        g0 = TruthTable.from_code(5, 0x9A3C5F01)
        a = analyze(g0)
        res = evolve(GaConfig(n=5, target_r=a.max_cycle_r, target_d=a.goe_count_d,
                              population=50, seed=1), initial=[g0])
        assert res.success and res.generations_run == 0
        assert res.fitness_trace == [res.config.m]

    def test_initial_width_checked(self):
        with pytest.raises(ContractViolation):
            evolve(cfg(), initial=[TruthTable.constant(2)])

    def test_result_verified_against_analyze(self):
        res = evolve(GaConfig(n=5, target_r=30, target_d=1, population=100, max_generations=40, seed=2))
        assert res.best_analysis == analyze(res.best_gene)
        assert res.success == (res.best_fitness == res.config.m)

    def test_elitism_monotone(self):
        res = evolve(GaConfig(n=6, target_r=60, target_d=3, population=100, max_generations=60, seed=3))
        assert not res.success
        assert res.generations_run == 60
        assert len(res.fitness_trace) == 61
        assert all(b >= a for a, b in zip(res.fitness_trace, res.fitness_trace[1:]))

    def test_deterministic_across_threads(self):
        c = GaConfig(n=5, target_r=25, target_d=4, population=300, max_generations=30, seed=9)
        a, b, t = evolve(c), evolve(c), evolve(c, threads=4)
        assert a.to_json() == b.to_json() == t.to_json()
        assert a.fitness_trace == t.fitness_trace

    def test_json_shape(self):
        res = evolve(GaConfig(n=4, target_r=12, target_d=1, population=200, max_generations=200,
                              seed=0, trace_every=2))
        data = json.loads(res.to_json())
        assert data["best_gene"] == res.best_gene.to_hex()
        assert (data["r"], data["d"]) == (12, 1)
        assert data["config"]["trace_every"] == 2
        assert data["fitness_trace"] == res.fitness_trace[::2]
        assert set(data) == {"config", "best_gene", "r", "d", "fitness", "generations_run",
                             "success", "fitness_trace"}

    def test_dual_target_beats_r_only(self):
        # (12, 1) is realized by 52 of the 65536 4-variable functions
        def successes(mode):
            return sum(
                evolve(GaConfig(n=4, target_r=12, target_d=1, population=200, max_generations=200,
                                seed=s, fitness_mode=mode)).success
                for s in range(20)
            )
        dual, r_only = successes("penalty"), successes("r_only")
        assert r_only <= dual
        assert dual >= 19
