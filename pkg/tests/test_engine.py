"""Decode, variation operators, generation pipeline, and reproducibility."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cauchyga.annealing import cauchy_schedule, constant_schedule
from cauchyga.benchmarks import evaluate_raw, make_objective, to_fitness
from cauchyga.engine import (
    GaConfig,
    Genome,
    Individual,
    aggregate,
    decode,
    make_population,
    multi_run,
    mutate,
    population_nfd,
    run,
    select_parents,
    selection_probabilities,
    step_generation,
    uniform_crossover,
)
from cauchyga.nfd import distance
from cauchyga.selection import boltzmann_apply, proportionate_apply

RAST = make_objective("rastrigin", 15)


def genome_of(bits) -> Genome:
    return Genome(np.asarray(bits, dtype=np.uint8))


def small_config(**kw) -> GaConfig:
    base = dict(
        objective=make_objective("rastrigin", 3),
        selection="boltzmann_const",
        schedule=constant_schedule(5.0),
        pop_size=20,
        generations=5,
        runs=2,
        master_seed=7,
    )
    base.update(kw)
    return GaConfig(**base)


def test_decode_all_zero_hits_lower_bound():
    g = genome_of([0] * 75)
    x = decode(g, RAST, 5)
    assert np.all(x == -5.12)


def test_decode_all_one_hits_upper_bound():
    g = genome_of([1] * 75)
    x = decode(g, RAST, 5)
    assert np.all(x == 5.12)


def test_decode_big_endian_slice():
    bits = [1, 0, 0, 0, 0] + [0] * 70  # v = 16 in the first variable
    x = decode(genome_of(bits), RAST, 5)
    assert x[0] == pytest.approx(-5.12 + 16 / 31 * 10.24, abs=1e-15)
    assert x[0] == pytest.approx(0.16516, abs=1e-5)
    assert np.all(x[1:] == -5.12)


def test_decode_is_bijection_on_gene_slices():
    spec = make_objective("rastrigin", 1)
    values = set()
    for v in range(32):
        bits = [(v >> (4 - j)) & 1 for j in range(5)]
        values.add(float(decode(genome_of(bits), spec, 5)[0]))
    assert len(values) == 32


def test_decode_rejects_wrong_length():
    with pytest.raises(ValueError, match="genome length"):
        decode(genome_of([0] * 74), RAST, 5)


def test_individual_fields_recompute_bit_exactly():
    rng = np.random.default_rng(61)
    bits = rng.integers(0, 2, size=(150, 75), dtype=np.uint8)
    for ind in make_population(bits, RAST, 5):
        assert np.array_equal(decode(ind.genome, RAST, 5), ind.x)
        assert evaluate_raw(RAST, ind.x) == ind.raw
        assert to_fitness(RAST, ind.raw) == ind.fitness


def test_select_parents_single_individual():
    rng = np.random.default_rng(67)
    pop = make_population(np.zeros((1, 75), dtype=np.uint8), RAST, 5)
    out = select_parents(pop, "boltzmann_const", 2.0, rng, count=5)
    assert len(out) == 5
    assert all(o is pop[0] for o in out)


def test_gamma_zero_boltzmann_is_uniform():
    rng = np.random.default_rng(71)
    bits = rng.integers(0, 2, size=(10, 75), dtype=np.uint8)
    pop = make_population(bits, RAST, 5)
    p = selection_probabilities(pop, "boltzmann_const", 0.0)
    assert np.allclose(p, 0.1, atol=1e-15)


def test_boltzmann_selection_two_individuals_hand_computed():
    # fitness gap of exactly 1 at gamma = ln 3 puts 3/4 on the fitter one
    bits = np.zeros((2, 75), dtype=np.uint8)
    base = make_population(bits, RAST, 5)
    lo, hi = RAST.raw_lower, RAST.raw_upper
    pop = [
        Individual(genome=base[0].genome, x=base[0].x, raw=hi, fitness=0.0),
        Individual(genome=base[1].genome, x=base[1].x, raw=lo, fitness=1.0),
    ]
    p = selection_probabilities(pop, "boltzmann_const", math.log(3.0))
    assert p[1] == pytest.approx(0.75, abs=1e-12)
    rng = np.random.default_rng(73)
    draws = select_parents(pop, "boltzmann_const", math.log(3.0), rng, count=100_000)
    frac = sum(1 for d in draws if d.fitness == 1.0) / 100_000
    assert frac == pytest.approx(0.75, abs=0.01)


def test_boltzmann_probabilities_shift_invariant():
    rng = np.random.default_rng(79)
    bits = rng.integers(0, 2, size=(30, 75), dtype=np.uint8)
    pop = make_population(bits, RAST, 5)
    shifted = [
        Individual(genome=ind.genome, x=ind.x, raw=ind.raw,
                   fitness=ind.fitness + 0.37)
        for ind in pop
    ]
    p1 = selection_probabilities(pop, "cauchy_boltzmann", 12.0)
    p2 = selection_probabilities(shifted, "cauchy_boltzmann", 12.0)
    assert np.max(np.abs(p1 - p2)) <= 1e-12


def test_proportionate_rejects_all_zero_fitness():
    bits = np.zeros((3, 75), dtype=np.uint8)
    pop = make_population(bits, RAST, 5)
    dead = [
        Individual(genome=ind.genome, x=ind.x, raw=ind.raw, fitness=0.0)
        for ind in pop
    ]
    with pytest.raises(ValueError, match="degenerate population"):
        selection_probabilities(dead, "proportionate", 0.0)


def test_sampling_matches_operator_expectation():
    rng = np.random.default_rng(83)
    values = rng.choice(np.round(rng.uniform(0.1, 1.0, size=8), 3), size=150)
    bits = np.zeros((150, 75), dtype=np.uint8)
    pop = make_population(bits, RAST, 5)
    pop = [
        Individual(genome=ind.genome, x=ind.x, raw=ind.raw, fitness=float(v))
        for ind, v in zip(pop, values)
    ]
    phi = population_nfd(pop)
    for scheme, gamma, operator in (
        ("cauchy_boltzmann", 3.0, lambda p: boltzmann_apply(p, 3.0)),
        ("proportionate", 0.0, proportionate_apply),
    ):
        drawn = select_parents(pop, scheme, gamma, rng, count=100_000)
        empirical = population_nfd(drawn)
        assert distance(empirical, operator(phi)) <= 0.02


def test_crossover_identical_parents_fixed():
    rng = np.random.default_rng(89)
    a = genome_of(rng.integers(0, 2, 75))
    ca, cb = uniform_crossover(a, Genome(a.bits.copy()), 1.0, rng)
    assert np.array_equal(ca.bits, a.bits)
    assert np.array_equal(cb.bits, a.bits)


def test_crossover_probability_zero_is_identity():
    rng = np.random.default_rng(97)
    a = genome_of(rng.integers(0, 2, 75))
    b = genome_of(rng.integers(0, 2, 75))
    ca, cb = uniform_crossover(a, b, 0.0, rng)
    assert np.array_equal(ca.bits, a.bits) and np.array_equal(cb.bits, b.bits)


def test_crossover_preserves_positionwise_multiset():
    rng = np.random.default_rng(101)
    for _ in range(50):
        a = genome_of(rng.integers(0, 2, 75))
        b = genome_of(rng.integers(0, 2, 75))
        ca, cb = uniform_crossover(a, b, 1.0, rng)
        assert np.array_equal(ca.bits + cb.bits, a.bits + b.bits)


def test_crossover_complementary_parents_stay_complementary():
    rng = np.random.default_rng(103)
    for _ in range(50):
        a = genome_of(rng.integers(0, 2, 75))
        b = genome_of(1 - a.bits)
        ca, cb = uniform_crossover(a, b, 1.0, rng)
        assert np.array_equal(ca.bits, 1 - cb.bits)


def test_crossover_rejects_length_mismatch():
    rng = np.random.default_rng(107)
    with pytest.raises(ValueError, match="length mismatch"):
        uniform_crossover(genome_of([0] * 75), genome_of([0] * 70), 0.5, rng)


def test_mutate_edge_probabilities():
    rng = np.random.default_rng(109)
    g = genome_of(rng.integers(0, 2, 75))
    assert np.array_equal(mutate(g, 0.0, rng).bits, g.bits)
    assert np.array_equal(mutate(g, 1.0, rng).bits, 1 - g.bits)


def test_mutate_flip_count_matches_binomial_mean():
    rng = np.random.default_rng(113)
    g = genome_of(np.zeros(75, dtype=np.uint8))
    flips = [int(mutate(g, 0.01, rng).bits.sum()) for _ in range(100_000)]
    assert np.mean(flips) == pytest.approx(0.75, abs=0.03)


def test_step_no_variation_point_mass_is_stationary():
    cfg = small_config(crossover_prob=0.0, mutation_prob_per_bit=0.0)
    bits = np.tile(
        np.random.default_rng(127).integers(0, 2, 15, dtype=np.uint8), (20, 1)
    )
    pop = make_population(bits, cfg.objective, 5)
    rng = np.random.default_rng(131)
    nxt, rec = step_generation(pop, cfg, 1, rng)
    assert rec.strength == 0.0
    assert all(np.array_equal(a.genome.bits, b.genome.bits) for a, b in zip(pop, nxt))


def test_step_huge_gamma_takes_over():
    cfg = small_config(
        crossover_prob=0.0,
        mutation_prob_per_bit=0.0,
        schedule=constant_schedule(1e6),
    )
    rng = np.random.default_rng(137)
    bits = rng.integers(0, 2, size=(20, 15), dtype=np.uint8)
    pop = make_population(bits, cfg.objective, 5)
    best = max(pop, key=lambda ind: ind.fitness)
    nxt, _ = step_generation(pop, cfg, 1, rng)
    assert all(ind.fitness == best.fitness for ind in nxt)


def test_step_preserves_population_size():
    for pop_size in (20, 21):  # even and odd pairing paths
        cfg = small_config(pop_size=pop_size)
        rng = np.random.default_rng(139)
        bits = rng.integers(0, 2, size=(pop_size, 15), dtype=np.uint8)
        pop = make_population(bits, cfg.objective, 5)
        nxt, _ = step_generation(pop, cfg, 1, rng)
        assert len(nxt) == pop_size


def test_run_single_generation_series():
    cfg = small_config(generations=1)
    series = run(cfg, 0)
    assert len(series.records) == 1


def test_run_is_deterministic():
    cfg = small_config()
    assert run(cfg, 0) == run(cfg, 0)
    assert run(cfg, 0) != run(cfg, 1)


def test_best_so_far_nonincreasing():
    cfg = small_config(generations=40)
    series = run(cfg, 3)
    best = [r.best_so_far_raw for r in series.records]
    assert all(b <= a for a, b in zip(best, best[1:]))
    gen_best = [r.gen_best_raw for r in series.records]
    assert all(b <= g for b, g in zip(best, gen_best))


def test_multi_run_single_run_zero_std():
    cfg = small_config(runs=1)
    agg = multi_run(cfg)
    assert np.all(agg.best_std == 0.0)
    assert np.all(agg.mean_std == 0.0)


def test_multi_run_reproducible_and_order_independent():
    cfg = small_config()
    a = multi_run(cfg)
    b = aggregate([run(cfg, i) for i in reversed(range(cfg.runs))])
    assert np.array_equal(a.best_mean, b.best_mean)
    assert np.array_equal(a.strength_mean, b.strength_mean)


def test_elitism_keeps_best_from_worsening():
    cfg = small_config(elitism=True, generations=30, mutation_prob_per_bit=0.05)
    series = run(cfg, 0)
    gen_best = [r.gen_best_raw for r in series.records]
    assert all(b <= a + 1e-12 for a, b in zip(gen_best, gen_best[1:]))


def test_config_validation():
    with pytest.raises(ValueError, match="unknown selection"):
        small_config(selection="rank")
    with pytest.raises(ValueError, match="mutation_prob_per_bit"):
        small_config(mutation_prob_per_bit=0.2)
    with pytest.raises(ValueError, match="crossover_prob"):
        small_config(crossover_prob=1.5)
    with pytest.raises(ValueError, match="pop_size"):
        small_config(pop_size=0)


def test_cauchy_scheme_uses_schedule_gamma():
    cfg = small_config(
        selection="cauchy_boltzmann", schedule=cauchy_schedule(1.0, 2.0),
        generations=3,
    )
    series = run(cfg, 0)
    gammas = [r.gamma for r in series.records]
    assert gammas == pytest.approx([1.0, 1.25, 1.0 + 0.25 + 1 / 9], abs=1e-12)


def test_proportionate_records_zero_gamma():
    cfg = small_config(selection="proportionate", generations=2)
    series = run(cfg, 0)
    assert all(r.gamma == 0.0 for r in series.records)
