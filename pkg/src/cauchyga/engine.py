"""Binary-encoded generational GA with pluggable selection.

One generation is: selection (roulette with replacement under the
configured scheme) -> random pairing -> uniform crossover -> per-bit
mutation -> evaluation. The realized selection strength of a generation is
the L1 distance between the population's NFD before selection and the NFD
of the selected parent pool.

Every random decision of a run comes from one numpy PCG64 generator seeded
from (master_seed, run_index), so replays are bit-identical and distinct
runs are independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .annealing import AnnealingSchedule, constant_schedule, gamma_at
from .benchmarks import (
    ObjectiveSpec,
    evaluate_raw_batch,
    to_fitness_batch,
)
from .nfd import NFD, distance, fitness_distribution_from_values, normalize

GENERATOR_NAME = "numpy-PCG64"
SEED_STRIDE = 0x9E3779B97F4A7C15
_U64 = 0xFFFFFFFFFFFFFFFF

PROPORTIONATE = "proportionate"
BOLTZMANN_CONST = "boltzmann_const"
CAUCHY_BOLTZMANN = "cauchy_boltzmann"
SELECTION_SCHEMES = (PROPORTIONATE, BOLTZMANN_CONST, CAUCHY_BOLTZMANN)


@dataclass(frozen=True, eq=False)
class Genome:
    """Fixed-length bit vector, one gene slice of bits_per_var per variable."""

    bits: np.ndarray  # uint8 values in {0, 1}

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True, eq=False)
class Individual:
    """A genome with its decoded point, raw objective, and fitness.

    The three derived fields are exactly what decode / evaluate / fitness
    mapping produce for the genome; recomputing them reproduces the stored
    values bit-for-bit.
    """

    genome: Genome
    x: np.ndarray
    raw: float
    fitness: float


@dataclass
class GaConfig:
    """Full parameterization of a multi-run GA experiment."""

    objective: ObjectiveSpec
    selection: str
    schedule: AnnealingSchedule = field(default_factory=lambda: constant_schedule(0.0))
    pop_size: int = 150
    generations: int = 100
    crossover_prob: float = 0.8
    mutation_prob_per_bit: float = 0.01
    runs: int = 17
    master_seed: int = 42
    elitism: bool = False
    bits_per_var: int = 5

    def __post_init__(self) -> None:
        if self.selection not in SELECTION_SCHEMES:
            raise ValueError(f"unknown selection scheme: {self.selection!r}")
        if self.pop_size < 1:
            raise ValueError("pop_size must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")
        if not 0.0 <= self.mutation_prob_per_bit <= 0.1:
            raise ValueError("mutation_prob_per_bit must be in [0, 0.1]")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.bits_per_var < 1:
            raise ValueError("bits_per_var must be >= 1")

    @property
    def genome_length(self) -> int:
        return self.objective.dims * self.bits_per_var


@dataclass(frozen=True)
class GenerationRecord:
    """Aggregated view of one generation of one run."""

    generation: int
    gamma: float
    best_so_far_raw: float
    gen_best_raw: float
    mean_raw: float
    strength: float


@dataclass(frozen=True)
class RunSeries:
    """Per-generation records of a single run, in generation order."""

    run_index: int
    seed: int
    records: tuple[GenerationRecord, ...]


@dataclass(frozen=True, eq=False)
class AggregatedSeries:
    """Mean/std across runs of the per-generation quantities.

    Standard deviations are population-style (ddof=0), so a single run
    aggregates with zero spread.
    """

    runs: int
    generations: np.ndarray
    gamma: np.ndarray
    best_mean: np.ndarray
    best_std: np.ndarray
    mean_mean: np.ndarray
    mean_std: np.ndarray
    strength_mean: np.ndarray
    strength_std: np.ndarray


def decode_batch(
    bits: np.ndarray, spec: ObjectiveSpec, bits_per_var: int
) -> np.ndarray:
    """Decode a (n, dims * bits_per_var) bit matrix into (n, dims) points.

    Each gene slice is read big-endian as an unsigned integer v and mapped
    linearly so v = 0 hits the lower bound and v = 2**bits_per_var - 1 hits
    the upper bound exactly.
    """
    n = bits.shape[0]
    if bits.shape[1] != spec.dims * bits_per_var:
        raise ValueError(
            f"genome length {bits.shape[1]} != dims*bits_per_var "
            f"{spec.dims * bits_per_var}"
        )
    weights = 2 ** np.arange(bits_per_var - 1, -1, -1, dtype=np.float64)
    v = bits.reshape(n, spec.dims, bits_per_var).astype(np.float64) @ weights
    denom = float(2**bits_per_var - 1)
    return spec.lower + v / denom * (spec.upper - spec.lower)


def decode(genome: Genome, spec: ObjectiveSpec, bits_per_var: int) -> np.ndarray:
    """Decode one genome into its real vector."""
    return decode_batch(genome.bits[np.newaxis, :], spec, bits_per_var)[0]


def make_population(
    bits: np.ndarray, spec: ObjectiveSpec, bits_per_var: int
) -> list[Individual]:
    """Materialize individuals (decode, evaluate, fitness) from a bit matrix."""
    xs = decode_batch(bits, spec, bits_per_var)
    raws = evaluate_raw_batch(spec, xs)
    fits = to_fitness_batch(spec, raws)
    return [
        Individual(
            genome=Genome(bits[i].copy()),
            x=xs[i].copy(),
            raw=float(raws[i]),
            fitness=float(fits[i]),
        )
        for i in range(bits.shape[0])
    ]


def population_nfd(population: list[Individual]) -> NFD:
    """NFD of a population's fitness values."""
    return normalize(
        fitness_distribution_from_values([ind.fitness for ind in population])
    )


def selection_probabilities(
    population: list[Individual], selection: str, gamma_n: float
) -> np.ndarray:
    """Categorical selection distribution over the population.

    Proportionate weighs each individual by fitness; either Boltzmann
    scheme weighs by exp(gamma_n * fitness), computed with a max-fitness
    shift so large gamma_n cannot overflow. The shift cancels in the
    normalization, which also makes the probabilities invariant under a
    common additive fitness offset.

    Raises:
        ValueError: On an empty population, an unknown scheme, a negative
            gamma_n, or all-zero fitness under proportionate selection.
    """
    if not population:
        raise ValueError("empty population")
    fits = np.array([ind.fitness for ind in population], dtype=np.float64)
    if selection == PROPORTIONATE:
        total = fits.sum()
        if total <= 0.0:
            raise ValueError("degenerate population")
        return fits / total
    if selection in (BOLTZMANN_CONST, CAUCHY_BOLTZMANN):
        if gamma_n < 0.0:
            raise ValueError("inverse temperature must be nonnegative")
        w = np.exp(gamma_n * (fits - fits.max()))
        return w / w.sum()
    raise ValueError(f"unknown selection scheme: {selection!r}")


def select_parents(
    population: list[Individual],
    selection: str,
    gamma_n: float,
    rng: np.random.Generator,
    count: int | None = None,
) -> list[Individual]:
    """Draw parents i.i.d. with replacement from the selection distribution.

    Multinomial roulette: ``count`` draws (population size by default) from
    the categorical distribution of :func:`selection_probabilities`.
    """
    p = selection_probabilities(population, selection, gamma_n)
    k = len(population) if count is None else count
    idx = rng.choice(len(population), size=k, replace=True, p=p)
    return [population[i] for i in idx]


def uniform_crossover(
    a: Genome, b: Genome, crossover_prob: float, rng: np.random.Generator
) -> tuple[Genome, Genome]:
    """Uniform crossover of two equal-length genomes.

    With probability crossover_prob, every bit position independently swaps
    between the pair with probability 1/2; otherwise both parents pass
    through unchanged. Per position the children's bit pair is always a
    permutation of the parents' pair.

    Raises:
        ValueError: On a genome length mismatch.
    """
    if len(a) != len(b):
        raise ValueError("genome length mismatch")
    if rng.random() >= crossover_prob:
        return Genome(a.bits.copy()), Genome(b.bits.copy())
    swap = rng.random(len(a)) < 0.5
    child_a = np.where(swap, b.bits, a.bits).astype(np.uint8)
    child_b = np.where(swap, a.bits, b.bits).astype(np.uint8)
    return Genome(child_a), Genome(child_b)


def mutate(
    genome: Genome, mutation_prob_per_bit: float, rng: np.random.Generator
) -> Genome:
    """Flip each bit independently with the given probability."""
    if not 0.0 <= mutation_prob_per_bit <= 1.0:
        raise ValueError("mutation probability must be in [0, 1]")
    flips = rng.random(len(genome)) < mutation_prob_per_bit
    return Genome(np.where(flips, 1 - genome.bits, genome.bits).astype(np.uint8))


def step_generation(
    population: list[Individual],
    config: GaConfig,
    generation_index: int,
    rng: np.random.Generator,
    best_so_far: float = np.inf,
) -> tuple[list[Individual], GenerationRecord]:
    """Advance one generation and report its record.

    ``best_so_far`` is the running minimum raw objective entering the
    generation; the returned record folds in the new population. The
    generation's gamma is taken from the schedule at ``generation_index``
    (constant schedules just return their fixed value); proportionate
    selection records gamma as 0.

    The crossover pairing walks a fresh random permutation of the selected
    pool two at a time. With an odd pool the leftover is paired against a
    random earlier parent and only the leftover-side child is kept.
    """
    if len(population) != config.pop_size:
        raise ValueError("population size does not match config")

    if config.selection == PROPORTIONATE:
        gamma_n = 0.0
    else:
        gamma_n = gamma_at(config.schedule, generation_index)

    phi_before = population_nfd(population)
    parents = select_parents(population, config.selection, gamma_n, rng)
    phi_after = population_nfd(parents)
    strength = distance(phi_before, phi_after)

    order = rng.permutation(config.pop_size)
    child_genomes: list[Genome] = []
    for j in range(0, config.pop_size - 1, 2):
        ga, gb = parents[order[j]].genome, parents[order[j + 1]].genome
        ca, cb = uniform_crossover(ga, gb, config.crossover_prob, rng)
        child_genomes.extend((ca, cb))
    if config.pop_size % 2 == 1:
        leftover = parents[order[-1]].genome
        partner = parents[order[int(rng.integers(0, config.pop_size - 1))]].genome
        child, _ = uniform_crossover(leftover, partner, config.crossover_prob, rng)
        child_genomes.append(child)

    mutated = [
        mutate(g, config.mutation_prob_per_bit, rng) for g in child_genomes
    ]
    bits = np.stack([g.bits for g in mutated])
    next_population = make_population(bits, config.objective, config.bits_per_var)

    if config.elitism:
        best_parent = min(population, key=lambda ind: ind.raw)
        worst_child = max(range(len(next_population)),
                          key=lambda i: next_population[i].raw)
        next_population[worst_child] = best_parent

    raws = np.array([ind.raw for ind in next_population])
    gen_best = float(raws.min())
    record = GenerationRecord(
        generation=generation_index,
        gamma=gamma_n,
        best_so_far_raw=min(best_so_far, gen_best),
        gen_best_raw=gen_best,
        mean_raw=float(raws.mean()),
        strength=strength,
    )
    return next_population, record


def run_seed(master_seed: int, run_index: int) -> int:
    """64-bit stream seed for one run."""
    return (master_seed ^ (run_index * SEED_STRIDE)) & _U64


def run(config: GaConfig, run_index: int) -> RunSeries:
    """Execute one full GA run, deterministic in (master_seed, run_index)."""
    seed = run_seed(config.master_seed, run_index)
    rng = np.random.Generator(np.random.PCG64(seed))
    bits = rng.integers(
        0, 2, size=(config.pop_size, config.genome_length), dtype=np.uint8
    )
    population = make_population(bits, config.objective, config.bits_per_var)
    best = min(ind.raw for ind in population)

    records: list[GenerationRecord] = []
    for gen in range(1, config.generations + 1):
        population, record = step_generation(population, config, gen, rng, best)
        best = record.best_so_far_raw
        records.append(record)
    return RunSeries(run_index=run_index, seed=seed, records=tuple(records))


def aggregate(series: list[RunSeries]) -> AggregatedSeries:
    """Combine runs into per-generation mean/std, ordered by run_index.

    The combination is order-independent: series are sorted by run index
    before stacking, so any execution order yields identical output.
    """
    if not series:
        raise ValueError("no runs to aggregate")
    ordered = sorted(series, key=lambda s: s.run_index)
    n_gen = len(ordered[0].records)
    for s in ordered:
        if len(s.records) != n_gen:
            raise ValueError("runs have differing generation counts")

    def stack(attr: str) -> np.ndarray:
        return np.array(
            [[getattr(r, attr) for r in s.records] for s in ordered]
        )

    best = stack("best_so_far_raw")
    mean = stack("mean_raw")
    strength = stack("strength")
    return AggregatedSeries(
        runs=len(ordered),
        generations=np.arange(1, n_gen + 1),
        gamma=np.array([r.gamma for r in ordered[0].records]),
        best_mean=best.mean(axis=0),
        best_std=best.std(axis=0),
        mean_mean=mean.mean(axis=0),
        mean_std=mean.std(axis=0),
        strength_mean=strength.mean(axis=0),
        strength_std=strength.std(axis=0),
    )


def multi_run(config: GaConfig) -> AggregatedSeries:
    """Run the configured number of independent runs and aggregate them."""
    return aggregate([run(config, i) for i in range(config.runs)])
