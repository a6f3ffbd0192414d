"""Name attack: a genetic search that minimizes the victim's output quality.

Chromosomes index into the per-sub-word candidate lists: gene i picks
candidate genes[i] of list i, with 0 meaning "keep the original sub-word".
Seeding every population with the all-zero chromosome plus elitism makes
best_fitness <= original_fitness a structural guarantee, not a hope.

Selection is roulette on (1 - fitness), crossover is single-point, and
mutation resamples each gene uniformly over its own range. A run stops
early once its minimum has not improved by at least MIN_IMPROVEMENT for
early_stop consecutive generations.
"""
from __future__ import annotations

import hashlib
import random
import threading
from dataclasses import dataclass

from .core import AdversarialRecord, RunStats, Sample
from .modelio import EndpointError, ProtocolError
from .morph import CandidateSet

MIN_IMPROVEMENT = 1e-9

FOO_NAME = "foo"

ATTACK_KINDS = ("ga", "foo", "random")


@dataclass(frozen=True)
class GaConfig:
    size_population: int = 20
    max_iterations: int = 50
    crossover_prob: float = 0.9
    mutation_prob: float = 0.001
    early_stop: int = 3
    repeats: int = 30
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.size_population < 2 or self.size_population % 2:
            raise ValueError("size_population must be even and at least 2")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.early_stop < 1:
            raise ValueError("early_stop must be at least 1")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


class CachingOracle:
    """Memoizes fitness by (sample id, candidate name) and counts real queries.

    The wrapped callable is (sample, name) -> fitness in [0, 1]. Safe to
    share between worker threads.
    """

    def __init__(self, fn):
        self._fn = fn
        self._memo: dict[tuple[str, str], float] = {}
        self._lock = threading.Lock()
        self.queries = 0

    def __call__(self, sample: Sample, name: str) -> float:
        key = (sample.id, name)
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = float(self._fn(sample, name))
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"fitness {value} outside [0, 1] for {key}")
        with self._lock:
            self._memo[key] = value
            self.queries += 1
        return value


def derive_run_seed(seed: int, sample_id: str, run: int) -> int:
    digest = hashlib.sha256(f"{seed}:{sample_id}:{run}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _random_genes(rng: random.Random, sizes: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(rng.randint(0, k) for k in sizes)


def _roulette(rng: random.Random, fitnesses: list[float]) -> int:
    weights = [1.0 - f for f in fitnesses]
    total = sum(weights)
    if total <= 0.0:
        return rng.randrange(len(fitnesses))
    x = rng.random() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if x < acc:
            return i
    return len(fitnesses) - 1


def _crossover(
    rng: random.Random, a: tuple[int, ...], b: tuple[int, ...], prob: float
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if len(a) < 2 or rng.random() >= prob:
        return a, b
    point = rng.randrange(1, len(a))
    return a[:point] + b[point:], b[:point] + a[point:]


def _mutate(
    rng: random.Random, genes: tuple[int, ...], sizes: tuple[int, ...], prob: float
) -> tuple[int, ...]:
    out = list(genes)
    for i, k in enumerate(sizes):
        if rng.random() < prob:
            out[i] = rng.randint(0, k)
    return tuple(out)


def _ga_run(
    sample: Sample,
    candidates: CandidateSet,
    oracle,
    cfg: GaConfig,
    rng: random.Random,
) -> tuple[tuple[int, ...], float, int]:
    """One seeded GA run; returns (best genes, best fitness, generations)."""
    sizes = candidates.sizes
    zero = tuple(0 for _ in sizes)
    population = [zero]
    while len(population) < cfg.size_population:
        population.append(_random_genes(rng, sizes))

    fitness_of = {}

    def evaluate(genes: tuple[int, ...]) -> float:
        if genes not in fitness_of:
            fitness_of[genes] = oracle(sample, candidates.decode(genes))
        return fitness_of[genes]

    best_genes = zero
    best_fitness = evaluate(zero)
    previous_generation_min = None
    stall = 0
    generations = 0
    for _ in range(cfg.max_iterations):
        generations += 1
        fits = [evaluate(genes) for genes in population]
        generation_min = min(fits)
        if previous_generation_min is not None:
            # elitism carries the incumbent, so the floor cannot rise
            assert generation_min <= previous_generation_min + 1e-15
        previous_generation_min = generation_min

        improvement = best_fitness - generation_min
        if generation_min < best_fitness:
            best_fitness = generation_min
            best_genes = population[fits.index(generation_min)]
        if improvement < MIN_IMPROVEMENT:
            stall += 1
            if stall >= cfg.early_stop:
                break
        else:
            stall = 0

        elite = population[fits.index(min(fits))]
        offspring = [elite]
        while len(offspring) < cfg.size_population:
            pa = population[_roulette(rng, fits)]
            pb = population[_roulette(rng, fits)]
            ca, cb = _crossover(rng, pa, pb, cfg.crossover_prob)
            offspring.append(_mutate(rng, ca, sizes, cfg.mutation_prob))
            if len(offspring) < cfg.size_population:
                offspring.append(_mutate(rng, cb, sizes, cfg.mutation_prob))
        population = offspring
    return best_genes, best_fitness, generations


def ga_attack(
    sample: Sample,
    candidates: CandidateSet,
    oracle,
    cfg: GaConfig,
) -> AdversarialRecord:
    """cfg.repeats independent runs; the record keeps the best of all runs."""
    original_fitness = oracle(sample, sample.method_name)
    best_name = sample.method_name
    best_fitness = original_fitness

    if all(k == 0 for k in candidates.sizes):
        return AdversarialRecord(
            sample_id=sample.id,
            attack_kind="ga",
            original_name=sample.method_name,
            adversarial_name=sample.method_name,
            original_fitness=original_fitness,
            best_fitness=original_fitness,
            runs=(),
            unchanged=True,
        )

    run_stats: list[RunStats] = []
    for run in range(cfg.repeats):
        rng = random.Random(derive_run_seed(cfg.rng_seed, sample.id, run))
        queries_before = getattr(oracle, "queries", 0)
        try:
            genes, fitness, generations = _ga_run(sample, candidates, oracle, cfg, rng)
        except (EndpointError, ProtocolError) as exc:
            run_stats.append(
                RunStats(
                    best_fitness=best_fitness,
                    generations=0,
                    queries=getattr(oracle, "queries", 0) - queries_before,
                    error=f"{exc.__class__.__name__}: {exc}",
                )
            )
            continue
        run_stats.append(
            RunStats(
                best_fitness=fitness,
                generations=generations,
                queries=getattr(oracle, "queries", 0) - queries_before,
            )
        )
        if fitness < best_fitness:
            best_fitness = fitness
            best_name = candidates.decode(genes)

    return AdversarialRecord(
        sample_id=sample.id,
        attack_kind="ga",
        original_name=sample.method_name,
        adversarial_name=best_name,
        original_fitness=original_fitness,
        best_fitness=best_fitness,
        runs=tuple(run_stats),
        unchanged=best_name == sample.method_name,
    )


def baseline_attack(
    sample: Sample,
    kind: str,
    candidates: CandidateSet | None = None,
    rng: random.Random | None = None,
) -> tuple[str, bool]:
    """Foo and Random baselines; returns (name, unchanged flag)."""
    if kind == "foo":
        return FOO_NAME, False
    if kind != "random":
        raise ValueError(f"unknown baseline kind {kind!r}")
    if candidates is None:
        raise ValueError("random baseline needs a candidate set")
    if all(k == 0 for k in candidates.sizes):
        return sample.method_name, True
    rng = rng or random.Random()
    genes = _random_genes(rng, candidates.sizes)
    name = candidates.decode(genes)
    if name == sample.method_name:
        genes = _random_genes(rng, candidates.sizes)
        name = candidates.decode(genes)
    return name, name == sample.method_name
