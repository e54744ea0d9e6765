"""Generation loop shared by NSGA-II and NSGA-III.

Each iteration: build N offspring (mutation only, or random pairing +
uniform crossover + mutation), rank parents and offspring together, carry
over all fronts that fit, and fill the remaining slots from the critical
front via reference-point niching (NSGA-III) or crowding distance
(NSGA-II). One run owns its generator and is strictly sequential; separate
runs share nothing mutable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import genome as gn
from .analysis import RunRecord, coverage, detect_loss
from .dominance import fast_nondominated_sort
from .normalization import NormalizationState, normalize, update_ideal_and_worst
from .problems import Problem, make_problem
from .refpoints import ReferencePointSet, generate_reference_points
from .selection import associate, crowding_distance_select, niching_select

__all__ = ["RunConfig", "GenerationState", "make_offspring", "run_iteration", "run"]

STOP_POLICIES = ("iters", "coverage", "monitor")

CROSSOVER_SWAP_PROB = 0.5


@dataclass(frozen=True)
class RunConfig:
    """Everything one optimization run needs, including its seed."""

    problem: str  # 'omm' or '3omm'
    n: int
    pop_size: int
    algorithm: str  # 'nsga2' or 'nsga3'
    divisions: int | None = None  # reference lattice divisions, nsga3 only
    crossover_rate: float = 0.0
    mutation_prob: float | None = None  # defaults to 1/n
    max_iterations: int = 1000
    seed: object = 0  # anything numpy's default_rng accepts
    stop: str = "iters"
    run_id: str = "run0"

    def validate(self) -> None:
        make_problem(self.problem, self.n)
        if self.pop_size < 1:
            raise ValueError(f"population size must be >= 1, got {self.pop_size}")
        if self.algorithm not in ("nsga2", "nsga3"):
            raise ValueError(f"algorithm must be nsga2 or nsga3, got {self.algorithm!r}")
        if self.algorithm == "nsga3":
            if self.divisions is None or self.divisions < 1:
                raise ValueError("nsga3 requires divisions >= 1")
        elif self.divisions is not None:
            raise ValueError("divisions only applies to nsga3")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError(f"crossover rate must be in [0, 1], got {self.crossover_rate}")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError(f"mutation probability must be in [0, 1], got {self.mutation_prob}")
        if self.max_iterations < 0:
            raise ValueError(f"max iterations must be >= 0, got {self.max_iterations}")
        if self.stop not in STOP_POLICIES:
            raise ValueError(f"stop policy must be one of {STOP_POLICIES}, got {self.stop!r}")

    @property
    def effective_mutation_prob(self) -> float:
        return 1.0 / self.n if self.mutation_prob is None else self.mutation_prob


@dataclass
class GenerationState:
    """Mutable per-run state carried across iterations."""

    population: np.ndarray  # (N, n) bits
    norm: NormalizationState
    iteration: int = 0


@dataclass
class IterationStats:
    """What one survivor-selection step did."""

    critical_rank: int  # i*, 1-based
    carried: int  # individuals from fronts before i*
    filled: int  # individuals chosen from the critical front


def make_offspring(
    population: np.ndarray, config: RunConfig, rng: np.random.Generator
) -> np.ndarray:
    """N offspring from N parents.

    With crossover rate 0 every parent is mutated once. Otherwise the
    population is randomly partitioned into pairs, each pair is uniformly
    crossed over with probability ``crossover_rate`` (a leftover individual
    under odd N skips crossover), and every result is mutated.
    """
    flip = config.effective_mutation_prob
    chi = config.crossover_rate
    if chi == 0.0:
        return gn.mutate_population(population, flip, rng)

    size = population.shape[0]
    perm = rng.permutation(size)
    paired = size - size % 2
    children = population[perm].copy()
    num_pairs = paired // 2
    do_cross = rng.random(num_pairs) < chi
    swap_masks = rng.random((num_pairs, population.shape[1])) < CROSSOVER_SWAP_PROB
    for pair in np.flatnonzero(do_cross):
        i, j = 2 * pair, 2 * pair + 1
        mask = swap_masks[pair]
        a = children[i].copy()
        children[i] = np.where(mask, children[j], a)
        children[j] = np.where(mask, a, children[j])
    return gn.mutate_population(children, flip, rng)


def _select_survivors(
    values: np.ndarray,
    fronts: list[np.ndarray],
    config: RunConfig,
    state: GenerationState,
    refs: ReferencePointSet | None,
    rng: np.random.Generator,
) -> tuple[np.ndarray, IterationStats]:
    """Indices (into the combined population) surviving this iteration."""
    size = config.pop_size
    total = 0
    i_star = 0
    while total < size:
        total += len(fronts[i_star])
        i_star += 1
    carried = (
        np.concatenate(fronts[: i_star - 1])
        if i_star > 1
        else np.array([], dtype=np.int64)
    )
    critical = fronts[i_star - 1]
    k = size - carried.size

    if k == critical.size:
        # whole critical front fits exactly; geometry not needed, but the
        # running ideal/worst estimates still advance
        pool = np.concatenate([carried, critical])
        state.norm = update_ideal_and_worst(state.norm, values[pool])
        chosen = critical
    elif config.algorithm == "nsga3":
        pool = np.concatenate([carried, critical])
        front_values = [values[f] for f in fronts]
        normalizer, state.norm = normalize(state.norm, values[pool], front_values)
        nvals = normalizer(values[pool])
        assoc = associate(nvals, refs, rng)
        sel = niching_select(
            selected_refs=assoc.ref_index[: carried.size],
            cand_refs=assoc.ref_index[carried.size :],
            cand_dists=assoc.distance[carried.size :],
            k=k,
            refs=refs,
            rng=rng,
        )
        chosen = critical[sel]
    else:
        state.norm = update_ideal_and_worst(
            state.norm, values[np.concatenate([carried, critical])]
        )
        sel = crowding_distance_select(values[critical], k, rng)
        chosen = critical[sel]

    survivors = np.concatenate([carried, chosen])
    return survivors, IterationStats(
        critical_rank=i_star, carried=carried.size, filled=k
    )


def run_iteration(
    state: GenerationState,
    config: RunConfig,
    problem: Problem,
    refs: ReferencePointSet | None,
    rng: np.random.Generator,
) -> IterationStats:
    """One full generation: offspring, ranking, survivor selection."""
    offspring = make_offspring(state.population, config, rng)
    combined = np.concatenate([state.population, offspring], axis=0)
    values = problem.evaluate(combined)
    fronts = fast_nondominated_sort(values, sense=problem.sense)
    survivors, stats = _select_survivors(values, fronts, config, state, refs, rng)
    state.population = combined[survivors]
    state.iteration += 1
    return stats


def run(config: RunConfig):
    """Generator of RunRecords, one per iteration (iteration 0 = initial pop).

    Stop policy 'iters' and 'monitor' run to max_iterations; 'coverage'
    additionally stops at the first iteration with full front coverage.
    """
    config.validate()
    problem = make_problem(config.problem, config.n)
    refs = (
        generate_reference_points(problem.num_objectives, config.divisions)
        if config.algorithm == "nsga3"
        else None
    )
    rng = np.random.default_rng(config.seed)
    front = problem.front()
    front_size = front.shape[0]

    state = GenerationState(
        population=gn.random_population(config.pop_size, config.n, rng),
        norm=NormalizationState(dim=problem.num_objectives),
    )

    covered = coverage(problem.evaluate(state.population), front)
    losses = 0
    yield RunRecord(
        run_id=config.run_id,
        iteration=0,
        covered=len(covered),
        front_size=front_size,
        new_values=tuple(sorted(covered)),
        losses_cum=0,
        wall_time=0.0,
    )
    if config.stop == "coverage" and len(covered) == front_size:
        return

    for _ in range(config.max_iterations):
        t0 = time.perf_counter()
        run_iteration(state, config, problem, refs, rng)
        now_covered = coverage(problem.evaluate(state.population), front)
        lost = detect_loss(covered, now_covered)
        losses += len(lost)
        new = tuple(sorted(now_covered - covered))
        covered = now_covered
        yield RunRecord(
            run_id=config.run_id,
            iteration=state.iteration,
            covered=len(covered),
            front_size=front_size,
            new_values=new,
            losses_cum=losses,
            wall_time=time.perf_counter() - t0,
        )
        if config.stop == "coverage" and len(covered) == front_size:
            return


def run_collect(config: RunConfig) -> list[RunRecord]:
    """Run to completion and return all records."""
    return list(run(config))
