"""NSGA-II / NSGA-III on OneMinMax benchmarks, with reference-point
geometry verification and a CSV experiment harness."""

from .analysis import (
    AngleReport,
    MinimalPResult,
    RunRecord,
    coverage,
    detect_loss,
    minimal_p_search,
    verify_unique_association,
)
from .dominance import dominates, fast_nondominated_sort
from .engine import RunConfig, make_offspring, run, run_collect
from .genome import (
    random_genome,
    random_population,
    spawn_run_rng,
    standard_bit_mutation,
    uniform_crossover,
)
from .normalization import (
    DegeneratePopulationError,
    NormalizationState,
    normalize,
)
from .problems import (
    eval_3omm,
    eval_oneminmax,
    make_problem,
    one_min_max,
    pareto_front_3omm,
    three_omm,
)
from .refpoints import (
    ReferencePointSet,
    angle_between,
    generate_reference_points,
    perpendicular_distance,
)
from .selection import associate, crowding_distance_select, niching_select

__all__ = [
    "AngleReport",
    "DegeneratePopulationError",
    "MinimalPResult",
    "NormalizationState",
    "ReferencePointSet",
    "RunConfig",
    "RunRecord",
    "angle_between",
    "associate",
    "coverage",
    "crowding_distance_select",
    "detect_loss",
    "dominates",
    "eval_3omm",
    "eval_oneminmax",
    "fast_nondominated_sort",
    "generate_reference_points",
    "make_offspring",
    "make_problem",
    "minimal_p_search",
    "niching_select",
    "normalize",
    "one_min_max",
    "pareto_front_3omm",
    "perpendicular_distance",
    "random_genome",
    "random_population",
    "run",
    "run_collect",
    "spawn_run_rng",
    "standard_bit_mutation",
    "three_omm",
    "uniform_crossover",
    "verify_unique_association",
]
