"""Sorting burnt and unburnt pancake stacks by prefix reversals."""

from .core import (
    BurntStack,
    FlipTrace,
    MixedStack,
    Orientation,
    ParseError,
    UnburntStack,
    analyze_structure,
    apply_flips,
    contract,
    expand,
    flip,
    format_stack,
    identity,
    make_special,
    parse_stack,
    rank,
    unrank,
)
from .exact import (
    DistanceTable,
    ResourceLimitError,
    SolverConfig,
    astar_distance,
    bfs_distances,
    candidate_set_burnt,
    candidate_set_unburnt,
    greedy_lb_burnt,
    greedy_lb_unburnt,
    max_flips,
    verify_trace,
)
from .experiments import adjacency_stats, average_flips, random_stack, reference_bounds
from .potential import delta_v, lower_bound_potential, neg_identity_bound, potential
from .sorters import sort_burnt_average, sort_greedy_lookahead, sort_unburnt_randomized

__version__ = "0.1.0"

