"""Tail bounds for sums of random variables that t-agree with a dependency graph."""
from .bounds import (
    BernoulliQuery,
    BoundResult,
    ColorClassSizes,
    TailQuery,
    bernoulli_tail_bound,
    chernoff_tail,
    combined_tail_bound,
    headline_moment_bound,
    markov_tail_from_moment,
    moment_bound_twise,
    optimize_t,
    refined_moment_bound,
)
from .graph import (
    Coloring,
    DependencyGraph,
    exact_chromatic_number,
    greedy_coloring,
    is_independent_set,
    make_clique_blocks,
    make_window_overlap_graph,
)
from .kernels import BACKEND
from .sampler import (
    DependentEnsemble,
    NotExhaustivelyCheckable,
    TwiseFamily,
    draw_sum,
    make_clique_ensemble,
    new_family,
    sample_bernoulli,
    sample_uniform,
    verify_t_agreement,
)

__version__ = "0.1.0"
