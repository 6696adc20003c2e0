"""Drunk angel vs. hiding devil.

A random angel of power c moves N times on Z^n while a devil secretly builds a
hollow Euclidean sphere of inner radius k whose size fixes N.  This package
computes exact and approximate caging probabilities, sizes the cage, and
simulates the game.
"""

from angelcage.analytic import (
    Bounds3D,
    CagePlan,
    ProbabilityEstimate,
    asymptotic_vanish_check,
    bounds_3d,
    cage_prob,
    cage_prob_1d_lower,
    cage_prob_2d,
    cage_prob_even,
    cage_prob_odd,
    make_plan,
    radial_quadrature_oracle,
    threshold_k_1d,
    threshold_k_2d,
)
from angelcage.exact_dist import (
    DisplacementPmf,
    StepDistribution,
    cdf_within,
    pmf_convolve_oracle,
    pmf_exact,
    walk_count,
)
from angelcage.lattice import (
    BudgetExceeded,
    HollowShell,
    ball_volume,
    count_ball_exact,
    count_disk_hcv,
    shell_turns,
)
from angelcage.montecarlo import (
    SimulationConfig,
    SimulationReport,
    Trace,
    TrialOutcome,
    avg_distance_curve,
    run_simulation,
    run_trial,
    sweep_k,
    trace_walk,
)

__version__ = "0.1.0"
