"""Exploitation laboratory for FTRL learners in finite zero-sum matrix games.

The package simulates constant-step FTRL under any separable regularizer
kernel, synthesizes exploiting optimizer strategies (fixed, conditional-
gradient-optimal, alternating trap), and numerically verifies the
exploitation laws, decompositions, and probability bounds that govern how
much surplus a clairvoyant optimizer can extract.
"""

from .bandit import BanditRun, azuma_margin, bandit_reward_sandwich, simulate_bandit
from .choicemap import (
    ChoiceMapError,
    ChoiceResult,
    bregman_conj,
    conj_on_simplex,
    solve_choice_map,
    solve_choice_map_batch,
)
from .dynamics import (
    Alternating,
    ExploitationReport,
    Explicit,
    Fixed,
    FrankWolfeFixed,
    MaxMin,
    Trajectory,
    continuous_lag,
    dg_envelope,
    potential,
    reward_report,
    reward_sandwich_check,
    simulate,
)
from .fixed_analysis import (
    DegenerateProfileError,
    ExploitationEnvelope,
    Regime,
    asymptotic_bounds,
    discrete_bounds,
    exploitation_bounds,
    l1_distance_bounds,
)
from .frank_wolfe import FWResult, fw_iteration_budget, fw_optimize, operator_norm
from .game import (
    GameSolution,
    GapProfile,
    ZeroSumGame,
    gap_profile,
    has_pure_nash,
    load_game,
    random_game,
    row_gap_min,
    save_game,
    solve_minimax,
)
from .kernels import (
    Kernel,
    KernelGeometry,
    NormProfile,
    entropic,
    euclidean,
    kernel_from_selector,
    regularizer_range,
    tsallis,
)
from .pbr import CostCurvePoint, cost_curve, theorem_lower_formula
from .random_suite import (
    SweepResult,
    estimate_event_rates,
    pure_nash_probability,
    trap_sweep,
)
from .trap import (
    CurvatureBudget,
    StepSizeError,
    TrapConstruction,
    TrapEventError,
    build_trap,
    curvature_budget,
    path_mass_check,
    run_trap,
    variance_identity_check,
)

__version__ = "0.1.0"
