"""Topological feature selection for multivariate time series.

Scores the variables of a time series by how much they contribute to the
persistent homology of its sliding-window embedding: projected gradient
ascent of a persistence functional over the probability simplex, with
optional Gaussian-perturbation averaging of the resulting paths.
"""

from .simplexes import (
    EMPTY,
    BaseOrder,
    FiltrationMatrix,
    LevelComplex,
    Simplex,
    SkeletonSpec,
    Weight,
    enumerate_skeleton,
    refine_preorder,
    weight_from_matrix,
)
from .persistence import (
    BirthDeathMatching,
    BoundaryMatrix,
    GradedDiagram,
    build_boundary,
    complex_diagram,
    diagram,
    diagrams_close,
    extend_to_augmented,
    f_plus,
    matrix_diagram,
    persistent_betti,
    reduce,
    weight_diagram,
)
from .diagram_metrics import bottleneck, wasserstein
from .sliding_window import (
    ComponentDistances,
    combo_distance,
    component_distance,
    full_distance,
    read_time_series_csv,
    sliding_window_distances,
    window_scan,
    write_time_series_csv,
)
from .objective import (
    Functional,
    GradientReport,
    WeightFamily,
    evaluate,
    family_gradient,
    gradient,
    parse_functional,
)
from .optimize import (
    AscentConfig,
    GradientPath,
    ascend,
    ascend_exact,
    ascend_family,
    ascend_steps,
    project_simplex,
)
from .vineyard import PLCurve, Vine, Vineyard, region_signature, trace_vineyard
from .perturb import (
    PerturbConfig,
    TrialSummary,
    estimate_noise_sd,
    jaccard,
    run_trials,
    score_support,
)

__version__ = "0.1.0"
