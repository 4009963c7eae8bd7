"""Bicluster-count selection via a Tracy-Widom largest-eigenvalue test.

The package tests hypotheses about the number K of homogeneous submatrices
(biclusters) in a dense data matrix: standardize residuals by a fitted
entry-level group assignment, scale the largest eigenvalue of the residual
Gram matrix, and compare against Tracy-Widom quantiles.  Sequential testing
of K0 = 0, 1, 2, ... selects the smallest accepted K.  Localization uses
simulated annealing over the generalized profile likelihood, optionally on a
Ward-compressed matrix.
"""

from .errors import (
    AlphaOutOfRangeError,
    BiclustError,
    DegenerateGroupError,
    EmptyBackgroundError,
    EmptyEnsembleError,
    EmptyGroupError,
    EmptyRectangleError,
    InfeasibleInitError,
    LayoutInfeasibleError,
    LTooLargeError,
    NoConvergenceError,
    NonPositiveStdError,
    NotAcceptedError,
    OverlapError,
)
from .localize import (
    CompressedAssignment,
    CompressedMatrix,
    CoolingSchedule,
    EntropyFn,
    LocalizerConfig,
    SAResult,
    best_localization,
    compress,
    compress_labels,
    custom_entropy,
    entropy_fn,
    expand_assignment,
    geometric,
    greedy,
    logarithmic,
    practical_schedule,
    profile_likelihood,
    profile_likelihood_compressed,
    sa_localize,
    sa_localize_compressed,
    sa_localize_compressed_result,
    sa_localize_result,
    ward_cluster,
)
from .model import (
    BiclusterAssignment,
    GroupStats,
    ObservedMatrix,
    ResidualMatrix,
    all_background,
    assignment_from_rectangles,
    compute_group_stats,
    standardize,
    standardize_population,
)
from .spectral import EigenResult, frobenius_norm_sq, max_eigenvalue
from .synth import (
    GeneratorSpec,
    LayoutSpec,
    generate,
    interpolated_means,
    null_layout,
)
from .twtest import (
    SelectKResult,
    SelectStep,
    TestOutcome,
    TWScaling,
    TWTable,
    default_table,
    load_tw_table,
    run_test,
    select_k,
    test_statistic,
    tw1_cdf,
    tw1_quantile,
    tw_scaling,
)
from .validate import (
    EnsembleResult,
    GrowthPoint,
    growth_check,
    ks_statistic,
    null_ensemble,
    tail_probabilities,
)

__version__ = "0.1.0"
