from .algebra import (
    SEARCH_FLOOR,
    SQUARE_TOL,
    UNDECIDED,
    H_theta,
    SearchResult,
    congruence_criterion,
    congruence_residual,
    congruence_search,
    one_minus_sum_squares,
    perfect_square_test,
    spectrum_theta,
    u_n1_element,
)
from .checks import (
    BasePointError,
    jacobian,
    pullback_metric,
    degree_check,
    expected_lambda,
    isometry_residual,
    metric_pullback,
    properness_probe,
)
from .decomp import (
    CLASSIFY_TOL,
    DAngeloDecomposition,
    DecompositionError,
    QuadraticData,
    dangelo_solve,
    minimality_rank,
    quadratic_classify,
    reduce_nonminimal,
)
from .report import (
    TOL_DECOMP,
    TOL_ISOMETRY,
    TOL_LAMBDA,
    TOL_METRIC,
    TOL_PROPER,
    Report,
    SamplePlan,
    sample_ball,
)
