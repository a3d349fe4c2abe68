"""Bayesian value of information with fuzzy utilities."""

__version__ = "0.1.0"

from .decision import (  # noqa: E402
    DecisionProblem,
    DiscreteMap,
    RealLine,
    ValueReport,
    affine_transform,
    compare_experiments,
    decision_regions,
    evpi,
    evsi,
    evsi_direct,
    optimal_posterior_action,
    optimal_prior_action,
    perfect_action,
    perfect_info_value,
    prior_expected_utilities,
    verify_theorem51,
)
from .expectation import SimpleFRV, expected_utility, expected_value  # noqa: E402
from .fuzzy import (  # noqa: E402
    ZERO,
    FuzzyNumber,
    Interval,
    add,
    alpha_cut,
    area,
    from_breakpoints,
    hamming_distance,
    make_crisp,
    make_trapezoidal,
    make_triangular,
    membership_at,
    negate,
    pointwise_min,
    scale,
    subtract,
    translate,
)
from .inference import (  # noqa: E402
    DiscreteExperiment,
    DiscreteOutcome,
    Distribution,
    GaussianExperiment,
    RealValue,
    StateSpace,
    gaussian_cdf,
    likelihood,
    posterior,
    predictive_region_prob,
)
from .ranking import best_index, geq_profile, kolodziejczyk_r, leq_profile, prefer  # noqa: E402
