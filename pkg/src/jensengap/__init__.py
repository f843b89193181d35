"""Jensen/Chebychev functional gaps and superquadraticity-based bounds."""

from .functions import (
    CertificationReport,
    DomainError,
    FunctionSpec,
    certify_superquadratic,
    eval_C,
    eval_f,
    feasible_C_envelope,
    function_from_id,
    load_tabulated,
)
from .discrete import (
    EnumerationCapError,
    FunctionalValue,
    GroupedInstance,
    WeightVector,
    chebychev,
    chebychev_k,
    jensen,
    jensen_k,
    load_instance,
    weighted_mean,
)
from .bounds import (
    BoundReport,
    HypothesisViolation,
    RatioExtrema,
    chebychev_magnitude_bound,
    convex_sandwich,
    halved_bound,
    jensen_upper_via_C,
    lambda_bound,
    lower_bound_superquadratic,
    ratio_extrema,
    sandwich_bounds,
)
from .integral import (
    DensitySpec,
    IntegralRatioExtrema,
    QuadratureSpec,
    chebychev_k_int,
    chebychev_magnitude_bound_int,
    density_from_id,
    integral_mean,
    jensen_k_int,
    jensen_upper_via_C_int,
    load_tabulated_density,
    lower_bound_superquadratic_int,
    ratio_extrema_int,
    sandwich_bounds_int,
)
from .verify import CampaignConfig, CampaignReport, random_instance, run_campaign

__version__ = "0.1.0"
