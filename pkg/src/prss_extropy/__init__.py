"""General weighted extropy under percentile ranked set sampling."""

from .distributions import (
    Distribution,
    Support,
    TransformedDistribution,
    distribution_from_descriptor,
    make_exponential,
    make_pareto,
    make_power,
    make_triangular_pair,
    make_triangular_symmetric,
    make_uniform,
    numeric_inverse,
    transform,
)
from .errors import (
    AccuracyError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    MCFailureError,
    MonotonicityError,
    ParameterDomainError,
    UnsupportedFamilyError,
)
from .extropy import LambdaTransform, expected_lambda, extropy, gwe, gwe_srs, lambda_eval
from .prss import (
    GWEResult,
    PRSSDesign,
    bound_ratio_rhs,
    gwe_prss,
    gwe_prss_closed_exponential,
    gwe_prss_closed_pareto,
    gwe_prss_closed_power,
    make_design,
)
from .sampling import PRSSDataset, RandomSource, mc_gwe_prss, sample_order_statistic, sample_prss
from .signedlog import SignedLogValue
from .weights import (
    WeightFunction,
    make_constant_one,
    make_weight_odd_power,
    make_weight_power,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ConfigurationError",
    "Distribution",
    "DivergenceError",
    "DomainError",
    "GWEResult",
    "LambdaTransform",
    "MCFailureError",
    "MonotonicityError",
    "PRSSDataset",
    "PRSSDesign",
    "ParameterDomainError",
    "RandomSource",
    "SignedLogValue",
    "Support",
    "TransformedDistribution",
    "UnsupportedFamilyError",
    "WeightFunction",
    "bound_ratio_rhs",
    "distribution_from_descriptor",
    "expected_lambda",
    "extropy",
    "gwe",
    "gwe_prss",
    "gwe_prss_closed_exponential",
    "gwe_prss_closed_pareto",
    "gwe_prss_closed_power",
    "gwe_srs",
    "lambda_eval",
    "make_constant_one",
    "make_design",
    "make_exponential",
    "make_pareto",
    "make_power",
    "make_triangular_pair",
    "make_triangular_symmetric",
    "make_uniform",
    "make_weight_odd_power",
    "make_weight_power",
    "mc_gwe_prss",
    "sample_order_statistic",
    "sample_prss",
    "numeric_inverse",
    "transform",
]
