"""Slepian-Wolf error exponents.

Dual-domain error exponents for source coding with decoder side information
under mismatched (maximum-metric) decoding, their primal counterparts, the
achievable-rate thresholds, and an exact small-blocklength simulator.
"""
from .errors import (
    BlocklengthTooLarge,
    DeltaOutOfRange,
    DimensionMismatch,
    EnumerationTooLarge,
    IncompatibleMetric,
    IterationBudgetExceeded,
    NegativeProbability,
    NonFinite,
    NotConverged,
    RaggedInput,
    SWError,
    ZeroMass,
)
from .kernels import BACKEND
from .model import (
    CostFunction,
    DecodingMetric,
    DualParams,
    JointSource,
    conditional_entropy,
    entropy,
    hamming_metric,
    kl_divergence,
    matched_metric,
    source_from_channel,
    validate_source,
)
from .dual import (
    ExponentCurve,
    ExponentPoint,
    combined_exponent,
    exponent_curve,
    exponent_no_si,
    exponent_no_si_optimal,
    exponent_r_gallager,
    exponent_sp,
    exponent_std_ex,
    exponent_std_rc,
    exponent_tt_ex,
    exponent_tt_rc,
    gallager_e0,
    matched_ex_std,
    matched_ex_tt,
    std_ex_objective,
    std_rc_objective,
    tilted_distributions,
    tt_ex_objective,
    tt_rc_objective,
)
from .rates import RateReport, gmi, lm_rate, rate_report, rate_std, rate_tt
from .sim import (
    BinningCode,
    SequenceErrorReport,
    empirical_exponent,
    ensemble_average_error,
    exact_error_probability,
    expurgate,
    nletter_ex_bound,
    nletter_rc_bound,
    sample_code,
    sequence_error_probabilities,
)

__version__ = "0.1.0"


def __getattr__(name):
    # the primal oracle pulls in cvxpy, so load it on first use
    if name in ("primal", "verify_duality", "ck_rc_primal", "ck_ex_primal", "exponent_r_primal",
                "exponent_sp_primal", "exponent_ex_primal", "PrimalSolution", "DualityReport"):
        import importlib

        primal = importlib.import_module(".primal", __name__)
        return primal if name == "primal" else getattr(primal, name)
    raise AttributeError(f"module 'swexp' has no attribute {name!r}")
