"""Summation theorems for 3F4 hypergeometric functions as sums of 1F2 pair products."""

from hypersum.hyper_core import (
    DomainError,
    HypersumError,
    HypParams,
    NoConvergence,
    SeriesConfig,
    SeriesResult,
    SignedLog,
    bessel_j,
    bessel_j_scaled,
    ln_gamma_signed,
    pfq,
    pfq_regularized,
    pochhammer,
    product_jj_2f3,
)

__all__ = [
    "DomainError",
    "HypersumError",
    "HypParams",
    "NoConvergence",
    "SeriesConfig",
    "SeriesResult",
    "SignedLog",
    "bessel_j",
    "bessel_j_scaled",
    "ln_gamma_signed",
    "pfq",
    "pfq_regularized",
    "pochhammer",
    "product_jj_2f3",
]

__version__ = "0.1.0"
