"""Exact maximal-order analysis of Northshield's Z[√2] analogue of Stern's sequence."""

from .quadfield import QuadInt, QuadRat, qi_add, qi_conj, qi_mul, qi_pow, qi_sign, qr_cmp, to_float
from .sequences import (
    ALPHA,
    LOG2_PHI,
    PHI,
    STERN_CONSTANT,
    IntervalMax,
    RatioScan,
    interval_max_bruteforce,
    interval_max_closed_form,
    northshield,
    ratio_scan_northshield,
    ratio_scan_stern,
    stern,
    witness_ratio,
)

__all__ = [
    "ALPHA",
    "LOG2_PHI",
    "PHI",
    "STERN_CONSTANT",
    "IntervalMax",
    "QuadInt",
    "QuadRat",
    "RatioScan",
    "interval_max_bruteforce",
    "interval_max_closed_form",
    "northshield",
    "qi_add",
    "qi_conj",
    "qi_mul",
    "qi_pow",
    "qi_sign",
    "qr_cmp",
    "ratio_scan_northshield",
    "ratio_scan_stern",
    "stern",
    "to_float",
    "witness_ratio",
]
