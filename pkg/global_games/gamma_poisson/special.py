"""
Log-space special-function helpers.

Gamma arguments reach the hundreds for realistic parameter sets, so ratios of
Gamma functions are always formed from ``gammaln`` differences or ``poch``.
"""
import math

import numpy as np
from scipy import special

from common.exceptions import DomainError


def log_gamma(z):
    """
    Natural logarithm of the Gamma function for z > 0.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(~np.isfinite(z)):
        raise DomainError(f"log_gamma needs a positive finite argument, got {z}.")
    result = special.gammaln(z)
    return float(result) if result.ndim == 0 else result


def gamma_ratio(a, m):
    """
    Gamma(a + m) / Gamma(a), the rising factorial (Pochhammer symbol).
    """
    if a <= 0 or a + m <= 0:
        raise DomainError(f"Gamma ratio undefined for a={a}, a+m={a + m}.")
    return float(special.poch(a, m))


def gamma_moment(power, shape, rate):
    """
    E[X**power] for X ~ Gamma(shape, rate).
    """
    if shape <= 0 or rate <= 0:
        raise DomainError(f"Gamma parameters must be positive, got shape={shape}, rate={rate}.")
    if shape + power <= 0:
        raise DomainError(f"E[X^{power}] diverges for shape={shape}.")
    return math.exp(special.gammaln(shape + power) - special.gammaln(shape) - power * math.log(rate))
