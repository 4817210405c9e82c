"""Binary-input AWGN capacity and Shannon limits by numerical quadrature."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

__all__ = ["binary_j", "biawgn_capacity", "ebn0_to_sigma2", "shannon_limit_db", "bec_capacity_erasure"]


def binary_j(s2: float) -> float:
    """Mutual information of a consistent Gaussian LLR ``N(s2/2, s2)``."""
    if s2 <= 0:
        return 0.0
    mu, sd = s2 / 2.0, math.sqrt(s2)

    def f(x):
        return math.exp(-0.5 * ((x - mu) / sd) ** 2) / (sd * math.sqrt(2 * math.pi)) * np.logaddexp(0.0, -x) / math.log(2)

    lo, hi = mu - 12 * sd, mu + 12 * sd
    val, _ = integrate.quad(f, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12, points=[0.0] if lo < 0 < hi else None)
    return 1.0 - val


def ebn0_to_sigma2(ebn0_db: float, rate: float) -> float:
    """BPSK noise variance for unit-energy symbols at code rate ``rate``."""
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


def biawgn_capacity(ebn0_db: float, rate: float) -> float:
    """Capacity (bits/use) of the BPSK channel whose noise is set by ``Eb/N0`` and ``rate``."""
    return binary_j(4.0 / ebn0_to_sigma2(ebn0_db, rate))


@lru_cache(maxsize=256)
def shannon_limit_db(rate: float) -> float:
    """Smallest ``Eb/N0`` (dB) at which BPSK capacity reaches ``rate``."""
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate must be in (0, 1), got {rate}")
    return optimize.brentq(lambda x: biawgn_capacity(x, rate) - rate, -10.0, 20.0, xtol=1e-10)


def bec_capacity_erasure(rate: float) -> float:
    return 1.0 - rate
