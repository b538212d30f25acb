"""Path loss and small-scale fading for direct and surface-reflected links.

All internal math is linear; dB and dBm values are converted once at the
boundary with the helpers below.  Direct links are Rayleigh; the two hops of
a reflected link are Nakagami-m with unit spread, so squared magnitudes are
Gamma(m, 1/m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
    "watts_to_dbm",
    "PathLossParams",
    "FadingParams",
    "pathloss_direct",
    "pathloss_reflected",
    "sample_nakagami_mag",
    "sample_uniform_phase",
]


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


@dataclass(frozen=True)
class PathLossParams:
    """Linear unit-distance gains, exponent and transmitter-surface offset."""

    c_d: float          # direct-link gain at unit distance (linear)
    c_r: float          # reflected-link gain at unit distance (linear)
    alpha: float        # path-loss exponent, > 2
    d0: float           # transmitter-to-surface distance, metres

    def __post_init__(self):
        if not self.c_d > 0.0 or not self.c_r > 0.0:
            raise ValueError("unit-distance gains must be positive")
        if not self.alpha > 2.0:
            raise ValueError(f"path-loss exponent must exceed 2, got {self.alpha}")
        if not self.d0 > 0.0:
            raise ValueError(f"transmitter-surface offset must be positive, got {self.d0}")


@dataclass(frozen=True)
class FadingParams:
    """Nakagami shapes of the two reflected hops (unit spread)."""

    m_h: float
    m_r: float

    def __post_init__(self):
        if self.m_h < 0.5 or self.m_r < 0.5:
            raise ValueError("Nakagami shape parameters must be at least 0.5")


def pathloss_direct(params: PathLossParams, d: float) -> float:
    """Linear power gain c_d * d^-alpha of a direct link of length d."""
    if not d > 0.0:
        raise ValueError(f"distance must be positive, got {d}")
    return params.c_d * d ** -params.alpha


def pathloss_reflected(params: PathLossParams, d_r: float) -> float:
    """Linear power gain c_r * (d0 * d_r)^-alpha of a two-hop reflected path."""
    if not d_r > 0.0:
        raise ValueError(f"distance must be positive, got {d_r}")
    return params.c_r * (params.d0 * d_r) ** -params.alpha


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_nakagami_mag(m: float, count: int, seed) -> np.ndarray:
    """i.i.d. Nakagami(m, 1) magnitudes, via the square root of Gamma(m, 1/m)."""
    if m < 0.5:
        raise ValueError(f"Nakagami shape must be at least 0.5, got {m}")
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = _rng(seed)
    return np.sqrt(rng.gamma(m, 1.0 / m, count))


def sample_uniform_phase(count: int, seed) -> np.ndarray:
    """i.i.d. phases uniform on [-pi, pi)."""
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = _rng(seed)
    return rng.uniform(-math.pi, math.pi, count)
