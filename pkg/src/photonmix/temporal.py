"""Multimode temporal model of the gated coincidence dip.

Filters on the c and d detectors are identical Gaussians with 1/e^2
intensity half-width ``sigma`` (rad/s); the doubled pump is a transform
limited Gaussian of 1/e^2 intensity width ``sigma_2p`` (rad/s). For a weak
coherent state the per-pulse triple-coincidence probability is

    P(dX) = 1/2 n_dc n_p eta_g eta_c eta_d
            * [1 - V exp(-dX^2 sigma^2 / (4 c^2 (1 + sigma^2 / 2 sigma_2p^2)))]

with ``V = (1 + sigma^2 / 2 sigma_2p^2)^(-1/2)``. The Gaussian factor decays
with delay; a positive exponent would not describe a dip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, FWHM_TO_HALFWIDTH_1E2, NM


def _pump_correction(sigma: float, sigma_2p: float) -> float:
    """``1 + sigma^2 / (2 sigma_2p^2)``; exactly 1 for an infinite pump width."""
    if sigma <= 0 or sigma_2p <= 0:
        raise ValueError("spectral widths must be > 0")
    if math.isinf(sigma_2p):
        return 1.0
    return 1.0 + sigma * sigma / (2.0 * sigma_2p * sigma_2p)


@dataclass(frozen=True)
class TemporalParams:
    sigma: float
    sigma_2p: float = math.inf
    n_dc: float = 0.0
    n_p: float = 0.0
    eta_g: float = 1.0
    eta_c: float = 1.0
    eta_d: float = 1.0
    rep_rate: float = 1e8

    def __post_init__(self):
        if not self.sigma > 0 or not self.sigma_2p > 0:
            raise ValueError("sigma and sigma_2p must be > 0")
        if self.n_dc < 0 or self.n_p < 0:
            raise ValueError("mean photon numbers must be >= 0")
        for eta in (self.eta_g, self.eta_c, self.eta_d):
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"efficiency {eta!r} outside [0, 1]")
        if self.rep_rate < 0:
            raise ValueError("rep_rate must be >= 0")

    @property
    def baseline_probability(self) -> float:
        """Per-pulse triple probability far from overlap."""
        return 0.5 * self.n_dc * self.n_p * self.eta_g * self.eta_c * self.eta_d

    @property
    def visibility(self) -> float:
        return temporal_visibility(self.sigma, self.sigma_2p)

    @property
    def half_width_1e(self) -> float:
        return dip_half_width_1e(self.sigma, self.sigma_2p)


def temporal_visibility(sigma: float, sigma_2p: float) -> float:
    """``(1 + sigma^2 / 2 sigma_2p^2)^(-1/2)``."""
    return _pump_correction(sigma, sigma_2p) ** -0.5


def dip_half_width_1e(sigma: float, sigma_2p: float = math.inf) -> float:
    """Delay (m) at which the Gaussian dip factor falls to 1/e."""
    return 2.0 * C_LIGHT / sigma * math.sqrt(_pump_correction(sigma, sigma_2p))


def sigma_from_half_width(width_m: float) -> float:
    """Effective filter width implied by a measured 1/e half-width (infinite pump width)."""
    if width_m <= 0:
        raise ValueError("width must be > 0")
    return 2.0 * C_LIGHT / width_m


def bandwidth_nm_to_sigma(fwhm_nm: float, center_nm: float) -> float:
    """Filter FWHM in nm to the 1/e^2 intensity half-width in rad/s.

    ``dnu = c dlambda / lambda^2``; the Gaussian with that intensity FWHM has
    1/e^2 half-width ``2 pi dnu / sqrt(2 ln 2)``.
    """
    if not (fwhm_nm > 0 and center_nm > 0):
        raise ValueError("bandwidth and centre wavelength must be > 0")
    if fwhm_nm >= center_nm / 2:
        raise ValueError("bandwidth must be well below the centre wavelength")
    dnu = C_LIGHT * fwhm_nm * NM / (center_nm * NM) ** 2
    return 2.0 * math.pi * dnu * FWHM_TO_HALFWIDTH_1E2


def sigma_to_bandwidth_nm(sigma: float, center_nm: float) -> float:
    """Inverse of :func:`bandwidth_nm_to_sigma`."""
    dnu = sigma / (2.0 * math.pi * FWHM_TO_HALFWIDTH_1E2)
    return dnu * (center_nm * NM) ** 2 / C_LIGHT / NM


def gaussian_dip_factor(delta_x, sigma: float, sigma_2p: float = math.inf):
    """``exp(-dX^2 sigma^2 / (4 c^2 (1 + sigma^2/2 sigma_2p^2)))``."""
    corr = _pump_correction(sigma, sigma_2p)
    dx = np.asarray(delta_x, dtype=float)
    out = np.exp(-dx * dx * sigma * sigma / (4.0 * C_LIGHT**2 * corr))
    return float(out) if out.ndim == 0 else out


def triple_coincidence_probability(delta_x, p: TemporalParams):
    """Per-pulse triple-coincidence probability at path difference ``delta_x`` (m)."""
    g = gaussian_dip_factor(delta_x, p.sigma, p.sigma_2p)
    return p.baseline_probability * (1.0 - p.visibility * g)


@dataclass(frozen=True)
class DipProfile:
    delays: np.ndarray  # m
    rates: np.ndarray  # counts/s
    baseline: float  # counts/s
    visibility: float
    half_width_1e: float  # m

    @property
    def delays_fs(self) -> np.ndarray:
        return self.delays / C_LIGHT * 1e15


def dip_profile(delays, p: TemporalParams) -> DipProfile:
    """Triple-coincidence rate (cps) over a delay grid in meters."""
    delays = np.asarray(delays, dtype=float)
    if not np.all(np.isfinite(delays)):
        raise ValueError("delays must be finite")
    rates = np.atleast_1d(triple_coincidence_probability(delays, p)) * p.rep_rate
    return DipProfile(delays, rates, p.baseline_probability * p.rep_rate,
                      p.visibility, p.half_width_1e)
