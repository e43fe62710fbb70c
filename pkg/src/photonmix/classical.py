"""Two classical beams with a random relative phase at a beamsplitter."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import BeamsplitterParams


@dataclass(frozen=True)
class ClassicalInputs:
    """Mean input intensities and optional second moments.

    With ``Ia_sq``/``Ib_sq`` left as None the intensities are constant, i.e.
    ``<I^2> = <I>^2``.
    """

    Ia: float
    Ib: float
    Ia_sq: float | None = None
    Ib_sq: float | None = None

    def __post_init__(self):
        if self.Ia < 0 or self.Ib < 0:
            raise ValueError("intensities must be >= 0")
        for mean, second in ((self.Ia, self.Ia_sq), (self.Ib, self.Ib_sq)):
            if second is not None and second < mean * mean * (1 - 1e-12):
                raise ValueError("second moment must be >= squared mean")

    @property
    def second_moments(self) -> tuple[float, float]:
        a2 = self.Ia**2 if self.Ia_sq is None else self.Ia_sq
        b2 = self.Ib**2 if self.Ib_sq is None else self.Ib_sq
        return a2, b2

    @property
    def is_constant(self) -> bool:
        return self.Ia_sq is None and self.Ib_sq is None


def output_intensities(Ia, Ib, phi, bs: BeamsplitterParams):
    """Instantaneous output intensities ``(Ic, Id)`` at relative phase ``phi``.

    ``Ic = |t|^2 Ia + |r|^2 Ib - 2|r||t| sqrt(Ia Ib) sin(phi)``; ``Id`` carries
    the opposite interference term so that ``Ic + Id = Ia + Ib``. Accepts
    scalars or arrays.
    """
    if np.any(np.asarray(Ia) < 0) or np.any(np.asarray(Ib) < 0):
        raise ValueError("intensities must be >= 0")
    cross = 2.0 * bs.r_mag * bs.t_mag * np.sqrt(np.multiply(Ia, Ib)) * np.sin(phi)
    Ic = bs.transmittance * Ia + bs.reflectance * Ib - cross
    Id = bs.reflectance * Ia + bs.transmittance * Ib + cross
    return Ic, Id


def mean_output_intensities(inputs: ClassicalInputs, bs: BeamsplitterParams) -> tuple[float, float]:
    """Phase-averaged ``(<Ic>, <Id>)``; the interference term averages out."""
    return (bs.transmittance * inputs.Ia + bs.reflectance * inputs.Ib,
            bs.reflectance * inputs.Ia + bs.transmittance * inputs.Ib)


def coincidence_phase_averaged(inputs: ClassicalInputs, bs: BeamsplitterParams) -> float:
    """``<Ic Id>`` averaged over a uniformly random phase."""
    a2, b2 = inputs.second_moments
    R, T = bs.reflectance, bs.transmittance
    return R * T * (a2 + b2) + (R * R + T * T - 2 * R * T) * inputs.Ia * inputs.Ib


def coincidence_uncorrelated(inputs: ClassicalInputs, bs: BeamsplitterParams) -> float:
    """``<Ic><Id>``, the coincidence reference with no interference."""
    c, d = mean_output_intensities(inputs, bs)
    return c * d


def visibility_from_moments(inputs: ClassicalInputs, bs: BeamsplitterParams) -> float:
    """``1 - <Ic Id> / (<Ic><Id>)``."""
    ref = coincidence_uncorrelated(inputs, bs)
    if ref == 0.0:
        return 0.0
    return 1.0 - coincidence_phase_averaged(inputs, bs) / ref


def visibility_classical(R_ab):
    """Random-phase visibility for constant intensities at 50/50.

    ``V = 2 R / (R + 1)^2`` with ``R = <Ia>/<Ib>``; at most 1/2, reached at R = 1.
    """
    R_ab = np.asarray(R_ab, dtype=float)
    if np.any(R_ab < 0):
        raise ValueError("R_ab must be >= 0")
    with np.errstate(invalid="ignore"):
        v = 2.0 * R_ab / (R_ab + 1.0) ** 2
    v = np.where(np.isinf(R_ab), 0.0, v)
    return float(v) if v.ndim == 0 else v


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    samples: int


def phase_monte_carlo(inputs: ClassicalInputs, bs: BeamsplitterParams, samples: int,
                      seed=None) -> MonteCarloEstimate:
    """Estimate ``<Ic Id>`` by sampling the phase uniformly on [0, 2 pi).

    Intensities are held at their means, so this checks the constant-intensity
    case. ``seed`` may be an int, a SeedSequence or a Generator.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.0, 2.0 * math.pi, size=samples)
    Ic, Id = output_intensities(inputs.Ia, inputs.Ib, phi, bs)
    prod = Ic * Id
    mean = float(prod.mean())
    se = float(prod.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return MonteCarloEstimate(mean, se, samples)
