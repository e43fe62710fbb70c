"""Threshold detectors with finite efficiency and the interference visibility.

A detector of efficiency ``eta`` is a beamsplitter of transmission ``eta``
followed by a perfect on/off detector, so ``n`` incident photons produce no
click with probability ``(1 - eta)^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d
from scipy.stats import binom

from .errors import DegenerateError
from .fock import (
    BeamsplitterParams,
    JointDistribution,
    beamsplitter_transform,
    coherent_amplitudes,
    joint_distribution,
    mixed_input_state,
    recommended_cutoff,
)


@dataclass(frozen=True)
class DetectorPair:
    eta1: float
    eta2: float

    def __post_init__(self):
        for eta in (self.eta1, self.eta2):
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"efficiency {eta!r} outside [0, 1]")

    @classmethod
    def ideal(cls) -> "DetectorPair":
        return cls(1.0, 1.0)


@dataclass(frozen=True)
class ClickTable:
    """Outcome probabilities ``p[c click][d click]`` for one pulse.

    ``bound`` is the truncation half-width on each entry (the untracked
    probability mass of the underlying distribution).
    """

    p00: float
    p01: float
    p10: float
    p11: float
    bound: float = 0.0

    @property
    def pc1(self) -> float:
        return self.p10 + self.p11

    @property
    def pd1(self) -> float:
        return self.p01 + self.p11

    def total(self) -> float:
        return self.p00 + self.p01 + self.p10 + self.p11

    def visibility(self) -> float:
        """``1 - p11 / (pc1 pd1)``."""
        denom = self.pc1 * self.pd1
        if denom <= 0.0:
            raise DegenerateError("no singles in one detector; visibility undefined")
        return 1.0 - self.p11 / denom


def click_weights(n: int, m: int, det: DetectorPair) -> tuple[float, float, float, float]:
    """``(P(0,0), P(0,1), P(1,0), P(1,1))`` for ``|n>_c |m>_d``."""
    if n < 0 or m < 0:
        raise ValueError("photon numbers must be >= 0")
    miss_c = (1.0 - det.eta1) ** n
    miss_d = (1.0 - det.eta2) ** m
    return (miss_c * miss_d, miss_c * (1.0 - miss_d),
            (1.0 - miss_c) * miss_d, (1.0 - miss_c) * (1.0 - miss_d))


def click_weight_grids(cutoff: int, det: DetectorPair) -> tuple[np.ndarray, ...]:
    """Vectorised :func:`click_weights` over the ``(cutoff+1)^2`` grid."""
    k = np.arange(cutoff + 1)
    miss_c = ((1.0 - det.eta1) ** k)[:, None]
    miss_d = ((1.0 - det.eta2) ** k)[None, :]
    return (miss_c * miss_d, miss_c * (1.0 - miss_d),
            (1.0 - miss_c) * miss_d, (1.0 - miss_c) * (1.0 - miss_d))


def click_table(dist: JointDistribution, det: DetectorPair) -> ClickTable:
    """Sum ``dist(n, m) * P_nm(outcome)`` over the grid."""
    probs = dist.probabilities
    w00, w01, w10, w11 = click_weight_grids(dist.cutoff, det)
    return ClickTable(
        float(np.sum(probs * w00)), float(np.sum(probs * w01)),
        float(np.sum(probs * w10)), float(np.sum(probs * w11)),
        bound=dist.tail,
    )


def interfering_distribution(alpha_sq: float, bs: BeamsplitterParams,
                             cutoff: int | None = None) -> JointDistribution:
    """Output photon numbers for ``|alpha>_a |1>_b`` with overlapping modes."""
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    if cutoff is None:
        cutoff = recommended_cutoff(alpha_sq) + 1
    state = mixed_input_state(math.sqrt(alpha_sq), cutoff)
    return joint_distribution(beamsplitter_transform(state, bs))


def distinguishable_distribution(alpha_sq: float, bs: BeamsplitterParams,
                                 cutoff: int | None = None) -> JointDistribution:
    """Output photon numbers when the two inputs occupy separate modes.

    Each source is partitioned binomially on its own and the two partitions
    are convolved; no amplitudes interfere.
    """
    if cutoff is None:
        cutoff = recommended_cutoff(alpha_sq) + 1
    coh = coherent_amplitudes(math.sqrt(alpha_sq), cutoff - 1).probabilities()
    n = np.arange(cutoff)
    # coherent light from a: binomial split with |t|^2 to c
    j = np.arange(cutoff)
    split = binom.pmf(j[None, :], n[:, None], bs.transmittance) * coh[:, None]
    a_part = np.zeros((cutoff, cutoff))
    for nn in range(cutoff):
        jj = np.arange(nn + 1)
        a_part[jj, nn - jj] = split[nn, : nn + 1]
    # single photon from b: |r|^2 to c, |t|^2 to d
    b_part = np.array([[0.0, bs.transmittance], [bs.reflectance, 0.0]])
    probs = convolve2d(a_part, b_part)[: cutoff + 1, : cutoff + 1]
    tail = max(0.0, 1.0 - float(probs.sum()))
    return JointDistribution(probs, tail)


def visibility_quantum(alpha_sq: float, det: DetectorPair, bs: BeamsplitterParams,
                       cutoff: int | None = None) -> float:
    """Coincidence visibility for a coherent state mixed with one photon.

    ``V = 1 - p11 / (pc1 pd1)`` where all three come from the interfering
    output distribution.
    """
    table = click_table(interfering_distribution(alpha_sq, bs, cutoff), det)
    return table.visibility()


def visibility_curve(alpha_sq_grid, det: DetectorPair, bs: BeamsplitterParams,
                     cutoff: int | None = None) -> list[tuple[float, float]]:
    """Evaluate :func:`visibility_quantum` over a grid, in grid order.

    Points where the visibility is undefined come back as NaN.
    """
    out = []
    for a in alpha_sq_grid:
        a = float(a)
        if not math.isfinite(a) or a < 0:
            raise ValueError(f"grid value {a!r} must be finite and >= 0")
        try:
            v = visibility_quantum(a, det, bs, cutoff)
        except DegenerateError:
            v = math.nan
        out.append((a, v))
    return out
