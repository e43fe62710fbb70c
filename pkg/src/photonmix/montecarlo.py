"""Pulse-by-pulse counting simulator and closed-form rate predictions.

The simulator is deliberately a separate route to the same click
statistics as :mod:`photonmix.detection` and :mod:`photonmix.classical`:
it samples photon numbers (or a random phase) per pulse, thins them with
the detector efficiency and thresholds to clicks.

Rate predictions read the quoted singles (laser and downconversion) as
per-detector rates measured after the beamsplitter. Doubling them gives the
mean number per pulse before the beamsplitter:

    n_p eta_d      = 2 * laser_singles / R
    n_dc eta_g eta_c = 2 * gate_coincidences / R

The triple baseline is then ``1/2 (n_dc eta_g eta_c)(n_p eta_d) R``. With the
gate bypassed and Poissonian light the c-d accidental rate is
``R * (singles_per_detector / R)^2``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classical import ClassicalInputs, output_intensities
from .detection import DetectorPair, interfering_distribution
from .errors import ModelValidityError
from .fock import (
    BeamsplitterParams,
    FockVector,
    JointDistribution,
    beamsplitter_transform,
    coherent_amplitudes,
    joint_distribution,
    number_state,
    product_state,
    recommended_cutoff,
)

MAX_SAMPLING_TAIL = 1e-6
_BATCH = 1 << 20


@dataclass(frozen=True)
class QuantumSource:
    """``|alpha>_a`` times ``|1>_b`` (or ``|0>_b``), or an explicit ``|n>|m>``."""

    alpha_sq: float = 0.0
    single_photon: bool = True
    bs: BeamsplitterParams = field(default_factory=BeamsplitterParams.balanced)
    det: DetectorPair = field(default_factory=DetectorPair.ideal)
    cutoff: int | None = None
    fock_input: tuple[int, int] | None = None

    def distribution(self) -> JointDistribution:
        if self.fock_input is not None:
            n, m = self.fock_input
            return joint_distribution(beamsplitter_transform(number_state(n, m), self.bs))
        if self.alpha_sq < 0:
            raise ValueError("alpha_sq must be >= 0")
        cutoff = self.cutoff if self.cutoff is not None else recommended_cutoff(self.alpha_sq) + 1
        if self.single_photon:
            return interfering_distribution(self.alpha_sq, self.bs, cutoff)
        coh = coherent_amplitudes(math.sqrt(self.alpha_sq), cutoff)
        vac = np.array([1.0 + 0j])
        state = product_state(coh, FockVector(vac), cutoff)
        return joint_distribution(beamsplitter_transform(state, self.bs))


@dataclass(frozen=True)
class ClassicalSource:
    inputs: ClassicalInputs
    bs: BeamsplitterParams = field(default_factory=BeamsplitterParams.balanced)
    det: DetectorPair = field(default_factory=DetectorPair.ideal)


@dataclass(frozen=True)
class PulseExperimentConfig:
    source: QuantumSource | ClassicalSource
    pulses: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if int(self.pulses) < 1:
            raise ValueError("pulses must be >= 1")
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")
        if self.seed is None or int(self.seed) < 0:
            raise ValueError("seed must be a non-negative integer")


def _binomial_se(k: int, n: int) -> float:
    p = k / n
    return math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True)
class CountRecord:
    pulses: int
    clicks_c: int
    clicks_d: int
    coincidences_cd: int
    gate_counts: int | None = None
    triples: int | None = None

    def __post_init__(self):
        if self.coincidences_cd > min(self.clicks_c, self.clicks_d):
            raise ValueError("coincidences exceed singles")
        if max(self.clicks_c, self.clicks_d) > self.pulses:
            raise ValueError("counts exceed pulses")

    @property
    def p11(self) -> float:
        return self.coincidences_cd / self.pulses

    @property
    def p11_se(self) -> float:
        return _binomial_se(self.coincidences_cd, self.pulses)

    @property
    def pc1(self) -> float:
        return self.clicks_c / self.pulses

    @property
    def pc1_se(self) -> float:
        return _binomial_se(self.clicks_c, self.pulses)

    @property
    def pd1(self) -> float:
        return self.clicks_d / self.pulses

    @property
    def pd1_se(self) -> float:
        return _binomial_se(self.clicks_d, self.pulses)

    def visibility(self) -> tuple[float, float]:
        """Empirical ``1 - p11/(pc1 pd1)`` and its delta-method standard error."""
        N = self.pulses
        p11 = self.p11
        p10 = (self.clicks_c - self.coincidences_cd) / N
        p01 = (self.clicks_d - self.coincidences_cd) / N
        A, B = p10 + p11, p01 + p11
        if A * B == 0.0:
            return math.nan, math.nan
        v = 1.0 - p11 / (A * B)
        grad = np.array([
            p11 / (A * B * B),
            p11 / (A * A * B),
            -1.0 / (A * B) + p11 * (A + B) / (A * A * B * B),
        ])
        p = np.array([p01, p10, p11])
        cov = (np.diag(p) - np.outer(p, p)) / N
        var = float(grad @ cov @ grad)
        return v, math.sqrt(max(var, 0.0))

    def as_dict(self) -> dict:
        v, v_se = self.visibility()
        return {
            "pulses": self.pulses,
            "clicks_c": self.clicks_c,
            "clicks_d": self.clicks_d,
            "coincidences_cd": self.coincidences_cd,
            "gate_counts": self.gate_counts,
            "triples": self.triples,
            "p_c": self.pc1, "p_c_se": self.pc1_se,
            "p_d": self.pd1, "p_d_se": self.pd1_se,
            "p_cd": self.p11, "p_cd_se": self.p11_se,
            "visibility": None if math.isnan(v) else v,
            "visibility_se": None if math.isnan(v_se) else v_se,
        }


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (i < extra) for i in range(parts)]


def _count_quantum(cdf, cutoff, det, pulses, rng):
    nc = nd = ncd = 0
    side = cutoff + 1
    for size in _split(pulses, max(1, -(-pulses // _BATCH))):
        u = rng.random(size) * cdf[-1]
        flat = np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)
        n, m = np.divmod(flat, side)
        hit_c = rng.binomial(n, det.eta1) > 0
        hit_d = rng.binomial(m, det.eta2) > 0
        nc += int(hit_c.sum())
        nd += int(hit_d.sum())
        ncd += int((hit_c & hit_d).sum())
    return nc, nd, ncd


def _count_classical(src: ClassicalSource, pulses, rng):
    nc = nd = ncd = 0
    for size in _split(pulses, max(1, -(-pulses // _BATCH))):
        phi = rng.uniform(0.0, 2.0 * math.pi, size)
        Ic, Id = output_intensities(src.inputs.Ia, src.inputs.Ib, phi, src.bs)
        hit_c = rng.poisson(src.det.eta1 * np.maximum(Ic, 0.0)) > 0
        hit_d = rng.poisson(src.det.eta2 * np.maximum(Id, 0.0)) > 0
        nc += int(hit_c.sum())
        nd += int(hit_d.sum())
        ncd += int((hit_c & hit_d).sum())
    return nc, nd, ncd


def simulate_counts(config: PulseExperimentConfig) -> CountRecord:
    """Simulate ``config.pulses`` independent pulses.

    Pulses are divided across ``config.workers`` substreams spawned from
    ``config.seed``; the record depends only on (config, seed, workers).
    Quantum sources whose truncated distribution misses more than 1e-6 of
    the probability are rejected with :class:`ModelValidityError`.
    """
    src = config.source
    streams = np.random.SeedSequence(int(config.seed)).spawn(config.workers)
    shares = _split(int(config.pulses), config.workers)

    if isinstance(src, QuantumSource):
        dist = src.distribution()
        if dist.tail > MAX_SAMPLING_TAIL:
            raise ModelValidityError(
                f"truncated distribution misses {dist.tail:.3g} probability; raise the cutoff"
            )
        cdf = np.cumsum(dist.probabilities.ravel())

        def work(args):
            ss, n = args
            return _count_quantum(cdf, dist.cutoff, src.det, n, np.random.default_rng(ss))
    else:
        def work(args):
            ss, n = args
            return _count_classical(src, n, np.random.default_rng(ss))

    jobs = list(zip(streams, shares))
    if config.workers == 1:
        parts = [work(jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(work, jobs))
    nc, nd, ncd = (sum(col) for col in zip(*parts))
    return CountRecord(int(config.pulses), nc, nd, ncd)


@dataclass(frozen=True)
class RateConfig:
    rep_rate: float
    laser_singles_per_detector: float
    dc_singles_per_detector: float
    gate_coincidence_per_arm: float

    def __post_init__(self):
        rates = (self.laser_singles_per_detector, self.dc_singles_per_detector,
                 self.gate_coincidence_per_arm)
        if self.rep_rate < 0 or any(r < 0 for r in rates):
            raise ValueError("rates must be >= 0")
        if any(r > self.rep_rate for r in rates):
            raise ValueError("count rates cannot exceed the repetition rate")


@dataclass(frozen=True)
class RatePrediction:
    triple_baseline: float  # cps
    ungated_coincidence: float  # cps
    n_p_eta_d: float
    n_dc_eta_g_eta_c: float


def predict_rates(r: RateConfig) -> RatePrediction:
    """Baseline triple rate and ungated c-d coincidence rate from singles."""
    if r.rep_rate == 0:
        return RatePrediction(0.0, 0.0, 0.0, 0.0)
    n_p_eta = 2.0 * r.laser_singles_per_detector / r.rep_rate
    n_dc_eta2 = 2.0 * r.gate_coincidence_per_arm / r.rep_rate
    triple = 0.5 * n_dc_eta2 * n_p_eta * r.rep_rate
    singles = (r.laser_singles_per_detector + r.dc_singles_per_detector) / r.rep_rate
    ungated = r.rep_rate * singles * singles
    return RatePrediction(triple, ungated, n_p_eta, n_dc_eta2)


def nfold_rate_scaling(N: int, n_dc: float, eta: float, rep_rate: float,
                       gate_all: bool = True) -> float:
    """N-photon coincidence rate, ``R n_dc^N eta^(2N)`` if every photon is gated,
    ``R n_dc^N eta^(N+1)`` if only one is."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0.0 < n_dc < 1.0:
        raise ValueError("n_dc must lie in (0, 1)")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    exponent = 2 * N if gate_all else N + 1
    return rep_rate * n_dc**N * eta**exponent
