"""Truncated two-mode Fock-space algebra.

States are dense complex arrays over photon numbers ``0..cutoff``. A
two-mode state ``amplitudes[n, m]`` holds the coefficient of ``|n>|m>``;
before the beamsplitter the modes are (a, b), after it (c, d).

The beamsplitter maps creation operators as

    a^dag -> t c^dag + r d^dag,    b^dag -> r c^dag + t d^dag

so ``|n>_a |m>_b`` becomes ``(t c^dag + r d^dag)^n (r c^dag + t d^dag)^m |0,0>
/ sqrt(n! m!)``. Expanding both binomials gives the amplitude on
``|j+k>_c |n+m-j-k>_d`` as

    C(n,j) C(m,k) t^(m-k+j) r^(n-j+k) sqrt((j+k)! (n+m-j-k)! / (n! m!))

Note the reflection exponent ``n-j+k``; ``n-k+j`` does not conserve norm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CutoffOverflowError, TruncationError

DEFAULT_TAIL_TOL = 1e-10


@lru_cache(maxsize=8)
def log_factorial_table(nmax: int) -> np.ndarray:
    """Return ``log(k!)`` for ``k = 0..nmax`` as a cumulative sum of logs."""
    out = np.zeros(nmax + 1)
    if nmax > 0:
        out[1:] = np.cumsum(np.log(np.arange(1, nmax + 1, dtype=float)))
    out.flags.writeable = False
    return out


def recommended_cutoff(alpha_sq: float) -> int:
    """Cutoff keeping the coherent tail mass well below 1e-10."""
    return int(math.ceil(alpha_sq + 10.0 * math.sqrt(alpha_sq + 1.0) + 10.0))


def _unit_phasor(phase: float) -> complex:
    """``exp(i phase)``, exact for multiples of pi/2."""
    quarter = phase / (math.pi / 2)
    if quarter == round(quarter):
        return (1, 1j, -1, -1j)[int(round(quarter)) % 4]
    return complex(math.cos(phase), math.sin(phase))


@dataclass(frozen=True)
class BeamsplitterParams:
    """Lossless beamsplitter.

    The complex coefficients are ``t = t_mag e^{i t_phase}`` and
    ``r = r_mag e^{i r_phase}``. The default convention is t real and
    ``r = i r_mag``. Any phases with ``cos(t_phase - r_phase) = 0`` describe
    a lossless device and give identical click statistics.
    """

    t_mag: float
    r_mag: float
    t_phase: float = 0.0
    r_phase: float = math.pi / 2

    def __post_init__(self):
        if not (0.0 <= self.t_mag <= 1.0 and 0.0 <= self.r_mag <= 1.0):
            raise ValueError("t_mag and r_mag must lie in [0, 1]")
        if abs(self.t_mag**2 + self.r_mag**2 - 1.0) > 1e-12:
            raise ValueError(
                f"|t|^2 + |r|^2 = {self.t_mag**2 + self.r_mag**2!r}, expected 1"
            )
        if abs(math.cos(self.t_phase - self.r_phase)) > 1e-12:
            raise ValueError("t and r phases must differ by pi/2 (mod pi)")

    @classmethod
    def from_reflectance(cls, r_sq: float, **phases) -> "BeamsplitterParams":
        """Build from the intensity reflectance ``|r|^2``."""
        if not 0.0 <= r_sq <= 1.0:
            raise ValueError("reflectance must lie in [0, 1]")
        return cls(math.sqrt(1.0 - r_sq), math.sqrt(r_sq), **phases)

    @classmethod
    def balanced(cls, **phases) -> "BeamsplitterParams":
        return cls.from_reflectance(0.5, **phases)

    @property
    def t(self) -> complex:
        return self.t_mag * _unit_phasor(self.t_phase)

    @property
    def r(self) -> complex:
        return self.r_mag * _unit_phasor(self.r_phase)

    @property
    def transmittance(self) -> float:
        return self.t_mag**2

    @property
    def reflectance(self) -> float:
        return self.r_mag**2

    def swapped(self) -> "BeamsplitterParams":
        """Exchange the roles of transmission and reflection magnitudes."""
        return BeamsplitterParams(self.r_mag, self.t_mag, self.t_phase, self.r_phase)


@dataclass(frozen=True)
class FockVector:
    """Single-mode state truncated at ``cutoff``; ``tail`` is the lost mass."""

    amplitudes: np.ndarray
    tail: float = 0.0

    @property
    def cutoff(self) -> int:
        return len(self.amplitudes) - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class TwoModeState:
    """Dense two-mode amplitude grid, indexed ``[first mode, second mode]``."""

    amplitudes: np.ndarray
    tail: float = 0.0
    modes: tuple[str, str] = ("a", "b")

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise ValueError("amplitudes must be a square matrix")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def swapped(self) -> "TwoModeState":
        """Exchange the two modes."""
        return TwoModeState(self.amplitudes.T.copy(), self.tail, self.modes[::-1])


@dataclass(frozen=True)
class JointDistribution:
    """Photon-number probabilities ``probabilities[n, m]`` plus untracked tail."""

    probabilities: np.ndarray
    tail: float = 0.0

    @property
    def cutoff(self) -> int:
        return self.probabilities.shape[0] - 1

    def __getitem__(self, nm):
        n, m = nm
        if n > self.cutoff or m > self.cutoff:
            return 0.0
        return float(self.probabilities[n, m])


def coherent_amplitudes(alpha: complex, cutoff: int, strict: bool = False,
                        tol: float = DEFAULT_TAIL_TOL) -> FockVector:
    """Number-state expansion of the coherent state ``|alpha>``.

    Amplitudes are ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for
    ``n = 0..cutoff``. If the discarded tail exceeds ``tol`` a
    :class:`TruncationError` is raised in strict mode, otherwise a warning.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    alpha = complex(alpha)
    n = np.arange(cutoff + 1)
    lf = log_factorial_table(cutoff)
    mag = abs(alpha)
    if mag == 0.0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
    else:
        logmag = -0.5 * mag**2 + n * math.log(mag) - 0.5 * lf
        amps = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail > tol:
        msg = (f"coherent state |alpha|^2={mag**2:g} truncated at {cutoff} "
               f"loses {tail:.3g} probability (tolerance {tol:g})")
        if strict:
            raise TruncationError(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return FockVector(amps, tail)


def number_state(n: int, m: int, cutoff: int | None = None) -> TwoModeState:
    """The two-mode number state ``|n>|m>``."""
    if cutoff is None:
        cutoff = n + m
    if n > cutoff or m > cutoff:
        raise ValueError("photon numbers exceed cutoff")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[n, m] = 1.0
    return TwoModeState(amps)


def product_state(first: FockVector, second: FockVector, cutoff: int) -> TwoModeState:
    """Tensor product placed on a ``(cutoff+1)^2`` grid."""
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    a = first.amplitudes[: cutoff + 1]
    b = second.amplitudes[: cutoff + 1]
    amps[: len(a), : len(b)] = np.outer(a, b)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    return TwoModeState(amps, tail)


def mixed_input_state(alpha: complex, cutoff: int, strict: bool = False,
                      tol: float = DEFAULT_TAIL_TOL) -> TwoModeState:
    """``|alpha>_a |1>_b`` on a grid of size ``cutoff + 1``.

    The coherent part is kept up to ``cutoff - 1`` photons so that every
    populated component has total photon number ``<= cutoff`` and survives
    :func:`beamsplitter_transform` without overflow.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    coh = coherent_amplitudes(alpha, cutoff - 1, strict=strict, tol=tol)
    single = np.zeros(2, dtype=complex)
    single[1] = 1.0
    return product_state(coh, FockVector(single), cutoff)


def _powers(z: complex, nmax: int) -> np.ndarray:
    out = np.ones(nmax + 1, dtype=complex)
    for e in range(1, nmax + 1):
        out[e] = out[e - 1] * z
    return out


@lru_cache(maxsize=32)
def _transfer_tensor(cutoff: int, t: complex, r: complex) -> np.ndarray:
    """``U[n, m, p]``: amplitude of ``|n,m>`` on ``|p, n+m-p>`` (n+m <= cutoff)."""
    lf = log_factorial_table(cutoff)
    tp = _powers(t, cutoff)
    rp = _powers(r, cutoff)
    U = np.zeros((cutoff + 1, cutoff + 1, cutoff + 1), dtype=complex)
    for n in range(cutoff + 1):
        j = np.arange(n + 1)
        log_cj = lf[n] - lf[j] - lf[n - j]
        for m in range(cutoff + 1 - n):
            k = np.arange(m + 1)
            log_ck = lf[m] - lf[k] - lf[m - k]
            total = n + m
            J, K = np.meshgrid(j, k, indexing="ij")
            p = J + K
            logmag = (log_cj[:, None] + log_ck[None, :]
                      + 0.5 * (lf[p] + lf[total - p] - lf[n] - lf[m]))
            coeff = np.exp(logmag) * tp[m - K + J] * rp[n - J + K]
            np.add.at(U[n, m], p.ravel(), coeff.ravel())
    U.flags.writeable = False
    return U


def beamsplitter_transform(state: TwoModeState, bs: BeamsplitterParams) -> TwoModeState:
    """Apply the lossless beamsplitter to an input state in modes (a, b).

    Raises :class:`CutoffOverflowError` if a populated component has
    ``n + m > cutoff``.
    """
    amps = state.amplitudes
    cutoff = state.cutoff
    n_idx, m_idx = np.nonzero(amps)
    if np.any(n_idx + m_idx > cutoff):
        bad = [(int(a), int(b)) for a, b in zip(n_idx, m_idx) if a + b > cutoff]
        raise CutoffOverflowError(
            f"components {bad[:4]} exceed total photon number {cutoff}; raise the cutoff"
        )
    U = _transfer_tensor(cutoff, bs.t, bs.r)
    out = np.zeros_like(amps)
    p = np.arange(cutoff + 1)
    for n, m in zip(n_idx, m_idx):
        total = n + m
        contrib = amps[n, m] * U[n, m, : total + 1]
        out[p[: total + 1], total - p[: total + 1]] += contrib
    return TwoModeState(out, state.tail, ("c", "d"))


def joint_distribution(state: TwoModeState) -> JointDistribution:
    """Squared moduli of the amplitudes; tail is whatever mass is missing."""
    probs = np.abs(state.amplitudes) ** 2
    tail = max(0.0, 1.0 - float(probs.sum()))
    return JointDistribution(probs, tail)


def second_order_coefficients(alpha: complex, bs: BeamsplitterParams, cutoff: int = 3) -> np.ndarray:
    """Closed-form output of ``|alpha>|1>`` through the alpha^2 terms.

    Returns a ``(cutoff+1)^2`` amplitude grid over (c, d); requires cutoff >= 3.
    """
    if cutoff < 3:
        raise ValueError("cutoff must be >= 3 to hold the alpha^2 terms")
    alpha = complex(alpha)
    t, r = bs.t, bs.r
    s2, s3 = math.sqrt(2.0), math.sqrt(3.0)
    out = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    out[1, 0] = r
    out[0, 1] = t
    out[1, 1] = alpha * (t * t + r * r)
    out[2, 0] = alpha * r * t * s2
    out[0, 2] = alpha * r * t * s2
    a2 = alpha * alpha / s2
    out[3, 0] = a2 * r * t * t * s3
    out[2, 1] = a2 * t * (t * t + 2 * r * r)
    out[1, 2] = a2 * r * (2 * t * t + r * r)
    out[0, 3] = a2 * t * r * r * s3
    return out * math.exp(-abs(alpha) ** 2 / 2)


def verify_eq3_expansion(alpha: complex, bs: BeamsplitterParams,
                         cutoff: int | None = None) -> float:
    """Max |difference| between the exact transform of ``|alpha>|1>`` and the
    second-order closed form. Scales as ``|alpha|^3``."""
    if abs(alpha) >= 1.0:
        raise ValueError("|alpha| must be < 1 for the expansion to be meaningful")
    if cutoff is None:
        cutoff = max(4, recommended_cutoff(abs(alpha) ** 2))
    exact = beamsplitter_transform(mixed_input_state(alpha, cutoff), bs).amplitudes
    approx = second_order_coefficients(alpha, bs, cutoff)
    return float(np.max(np.abs(exact - approx)))
