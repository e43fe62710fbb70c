"""Gaussian dip fitting for coincidence-versus-delay data.

The model is

    rate(x) = B * (1 - V * exp(-(x - x0)^2 / w^2))

with ``w`` the 1/e half-width of the dip. Fits minimise Poisson-weighted
squared residuals of the rates with a Levenberg-Marquardt loop.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, UM
from .errors import DegenerateDataError

MIN_POINTS = 6
PARAM_NAMES = ("baseline", "visibility", "half_width_1e", "center")


@dataclass(frozen=True)
class DipParams:
    baseline: float  # cps
    visibility: float
    half_width_1e: float  # m
    center: float = 0.0  # m

    def as_array(self) -> np.ndarray:
        return np.array([self.baseline, self.visibility, self.half_width_1e, self.center])


def dip_model(x, baseline, visibility, half_width_1e, center=0.0):
    x = np.asarray(x, dtype=float)
    g = np.exp(-((x - center) / half_width_1e) ** 2)
    return baseline * (1.0 - visibility * g)


def _jacobian(x, p):
    B, V, w, x0 = p
    u = x - x0
    g = np.exp(-(u / w) ** 2)
    J = np.empty((len(x), 4))
    J[:, 0] = 1.0 - V * g
    J[:, 1] = -B * g
    J[:, 2] = -B * V * g * 2.0 * u * u / w**3
    J[:, 3] = -B * V * g * 2.0 * u / w**2
    return J


@dataclass(frozen=True)
class DipDataset:
    """Counts recorded at each delay (m) over a given duration (s)."""

    delays: np.ndarray
    counts: np.ndarray
    durations: np.ndarray
    label: str = ""

    def __post_init__(self):
        delays = np.asarray(self.delays, dtype=float)
        counts = np.asarray(self.counts)
        durations = np.broadcast_to(np.asarray(self.durations, dtype=float), delays.shape)
        if delays.ndim != 1 or counts.shape != delays.shape:
            raise ValueError("delays and counts must be 1-D and of equal length")
        if np.any(counts < 0) or not np.all(np.isfinite(delays)):
            raise ValueError("counts must be >= 0 and delays finite")
        if np.any(durations <= 0):
            raise ValueError("durations must be > 0")
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "durations", np.array(durations))

    def __len__(self):
        return len(self.delays)

    @property
    def rates(self) -> np.ndarray:
        return self.counts / self.durations

    def poisson_weights(self) -> np.ndarray:
        """Inverse variance of each rate, flooring the count at 1."""
        return self.durations**2 / np.maximum(self.counts, 1)


@dataclass(frozen=True)
class DipFitResult:
    baseline: float
    visibility: float
    half_width_1e: float
    center: float
    baseline_err: float
    visibility_err: float
    half_width_1e_err: float
    center_err: float
    rss: float
    chi2_red: float
    converged: bool
    iterations: int
    n_points: int
    width_resolved: bool = True
    covariance: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def params(self) -> DipParams:
        return DipParams(self.baseline, self.visibility, self.half_width_1e, self.center)

    @property
    def degenerate(self) -> bool:
        """True when the dip is not resolved: no convergence, out-of-range V,
        a width below the delay step or beyond the scanned range, or V
        consistent with zero."""
        if not self.converged or not (-0.1 <= self.visibility <= 1.1):
            return True
        if not self.half_width_1e > 0 or not self.width_resolved:
            return True
        return abs(self.visibility) < 2.0 * self.visibility_err

    def as_dict(self) -> dict:
        return {
            "baseline_cps": self.baseline,
            "baseline_cps_err": self.baseline_err,
            "visibility": self.visibility,
            "visibility_err": self.visibility_err,
            "half_width_1e_um": self.half_width_1e / UM,
            "half_width_1e_um_err": self.half_width_1e_err / UM,
            "half_width_1e_fs": self.half_width_1e / C_LIGHT * 1e15,
            "center_um": self.center / UM,
            "center_um_err": self.center_err / UM,
            "rss": self.rss,
            "chi2_red": self.chi2_red,
            "converged": self.converged,
            "degenerate": self.degenerate,
            "iterations": self.iterations,
            "n_points": self.n_points,
            "width_resolved": self.width_resolved,
        }


def initial_guess(data: DipDataset) -> DipParams:
    """Data-driven starting point for :func:`fit_dip`."""
    x = data.delays
    y = data.rates
    order = np.argsort(x)
    x, y = x[order], y[order]
    # baseline from the quarter of points farthest from the grid middle
    dist = np.abs(x - 0.5 * (x.min() + x.max()))
    outer = dist >= np.quantile(dist, 0.75)
    B = float(np.mean(y[outer]))
    smooth = np.convolve(np.pad(y, 1, mode="edge"), np.ones(3) / 3.0, mode="valid")
    i0 = int(np.argmin(smooth))
    x0 = float(x[i0])
    depth = B - smooth[i0]
    V = float(np.clip(depth / B, 0.01, 1.0)) if B > 0 else 0.5
    half = B - 0.5 * depth
    left = next((x[i] for i in range(i0, -1, -1) if smooth[i] >= half), x[0])
    right = next((x[i] for i in range(i0, len(x)) if smooth[i] >= half), x[-1])
    w = 0.5 * (right - left)
    if not w > 0:
        w = 0.25 * (x[-1] - x[0])
    return DipParams(B, V, float(w), x0)


def fit_dip(data: DipDataset, guess: DipParams | None = None, weighting: str = "poisson",
            max_iter: int = 200, xtol: float = 1e-10) -> DipFitResult:
    """Fit the Gaussian dip model to a dataset.

    Damping is multiplied by 10 after a rejected step and divided by 10 after
    an accepted one; iteration stops once the relative parameter change
    drops below ``xtol`` or after ``max_iter`` iterations (``converged`` is
    then False). Uncertainties come from the Gauss-Newton covariance scaled
    by the reduced chi-square.
    """
    n = len(data)
    if n < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points, got {n}")
    if np.all(data.counts == data.counts[0]) and np.all(data.durations == data.durations[0]):
        raise DegenerateDataError("all counts are equal; there is no dip to fit")
    if weighting == "poisson":
        sw = np.sqrt(data.poisson_weights())
    elif weighting == "none":
        sw = np.ones(n)
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    if guess is None:
        guess = initial_guess(data)

    # work in units where every parameter is of order one
    scale = np.array([abs(guess.baseline) or 1.0, 1.0,
                      abs(guess.half_width_1e) or 1.0, abs(guess.half_width_1e) or 1.0])
    x = data.delays
    y = data.rates

    def resid(q):
        p = q * scale
        return sw * (y - dip_model(x, *p))

    def jac(q):
        return -sw[:, None] * _jacobian(x, q * scale) * scale[None, :]

    q = guess.as_array() / scale
    r = resid(q)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        J = jac(q)
        A = J.T @ J
        g = J.T @ r
        diag = np.diag(A).copy()
        diag[diag == 0] = 1.0
        while True:
            try:
                step = np.linalg.solve(A + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                step = None
            if step is not None:
                q_new = q + step
                r_new = resid(q_new)
                cost_new = float(r_new @ r_new)
                if np.isfinite(cost_new) and cost_new <= cost:
                    break
            lam *= 10.0
            if lam > 1e16:
                break
        if lam > 1e16:
            # no descent direction left: sitting on the minimum to rounding
            converged = True
            break
        rel = np.max(np.abs(step) / (np.abs(q) + 1e-12))
        q, r, cost = q_new, r_new, cost_new
        lam = max(lam / 10.0, 1e-12)
        if rel < xtol:
            converged = True
            break

    p = q * scale
    p[2] = abs(p[2])
    J = _jacobian(x, p) * sw[:, None]
    dof = max(n - 4, 1)
    chi2_red = cost / dof
    cov = np.linalg.pinv(J.T @ J) * chi2_red
    err = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    xs = np.unique(x)
    step = np.min(np.diff(xs)) if len(xs) > 1 else 0.0
    resolved = bool(2.0 * step <= p[2] <= 0.5 * (xs[-1] - xs[0]))
    return DipFitResult(
        float(p[0]), float(p[1]), float(p[2]), float(p[3]),
        float(err[0]), float(err[1]), float(err[2]), float(err[3]),
        rss=cost, chi2_red=chi2_red, converged=converged, iterations=it,
        n_points=n, width_resolved=resolved, covariance=cov,
    )


def synthesize_dataset(truth: DipParams, delays, duration_per_point, seed,
                       label: str = "") -> DipDataset:
    """Poisson counts with mean ``rate(x) * duration`` at each delay."""
    delays = np.asarray(delays, dtype=float)
    durations = np.broadcast_to(np.asarray(duration_per_point, dtype=float), delays.shape)
    if np.any(durations <= 0):
        raise ValueError("durations must be > 0")
    mean = dip_model(delays, truth.baseline, truth.visibility, truth.half_width_1e,
                     truth.center) * durations
    rng = np.random.default_rng(seed)
    counts = rng.poisson(mean)
    return DipDataset(delays, counts, np.array(durations), label)


# CSV format: '#' comment lines, then a header "delay_um,counts,duration_s".
DATASET_COLUMNS = ("delay_um", "counts", "duration_s")


def format_number(v) -> str:
    """Shortest round-trip decimal representation."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def dataset_to_csv(data: DipDataset, comments=()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    buf.write(",".join(DATASET_COLUMNS) + "\n")
    for x, c, d in zip(data.delays, data.counts, data.durations):
        buf.write(f"{format_number(x / UM)},{format_number(int(c))},{format_number(d)}\n")
    return buf.getvalue()


def dataset_from_csv(text: str, label: str = "") -> DipDataset:
    """Parse the dataset CSV format; raises ValueError when malformed."""
    rows = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty dataset file")
    reader = csv.DictReader(rows)
    missing = set(DATASET_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"missing columns: {sorted(missing)}")
    delays, counts, durations = [], [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            delays.append(float(row["delay_um"]) * UM)
            c = float(row["counts"])
            durations.append(float(row["duration_s"]))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"row {lineno}: {exc}") from None
        if c != int(c):
            raise ValueError(f"row {lineno}: counts must be integers")
        counts.append(int(c))
    return DipDataset(np.array(delays), np.array(counts), np.array(durations), label)


def read_dataset(path, label: str | None = None) -> DipDataset:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return dataset_from_csv(text, label if label is not None else str(path))


def write_dataset(path, data: DipDataset, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dataset_to_csv(data, comments))
