"""Command-line entry point: ``photonmix <subcommand> ...``.

Subcommands
    visibility-curve   quantum and classical visibility versus |alpha|^2 (CSV)
    dip-profile        triple-coincidence rate versus delay (CSV)
    simulate           pulse-level Monte Carlo from a JSON config
    rates              rate predictions from measured singles
    synthesize         Poisson dip dataset for fit validation (CSV)
    fit                Gaussian dip fit of a dataset CSV (JSON)

Exit codes: 0 ok, 2 bad arguments/config, 3 I/O failure, 4 model-validity
rejection, 5 degenerate data. Relative output paths are resolved against
$PHOTONMIX_OUTPUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    DipParams,
    dataset_to_csv,
    fit_dip,
    format_number,
    read_dataset,
    synthesize_dataset,
)
from .classical import ClassicalInputs, visibility_classical
from .constants import C_LIGHT, UM
from .detection import DetectorPair, click_table, interfering_distribution
from .errors import DegenerateDataError, ModelValidityError, TruncationError
from .fock import BeamsplitterParams
from .montecarlo import (
    ClassicalSource,
    PulseExperimentConfig,
    QuantumSource,
    RateConfig,
    nfold_rate_scaling,
    predict_rates,
    simulate_counts,
)
from .temporal import TemporalParams, bandwidth_nm_to_sigma, dip_profile

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_MODEL, EXIT_DEGENERATE = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "PHOTONMIX_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _write_text(path: str, text: str) -> None:
    p = _out_path(path)
    with open(p, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(header, rows, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines.extend(",".join(format_number(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_visibility_curve(args) -> int:
    if not 0 <= args.alpha_sq_min <= args.alpha_sq_max or (args.alpha_sq_min == 0 and args.points > 1):
        raise ConfigError("need 0 < alpha-sq-min <= alpha-sq-max for a log-spaced grid")
    if args.points < 1:
        raise ConfigError("points must be >= 1")
    if args.points == 1:
        grid = np.array([args.alpha_sq_min])
    else:
        grid = np.geomspace(args.alpha_sq_min, args.alpha_sq_max, args.points)
    det = DetectorPair(args.eta1, args.eta2)
    bs = BeamsplitterParams.from_reflectance(args.r_sq)
    rows = []
    for a in grid:
        table = click_table(interfering_distribution(float(a), bs, args.cutoff), det)
        denom = table.pc1 * table.pd1
        vq = 1.0 - table.p11 / denom if denom > 0 else math.nan
        # the classical curve reads the x axis as <Ia>/<Ib> with <Ib> one photon
        rows.append((float(a), vq, visibility_classical(float(a)), table.bound))
    comments = [f"eta1={args.eta1!r} eta2={args.eta2!r} r_sq={args.r_sq!r}"]
    _write_text(args.out, _csv(("alpha_sq", "V_quantum", "V_classical", "truncation_bound"),
                               rows, comments))
    return EXIT_OK


def cmd_dip_profile(args) -> int:
    lo, hi = args.delay_range
    if hi < lo or args.points < 1:
        raise ConfigError("delay range must satisfy min <= max and points >= 1")
    sigma = bandwidth_nm_to_sigma(args.filter_fwhm_nm, args.center_nm)
    p = TemporalParams(sigma=sigma, sigma_2p=args.sigma2p, n_dc=args.n_dc, n_p=args.n_p,
                       eta_g=args.eta, eta_c=args.eta, eta_d=args.eta, rep_rate=args.rep_rate)
    if lo == hi or args.points == 1:
        delays_um = np.array([lo])
    else:
        delays_um = np.linspace(lo, hi, args.points)
    prof = dip_profile(delays_um * UM, p)
    rows = [(float(x), float(x * UM / C_LIGHT * 1e15), float(r))
            for x, r in zip(delays_um, prof.rates)]
    comments = [
        f"sigma_rad_per_s={format_number(sigma)}",
        f"visibility={format_number(prof.visibility)}",
        f"half_width_1e_um={format_number(prof.half_width_1e / UM)}",
        f"half_width_1e_fs={format_number(prof.half_width_1e / C_LIGHT * 1e15)}",
        f"baseline_cps={format_number(prof.baseline)}",
    ]
    _write_text(args.out, _csv(("delay_um", "delay_fs", "rate_cps"), rows, comments))
    return EXIT_OK


_QUANTUM_KEYS = {"source", "alpha_sq", "single_photon", "fock_input", "reflectance",
                 "eta_c", "eta_d", "cutoff", "pulses", "seed", "workers"}
_CLASSICAL_KEYS = {"source", "intensity_a", "intensity_b", "reflectance",
                   "eta_c", "eta_d", "pulses", "seed", "workers"}


def load_simulation_config(data: dict) -> PulseExperimentConfig:
    """Build a :class:`PulseExperimentConfig` from the flat JSON schema."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    kind = data.get("source", "quantum")
    allowed = _QUANTUM_KEYS if kind == "quantum" else _CLASSICAL_KEYS
    if kind not in ("quantum", "classical"):
        raise ConfigError(f"unknown source {kind!r}")
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("seed", "pulses"):
        if key not in data:
            raise ConfigError(f"config needs {key!r}")
    try:
        bs = BeamsplitterParams.from_reflectance(float(data.get("reflectance", 0.5)))
        det = DetectorPair(float(data.get("eta_c", 1.0)), float(data.get("eta_d", 1.0)))
        if kind == "quantum":
            fock = data.get("fock_input")
            src = QuantumSource(
                alpha_sq=float(data.get("alpha_sq", 0.0)),
                single_photon=bool(data.get("single_photon", True)),
                bs=bs, det=det, cutoff=data.get("cutoff"),
                fock_input=tuple(int(v) for v in fock) if fock is not None else None,
            )
        else:
            src = ClassicalSource(ClassicalInputs(float(data["intensity_a"]),
                                                  float(data["intensity_b"])), bs, det)
        return PulseExperimentConfig(src, int(data["pulses"]), int(data["seed"]),
                                     int(data.get("workers", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def cmd_simulate(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    config = load_simulation_config(raw)
    record = simulate_counts(config)
    out = {"config": raw, "counts": record.as_dict()}
    v, v_se = record.visibility()
    summary = [f"pulses={record.pulses} clicks_c={record.clicks_c} "
               f"clicks_d={record.clicks_d} coincidences={record.coincidences_cd}",
               f"visibility={v:.6g} +- {v_se:.3g}"]
    src = config.source
    if isinstance(src, QuantumSource):
        table = click_table(src.distribution(), src.det)
        if table.pc1 * table.pd1 > 0:
            out["analytic_visibility"] = table.visibility()
            summary.append(f"analytic_visibility={table.visibility():.6g}")
        out["analytic_p_cd"] = table.p11
    _write_text(args.out, _json(out))
    print("\n".join(summary))
    return EXIT_OK


def cmd_rates(args) -> int:
    pred = predict_rates(RateConfig(args.rep_rate_hz, args.laser_singles_cps,
                                    args.dc_singles_cps, args.gate_coinc_cps))
    print(f"triple_baseline_cps={format_number(pred.triple_baseline)}")
    print(f"ungated_coincidence_cps={format_number(pred.ungated_coincidence)}")
    print(f"n_p_eta_d={format_number(pred.n_p_eta_d)}")
    print(f"n_dc_eta_g_eta_c={format_number(pred.n_dc_eta_g_eta_c)}")
    if args.nfold:
        for N in range(1, args.nfold + 1):
            a = nfold_rate_scaling(N, args.nfold_n_dc, args.nfold_eta, args.rep_rate_hz, True)
            b = nfold_rate_scaling(N, args.nfold_n_dc, args.nfold_eta, args.rep_rate_hz, False)
            print(f"N={N} all_gated_cps={format_number(a)} one_gated_cps={format_number(b)}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    lo, hi = args.delay_range
    if hi < lo or args.points < 1 or args.duration_s <= 0:
        raise ConfigError("invalid delay range, points or duration")
    truth = DipParams(args.baseline_cps, args.visibility, args.half_width_um * UM,
                      args.center_um * UM)
    delays = np.linspace(lo, hi, args.points) * UM if args.points > 1 else np.array([lo * UM])
    data = synthesize_dataset(truth, delays, args.duration_s, args.seed)
    comments = [f"truth baseline_cps={format_number(args.baseline_cps)} "
                f"visibility={format_number(args.visibility)} "
                f"half_width_1e_um={format_number(args.half_width_um)} "
                f"center_um={format_number(args.center_um)} seed={args.seed}"]
    _write_text(args.out, dataset_to_csv(data, comments))
    return EXIT_OK


def cmd_fit(args) -> int:
    data = read_dataset(args.input)
    result = fit_dip(data, weighting=args.weighting)
    out = result.as_dict()
    out["weighting"] = args.weighting
    out["input"] = Path(args.input).name
    _write_text(args.out, _json(out))
    print(f"visibility={result.visibility:.6g} +- {result.visibility_err:.3g} "
          f"half_width_1e_um={result.half_width_1e / UM:.6g} converged={result.converged}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photonmix", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("visibility-curve", help="visibility versus coherent intensity")
    p.add_argument("--alpha-sq-min", type=float, default=0.01)
    p.add_argument("--alpha-sq-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--eta1", type=float, required=True)
    p.add_argument("--eta2", type=float, required=True)
    p.add_argument("--r-sq", type=float, default=0.5)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_visibility_curve)

    p = sub.add_parser("dip-profile", help="triple-coincidence rate versus delay")
    p.add_argument("--filter-fwhm-nm", type=float, required=True)
    p.add_argument("--center-nm", type=float, required=True)
    p.add_argument("--sigma2p", type=float, default=math.inf,
                   help="pump 1/e^2 width in rad/s (default: infinite)")
    p.add_argument("--n-dc", type=float, required=True)
    p.add_argument("--n-p", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--rep-rate", type=float, required=True)
    p.add_argument("--delay-range", type=float, nargs=2, metavar=("MIN_UM", "MAX_UM"),
                   default=(-400.0, 400.0))
    p.add_argument("--points", type=int, default=161)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dip_profile)

    p = sub.add_parser("simulate", help="pulse-level Monte Carlo")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rates", help="rate predictions from measured singles")
    p.add_argument("--rep-rate-hz", type=float, required=True)
    p.add_argument("--laser-singles-cps", type=float, required=True)
    p.add_argument("--dc-singles-cps", type=float, required=True)
    p.add_argument("--gate-coinc-cps", type=float, required=True)
    p.add_argument("--nfold", type=int, default=0, help="also print N-fold scaling up to N")
    p.add_argument("--nfold-n-dc", type=float, default=0.1)
    p.add_argument("--nfold-eta", type=float, default=0.1)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("synthesize", help="Poisson dip dataset")
    p.add_argument("--baseline-cps", type=float, required=True)
    p.add_argument("--visibility", type=float, required=True)
    p.add_argument("--half-width-um", type=float, required=True)
    p.add_argument("--center-um", type=float, default=0.0)
    p.add_argument("--delay-range", type=float, nargs=2, metavar=("MIN_UM", "MAX_UM"),
                   default=(-400.0, 400.0))
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--duration-s", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("fit", help="Gaussian dip fit")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--weighting", choices=("poisson", "none"), default="poisson")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ModelValidityError, TruncationError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except DegenerateDataError as exc:
        print(f"degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
