"""Fit the two bundled synthetic scans (gated and ungated)."""

from pathlib import Path

from photonmix.analysis import fit_dip, read_dataset

data_dir = Path(__file__).resolve().parent / "data"
for name in ("synthetic_gated.csv", "synthetic_ungated.csv"):
    result = fit_dip(read_dataset(data_dir / name))
    d = result.as_dict()
    print(f"{name}: V = {d['visibility']:.4f} +- {d['visibility_err']:.4f}, "
          f"w = {d['half_width_1e_um']:.1f} +- {d['half_width_1e_um_err']:.1f} um, "
          f"chi2_red = {d['chi2_red']:.2f}, degenerate = {d['degenerate']}")
