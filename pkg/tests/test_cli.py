import csv
import json
import warnings
from pathlib import Path

import pytest

from photonmix.cli import main
from photonmix.detection import DetectorPair, visibility_quantum
from photonmix.fock import BeamsplitterParams

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def read_csv(path):
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def comments(path):
    return dict(ln[2:].split("=", 1) for ln in Path(path).read_text().splitlines()
                if ln.startswith("# ") and "=" in ln and " " not in ln[2:])


def test_visibility_curve(tmp_path):
    out = tmp_path / "vis.csv"
    assert main(["visibility-curve", "--eta1", "1", "--eta2", "1", "--points", "13",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["alpha_sq", "V_quantum", "V_classical", "truncation_bound"]
    assert float(rows[0]["alpha_sq"]) == 0.01 and float(rows[-1]["alpha_sq"]) == pytest.approx(10)
    assert float(rows[0]["V_quantum"]) > 0.9
    v = [float(r["V_quantum"]) for r in rows]
    assert all(a > b for a, b in zip(v, v[1:]))
    mid = [r for r in rows if float(r["alpha_sq"]) == pytest.approx(1.0)][0]
    assert float(mid["V_classical"]) == 0.5
    assert all(float(r["truncation_bound"]) < 1e-10 for r in rows)


def test_visibility_curve_single_point(tmp_path):
    out = tmp_path / "one.csv"
    assert main(["visibility-curve", "--eta1", "0.1", "--eta2", "0.1", "--points", "1",
                 "--alpha-sq-min", "0.2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1
    expected = visibility_quantum(0.2, DetectorPair(0.1, 0.1), BeamsplitterParams.balanced())
    assert float(rows[0]["V_quantum"]) == expected


def test_visibility_curve_bad_args(tmp_path):
    assert main(["visibility-curve", "--eta1", "1", "--eta2", "1", "--alpha-sq-min", "5",
                 "--alpha-sq-max", "1", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["visibility-curve", "--eta1", "2", "--eta2", "1",
                 "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["visibility-curve", "--eta1", "1"]) == 2


def test_io_failure_exit_code(tmp_path):
    bad = tmp_path / "missing-dir" / "x.csv"
    assert main(["visibility-curve", "--eta1", "1", "--eta2", "1", "--points", "1",
                 "--out", str(bad)]) == 3
    assert main(["fit", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o.json")]) == 3


def test_dip_profile(tmp_path):
    out = tmp_path / "dip.csv"
    assert main(["dip-profile", "--filter-fwhm-nm", "3", "--center-nm", "815",
                 "--n-dc", "1e-5", "--n-p", "2.06e-3", "--eta", "1", "--rep-rate", "1e8",
                 "--delay-range", "-1000", "1000", "--points", "201", "--out", str(out)]) == 0
    head = comments(out)
    assert float(head["half_width_1e_um"]) == pytest.approx(83, abs=1)
    assert float(head["half_width_1e_fs"]) == pytest.approx(277, abs=2)
    rows = read_csv(out)
    assert list(rows[0]) == ["delay_um", "delay_fs", "rate_cps"]
    assert float(rows[0]["rate_cps"]) == pytest.approx(1.03, rel=1e-9)
    assert float(rows[100]["rate_cps"]) == pytest.approx(0.0, abs=1e-12)


def test_dip_profile_zero_width_range(tmp_path):
    out = tmp_path / "dip.csv"
    assert main(["dip-profile", "--filter-fwhm-nm", "3", "--center-nm", "815",
                 "--n-dc", "0.01", "--n-p", "0.01", "--eta", "0.1", "--rep-rate", "1e8",
                 "--delay-range", "50", "50", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 1


def test_simulate_hom(tmp_path, capsys):
    out = tmp_path / "hom.out.json"
    assert main(["simulate", "--config", str(DATA / "hom.json"), "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["counts"]["coincidences_cd"] == 0
    assert "coincidences=0" in capsys.readouterr().out


def test_simulate_mixed_matches_analytic(tmp_path):
    out = tmp_path / "mixed.out.json"
    assert main(["simulate", "--config", str(DATA / "mixed.json"), "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    v, se = rec["counts"]["visibility"], rec["counts"]["visibility_se"]
    assert abs(v - rec["analytic_visibility"]) < 3 * se


def test_simulate_classical(tmp_path):
    out = tmp_path / "cl.out.json"
    assert main(["simulate", "--config", str(DATA / "classical.json"), "--out", str(out)]) == 0
    v = json.loads(out.read_text())["counts"]["visibility"]
    assert 0.4 < v < 0.55


@pytest.mark.parametrize("config,code", [
    ({"source": "quantum", "alpha_sq": 0.1, "pulses": 0, "seed": 1}, 2),
    ({"source": "quantum", "alpha_sq": 0.1, "pulses": 10}, 2),
    ({"source": "quantum", "alpha_sq": 0.1, "pulses": 10, "seed": 1, "colour": "red"}, 2),
    ({"source": "laser", "pulses": 10, "seed": 1}, 2),
    ({"source": "quantum", "alpha_sq": 9.0, "cutoff": 10, "pulses": 10, "seed": 1}, 4),
])
def test_simulate_config_errors(tmp_path, config, code):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(config))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.json")]) == code


def test_simulate_invalid_json(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.json")]) == 2


def test_rates(capsys):
    assert main(["rates", "--rep-rate-hz", "1e8", "--laser-singles-cps", "103e3",
                 "--dc-singles-cps", "5e3", "--gate-coinc-cps", "500"]) == 0
    out = dict(ln.split("=") for ln in capsys.readouterr().out.split())
    assert float(out["triple_baseline_cps"]) == pytest.approx(1.03)
    assert float(out["ungated_coincidence_cps"]) == pytest.approx(116.64)


def test_rates_zero_and_doubling(capsys):
    assert main(["rates", "--rep-rate-hz", "1e8", "--laser-singles-cps", "0",
                 "--dc-singles-cps", "0", "--gate-coinc-cps", "0"]) == 0
    out = dict(ln.split("=") for ln in capsys.readouterr().out.split())
    assert float(out["triple_baseline_cps"]) == 0 and float(out["ungated_coincidence_cps"]) == 0
    assert main(["rates", "--rep-rate-hz", "1e8", "--laser-singles-cps", "206e3",
                 "--dc-singles-cps", "5e3", "--gate-coinc-cps", "500"]) == 0
    out = dict(ln.split("=") for ln in capsys.readouterr().out.split())
    assert float(out["triple_baseline_cps"]) == pytest.approx(2.06)


def test_fit_bundled_gated(tmp_path):
    out = tmp_path / "fit.json"
    assert main(["fit", "--in", str(DATA / "synthetic_gated.csv"), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert abs(res["visibility"] - 0.628) <= 0.02
    assert abs(res["half_width_1e_um"] / 133 - 1) <= 0.05
    assert res["converged"] is True


def test_fit_bundled_ungated(tmp_path):
    out = tmp_path / "fit.json"
    assert main(["fit", "--in", str(DATA / "synthetic_ungated.csv"), "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert abs(res["visibility"] - 0.046) <= 0.005


def test_fit_rejects_short_and_flat_files(tmp_path):
    short = tmp_path / "short.csv"
    short.write_text("delay_um,counts,duration_s\n" + "".join(f"{i},{10 + i},1\n" for i in range(5)))
    assert main(["fit", "--in", str(short), "--out", str(tmp_path / "o.json")]) == 2
    flat = tmp_path / "flat.csv"
    flat.write_text("delay_um,counts,duration_s\n" + "".join(f"{i},10,1\n" for i in range(9)))
    assert main(["fit", "--in", str(flat), "--out", str(tmp_path / "o.json")]) == 5
    bad = tmp_path / "bad.csv"
    bad.write_text("delay,counts\n1,2\n")
    assert main(["fit", "--in", str(bad), "--out", str(tmp_path / "o.json")]) == 2


def test_synthesize_then_fit(tmp_path):
    data = tmp_path / "syn.csv"
    assert main(["synthesize", "--baseline-cps", "1.1", "--visibility", "0.628",
                 "--half-width-um", "133", "--duration-s", "1000", "--seed", "1",
                 "--out", str(data)]) == 0
    assert data.read_bytes() == (DATA / "synthetic_gated.csv").read_bytes()


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PHOTONMIX_OUTPUT_DIR", str(tmp_path))
    assert main(["visibility-curve", "--eta1", "1", "--eta2", "1", "--points", "1",
                 "--out", "rel.csv"]) == 0
    assert (tmp_path / "rel.csv").exists()


def test_commands_are_byte_deterministic(tmp_path):
    for i in (1, 2):
        assert main(["visibility-curve", "--eta1", "0.3", "--eta2", "0.4", "--points", "7",
                     "--out", str(tmp_path / f"v{i}.csv")]) == 0
        assert main(["dip-profile", "--filter-fwhm-nm", "3", "--center-nm", "815",
                     "--n-dc", "1e-3", "--n-p", "1e-3", "--eta", "0.2", "--rep-rate", "1e8",
                     "--out", str(tmp_path / f"d{i}.csv")]) == 0
    assert (tmp_path / "v1.csv").read_bytes() == (tmp_path / "v2.csv").read_bytes()
    assert (tmp_path / "d1.csv").read_bytes() == (tmp_path / "d2.csv").read_bytes()
