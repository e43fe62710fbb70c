"""Dip width set by 3 nm filters at 815 nm, and the expected count rates."""

import numpy as np

from photonmix.constants import UM, delay_m_to_fs
from photonmix.montecarlo import RateConfig, nfold_rate_scaling, predict_rates
from photonmix.temporal import TemporalParams, bandwidth_nm_to_sigma, dip_profile

sigma = bandwidth_nm_to_sigma(3.0, 815.0)
pred = predict_rates(RateConfig(1e8, 103e3, 5e3, 500))
params = TemporalParams(sigma=sigma, n_dc=pred.n_dc_eta_g_eta_c, n_p=pred.n_p_eta_d)
profile = dip_profile(np.linspace(-300, 300, 13) * UM, params)

print(f"sigma = {sigma:.4e} rad/s, dip 1/e half-width = {profile.half_width_1e / UM:.1f} um "
      f"({delay_m_to_fs(profile.half_width_1e):.0f} fs)")
print(f"triple baseline {pred.triple_baseline:.2f} cps, ungated coincidences "
      f"{pred.ungated_coincidence:.1f} cps")
for x, rate in zip(profile.delays / UM, profile.rates):
    print(f"  delay {x:7.1f} um  rate {rate:.4f} cps")
print("Scaling to more photons at n_dc=0.1, eta=0.1, 100 MHz:")
for N in (1, 2, 3):
    print(f"  N={N}: every photon gated {nfold_rate_scaling(N, 0.1, 0.1, 1e8):.3g} cps, "
          f"one gate {nfold_rate_scaling(N, 0.1, 0.1, 1e8, gate_all=False):.3g} cps")
