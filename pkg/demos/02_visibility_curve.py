"""Quantum versus classical interference visibility as the laser gets brighter.

The quantum curve starts near 1 for a faint coherent state and falls below
the classical 50% ceiling once multi-photon laser pulses dominate.
"""

import numpy as np

from photonmix import BeamsplitterParams, DetectorPair, visibility_classical
from photonmix.detection import visibility_curve

bs = BeamsplitterParams.balanced()
alpha_sq = np.logspace(-2, 1, 13)
ideal = visibility_curve(alpha_sq, DetectorPair.ideal(), bs)
lossy = visibility_curve(alpha_sq, DetectorPair(0.1, 0.1), bs)
# the classical column treats the single photon as a unit-intensity beam
classical = visibility_classical(alpha_sq)

print(f"{'|alpha|^2':>10} {'V eta=1':>9} {'V eta=0.1':>10} {'V classical':>12}")
for (a, v1), (_, v2), vc in zip(ideal, lossy, classical):
    print(f"{a:10.3g} {v1:9.4f} {v2:10.4f} {vc:12.4f}")
