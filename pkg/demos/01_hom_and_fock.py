"""Two photons on a balanced beamsplitter, then a coherent state plus one photon.

Run from the repository root:  python3 demos/01_hom_and_fock.py
"""

from photonmix import BeamsplitterParams, beamsplitter_transform, joint_distribution
from photonmix.fock import mixed_input_state, number_state, verify_eq3_expansion

bs = BeamsplitterParams.balanced()

# |1,1> in: the |1,1> output amplitude cancels and the photons leave together.
out = joint_distribution(beamsplitter_transform(number_state(1, 1), bs))
print("|1,1> through a 50/50 splitter")
for (p, q) in [(2, 0), (1, 1), (0, 2)]:
    print(f"  P({p},{q}) = {out[p, q]:.3g}")

# A weak coherent state plus one photon. The single-laser-photon term is
# still suppressed, so coincidences need two laser photons and scale as alpha^4.
for alpha in (0.2, 0.1, 0.05):
    p = joint_distribution(beamsplitter_transform(mixed_input_state(alpha, 12), bs)).probabilities
    both = p[1:, 1:].sum()
    print(f"alpha={alpha:<5} P(both ports lit)={both:.3e}  "
          f"second-order truncation error={verify_eq3_expansion(alpha, bs):.3e}")
print("Each halving of alpha shrinks the truncation error about eightfold.")
