"""Quantum collapse = Bayesian refinement + a unitary readjustment.

For an efficient measurement the posterior splits into two conceptual
moves: pick a term out of a convex decomposition of the prior (exactly
like conditioning), then rotate it by an outcome-dependent unitary that
never changes its spectrum.
"""

import numpy as np

from qbayes import effects, linalg, update

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(23)

rho = linalg.random_state(2, rng)
povm = effects.validate_povm(linalg.random_povm(2, 3, rng))
inst = update.efficient_from_povm(
    povm, unitaries=[linalg.random_unitary(2, rng) for _ in range(3)]
)

fac = update.factor_update(rho, inst)
print("prior:\n", rho)
print("\nprior == sum_d P(d) * refinement_d:",
      np.linalg.norm(fac.mixture_of_refinements() - rho) < 1e-10)

for d, out in enumerate(fac.outcomes):
    print(f"\noutcome {d}: P = {out.probability:.4f}")
    print("  refinement (the Bayes step):\n", out.refinement)
    print("  posterior  (after readjustment):\n", out.posterior)
    print("  spectra match:",
          np.allclose(np.linalg.eigvalsh(out.refinement),
                      np.linalg.eigvalsh(out.posterior)))

# Two limiting cases.  A pure state cannot be refined: measurement is
# pure disturbance.
psi = linalg.random_ket(2, rng)
pure = np.outer(psi, psi.conj())
fac_pure = update.factor_update(pure, inst)
print("\npure prior: refinements all equal the prior?",
      all(np.linalg.norm(o.refinement - pure) < 1e-10
          for o in fac_pure.outcomes if o.refinement is not None))

# The maximally mixed state with a projective measurement is the other
# extreme: the update is pure refinement, no readjustment needed.
proj = effects.validate_povm([linalg.projector(linalg.ket(i, 2)) for i in range(2)])
fac_mixed = update.factor_update(np.eye(2) / 2, update.efficient_from_povm(proj))
for d, out in enumerate(fac_mixed.outcomes):
    same = np.linalg.norm(out.posterior - out.refinement) < 1e-12
    print(f"maximally mixed, outcome {d}: posterior == refinement? {same}")

# Agreeing on "which measurement happened" = agreeing on a resolution of
# the identity extracted from the refinement.
refinement = [(o.probability, o.refinement) for o in fac.outcomes]
recovered = update.identify_measurement(rho, refinement)
print("\nPOVM recovered from the refinement matches the one measured:",
      all(np.linalg.norm(a - b) < 1e-8
          for a, b in zip(recovered.elements, inst.effects())))
