"""Tomography without unknown states.

Judging a source's outputs exchangeable is the same as holding a prior
over density operators.  Data then drives two agents with different
priors toward one predictive state, provided the measurement is
informationally complete, and the whole story needs complex amplitudes:
a real-Hilbert-space exchangeable state can refuse every mixture form.
"""

import numpy as np

from qbayes import definetti, effects, linalg

rng = np.random.default_rng(53)

# Exchangeability: permutation invariance plus consistent marginals.
prior = definetti.make_prior([linalg.random_state(2, rng) for _ in range(5)])
ex = definetti.definetti_mix(prior, 3)
report = definetti.check_exchangeable(ex, lambda m: definetti.definetti_mix(prior, m))
print("3-copy mixture: transposition deviation", report.max_transposition_deviation)
print("               marginal deviation     ", report.max_marginal_deviation)

# Two agents, same data stream, different priors.
grid = definetti.bloch_grid(50, (0.25, 0.5, 0.75, 1.0))
uniform = definetti.make_prior(grid)
skewed = definetti.make_prior(grid, definetti.center_skewed_weights(grid))
truth = grid[137]
sqm = effects.standard_sqm(2).base
trace = definetti.merging_experiment(uniform, skewed, truth, sqm, 500, seed=4)
for k in (0, 10, 50, 100, 500):
    print(f"K={k:4d}: inter-agent distance {trace.inter_agent[k]:.4f}, "
          f"agent A to truth {trace.to_truth_a[k]:.4f}")

# With a non-informationally-complete measurement the agents agree only
# about the z-axis coordinate and plateau apart.
zmeas = effects.validate_povm(
    [linalg.projector(linalg.ket(i, 2)) for i in range(2)]
)
pa = definetti.make_prior(grid, definetti.axis_skewed_weights(grid, linalg.sigma_x, +2))
pb = definetti.make_prior(grid, definetti.axis_skewed_weights(grid, linalg.sigma_x, -2))
stuck = definetti.merging_experiment(pa, pb, truth, zmeas, 500, seed=4)
print(f"\nz-only data, K=500: inter-agent distance {stuck.final_inter_agent:.4f}"
      " (plateaued)")

# The classical counterpart in one line: exchangeable joint outcomes
# depend only on counts.
joint = definetti.classical_definetti_mix(
    np.array([0.5, 0.5]), [np.array([0.9, 0.1]), np.array([0.2, 0.8])], 3
)
print("\nclassical 3-trial mixture: p(0,1,1) == p(1,1,0) ==",
      joint[0, 1, 1])

# And the punch line: a real exchangeable state with no real mixture
# representation, certified by a witness rather than a fit.
rep = definetti.real_counterexample(2)
print("\nreal-field counterexample (2 copies):")
print("  largest imaginary entry:", rep.max_imag_entry)
print("  best real-grid fit residual:", round(rep.real_fit_residual, 6))
print("  witness lower bound:        ", rep.witness_bound)
print("  best complex-grid fit residual:", rep.complex_fit_residual)
