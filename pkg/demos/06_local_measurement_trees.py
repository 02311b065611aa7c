"""Why combined systems use the tensor product.

Ask only that joint probabilities for conditioned local measurements be
consistent across all two-stage trees, and a single joint operator under
the trace is forced.  It lives on the tensor product; it need not be a
state (the swap frame shows why); and over real Hilbert spaces it is not
even unique.
"""

import numpy as np

from qbayes import linalg, locality

rng = np.random.default_rng(41)

# A state-induced frame on a 2x3 system, evaluated over a random tree.
rho = linalg.random_state(6, rng)
frame = locality.BilinearFrame.from_state(rho, (2, 3))
tree = locality.random_tree(2, 3, rng)
rows = locality.tree_probabilities(frame, tree)
print(f"tree direction {tree.direction}, "
      f"{len(tree.first)} first-stage outcomes")
print("total probability over the tree:", locality.tree_total(frame, tree))

# The frame values on product effects pin down the joint operator.
recovered = locality.reconstruct_joint_operator(frame)
print("reconstruction distance to the true joint state:",
      linalg.trace_distance(recovered, rho))

# The swap frame: a perfectly consistent assignment whose operator has a
# negative eigenvalue, so local consistency alone cannot force a state.
rep = locality.swap_counterexample(2, n_trees=200, seed=2)
print("\nswap frame on two qubits:")
print("  normalization constant:", rep.normalization_constant)
print("  worst tree-sum deviation:", rep.max_tree_deviation)
print("  smallest frame value sampled:", rep.min_frame_value)
print("  minimum eigenvalue of the operator:", rep.min_eigenvalue)
print("  value on the antisymmetric witness:", rep.witness_value)

# Over the reals, product effects span 9 of the 10 symmetric dimensions
# on two rebits; the missing direction is sigma_y x sigma_y.
m, n = locality.real_dimension_count(2, 2)
print(f"\nreal field, 2x2: {m} product equations vs {n} needed")
analysis = locality.real_span_analysis(2, 2)
yy = linalg.tensor(linalg.sigma_y, linalg.sigma_y)
null = analysis.null_directions[0]
overlap = abs(linalg.hs_inner(null, yy).real) / (
    np.linalg.norm(null) * np.linalg.norm(yy)
)
print("overlap of the null direction with sigma_y x sigma_y:", round(overlap, 6))
print("complex field rank:", locality.complex_product_rank(2, 2), "of 16")

# Nine unentangled product states on two qutrits that no tree (and no
# amount of local ping-ponging) can measure.
domino = locality.domino_fixture()
print("\ndomino measurement: 9 product states, resolves identity to",
      np.linalg.norm(sum(domino.elements) - np.eye(9)))
