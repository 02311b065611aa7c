"""Time evolution assignments are judgments too.

A channel is a density operator in disguise (its Choi operator), and
which channel an agent assigns to a target system can be steered from
far away by measuring a distant partner of its control bit, without any
possibility of signaling.
"""

import numpy as np

from qbayes import effects, linalg, update

np.set_printoptions(precision=4, suppress=True)

# Channel <-> Choi is one-to-one: CP means PSD, trace preservation means
# the output marginal is I/D.
u = linalg.random_unitary(2, seed=2)
for name, ch in [
    ("identity", update.make_channel([np.eye(2)])),
    ("random unitary", update.make_channel([u])),
    ("depolarizing", update.make_channel([p / 2 for p in linalg.paulis])),
]:
    choi = update.channel_choi(ch)
    print(f"{name}: Choi eigenvalues {np.linalg.eigvalsh(choi).round(6)}")

ch = update.controlled_unitary_channel(np.eye(2), linalg.sigma_z,
                                       1 / np.sqrt(2), 1 / np.sqrt(2))
plus = linalg.projector(np.array([1.0, 1.0]))
print("\nequal-weight I/sigma_z control on |+><+| gives:\n", ch.apply(plus))

# Round trip through the Choi operator preserves the action.
choi = update.channel_choi(ch)
back = update.choi_channel(choi)
probe = linalg.random_state(2, 3)
print("round-trip action error:",
      np.linalg.norm(ch.apply(probe) - back.apply(probe)))

# Remote steering: measuring the far qubit in different ways assigns the
# target different conditional channels, yet the average never moves.
schmidt = effects.validate_povm(
    [linalg.projector(linalg.ket(i, 2)) for i in range(2)]
)
rep1 = update.remote_steering_experiment(schmidt, seed=17, alpha=0.6, beta=0.8)
rep2 = update.remote_steering_experiment(
    effects.validate_povm(linalg.random_povm(2, 4, 5)), seed=17, alpha=0.6, beta=0.8
)
print("\nSchmidt-basis far measurement: conditional channel weights",
      [w.round(4) for w in rep1.conditional_weights])
print("4-outcome far measurement:     conditional channel weights",
      [w.round(4) for w in rep2.conditional_weights])
print("difference of the averaged Chois:",
      np.abs(rep1.averaged_choi - rep2.averaged_choi).max())
print("deviation from the never-measured channel:",
      max(rep1.max_deviation, rep2.max_deviation))
