"""Informationally complete measurements and Bayesian quantum updating.

The package treats POVMs as the basic notion of measurement: a fixed
minimal informationally complete POVM (the standard quantum measurement)
turns states into probability vectors, measurement collapse factors into
a Bayes-like refinement plus a unitary readjustment, and tomography
becomes prior merging over density operators.  See the README for a tour.
"""

__version__ = "0.1.0"

from . import definetti, effects, entropy, errors, linalg, locality, states, update

__all__ = [
    "__version__",
    "definetti",
    "effects",
    "entropy",
    "errors",
    "linalg",
    "locality",
    "states",
    "update",
]
