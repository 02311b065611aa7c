"""Quantum states as operators and as probability vectors over the SQM.

A density operator and its outcome distribution for the standard quantum
measurement carry identical information; this module converts between the
two pictures, decides membership in the convex body of achievable
probability vectors, and provides classical Bayes conditioning for the
discrete distributions used alongside.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .effects import MinimalIcPovm, born, hermitian_basis, max_probability, standard_sqm
from .errors import (
    DimensionMismatch,
    NotAState,
    ZeroProbabilityData,
)

# Reconstructed operators with eigenvalues above this floor are treated as
# states (clamped and renormalized); anything lower is rejected.
STATE_EIG_FLOOR = -1e-8


def assert_density_operator(
    rho: np.ndarray, psd_tol: float = linalg.PSD_TOL, trace_tol: float = 1e-9
) -> np.ndarray:
    """Validate Hermitian, PSD and unit trace; return as complex array."""
    rho = linalg.as_operator(rho)
    if not linalg.is_hermitian(rho):
        raise NotAState("operator is not Hermitian within tolerance")
    vals = np.linalg.eigvalsh((rho + linalg.dagger(rho)) / 2.0)
    if vals[0] < -psd_tol:
        raise NotAState(f"operator has eigenvalue {vals[0]:.3e} < 0")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise NotAState(f"operator has trace {np.trace(rho).real:.9f} != 1")
    return rho


def is_density_operator(rho: np.ndarray) -> bool:
    try:
        assert_density_operator(rho)
        return True
    except (NotAState, DimensionMismatch):
        return False


@dataclass(frozen=True)
class SqmVector:
    """Probability vector over the outcomes of a fixed SQM."""

    probs: np.ndarray
    sqm: MinimalIcPovm

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (len(self.sqm),):
            raise DimensionMismatch(
                f"expected {len(self.sqm)} probabilities, got {p.shape}"
            )
        if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
            raise NotAState("probabilities must be nonnegative and sum to 1")
        caps = max_probability(self.sqm.base)
        if (p > caps + 1e-9).any():
            raise NotAState(
                "an entry exceeds the largest achievable probability of its effect"
            )


def to_sqm(state: np.ndarray, sqm: MinimalIcPovm | None = None) -> SqmVector:
    """Outcome distribution of ``state`` for the standard measurement."""
    state = assert_density_operator(state)
    if sqm is None:
        sqm = standard_sqm(state.shape[0])
    if sqm.dim != state.shape[0]:
        raise DimensionMismatch(f"state dim {state.shape[0]} vs SQM dim {sqm.dim}")
    return SqmVector(born(state, sqm.base), sqm)


def _solve_from_probs(probs: np.ndarray, sqm: MinimalIcPovm) -> np.ndarray:
    basis = hermitian_basis(sqm.dim)
    a = np.array(
        [[linalg.hs_inner(b, e).real for b in basis] for e in sqm.base.elements]
    )
    coeffs = np.linalg.solve(a, probs)
    return sum(c * b for c, b in zip(coeffs, basis))


def from_sqm(
    v: SqmVector | np.ndarray, sqm: MinimalIcPovm | None = None
) -> np.ndarray:
    """Unique density operator with the given SQM outcome distribution.

    Accepts an SqmVector or a raw probability vector plus the measurement.
    The linear inversion always has a unique Hermitian solution; it is a
    state only when the vector lies in the achievable region.  Eigenvalues
    in [-1e-8, 0) are treated as numerical noise (clamped, renormalized);
    anything lower raises NotAState.
    """
    if isinstance(v, SqmVector):
        probs, sqm = np.asarray(v.probs, dtype=float), v.sqm
    else:
        probs = np.asarray(v, dtype=float)
        if sqm is None:
            dim = int(round(np.sqrt(probs.size)))
            sqm = standard_sqm(dim)
    if probs.shape != (len(sqm),):
        raise DimensionMismatch(f"expected {len(sqm)} probabilities")
    rho = _solve_from_probs(probs, sqm)
    vals, vecs = np.linalg.eigh(rho)
    if vals[0] < STATE_EIG_FLOOR:
        raise NotAState(
            f"reconstruction has eigenvalue {vals[0]:.3e}; the vector lies "
            "outside the achievable region"
        )
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise NotAState(f"reconstruction has trace {np.trace(rho).real:.9f}")
    clipped = np.clip(vals, 0.0, None)
    rho = (vecs * clipped) @ linalg.dagger(vecs)
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class SqmMembership:
    """Outcome of an achievability test, with its witness.

    ``state`` is the reconstructed density operator when the vector is a
    member; ``min_eigenvalue`` of the raw reconstruction is the violated
    invariant otherwise.
    """

    member: bool
    state: np.ndarray | None
    min_eigenvalue: float


def in_sqm_set(v: np.ndarray, sqm: MinimalIcPovm | None = None) -> SqmMembership:
    """Decide whether a probability vector is achievable by some state."""
    probs = np.asarray(v, dtype=float)
    if probs.min() < -1e-12 or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError("input must be a probability vector")
    if sqm is None:
        sqm = standard_sqm(int(round(np.sqrt(probs.size))))
    raw = _solve_from_probs(probs, sqm)
    min_eig = float(np.linalg.eigvalsh(raw)[0])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            state = from_sqm(probs, sqm)
    except NotAState:
        return SqmMembership(False, None, min_eig)
    return SqmMembership(True, state, min_eig)


# --------------------------------------------------------------------------
# Classical distributions and Bayes conditioning.


def assert_distribution(p: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.min() < -tol:
        raise ValueError(f"negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum():.15f}")
    return np.clip(p, 0.0, None)


def bayes_condition(joint: np.ndarray, observed: int) -> np.ndarray:
    """Posterior over hypotheses given a column of a joint (h, d) table.

    ``joint[h, d]`` is the joint probability of hypothesis h with datum d;
    conditioning on d picks the column and renormalizes by the marginal.
    """
    joint = assert_distribution(joint)
    if joint.ndim != 2:
        raise ValueError("joint must be a 2-D table over (hypothesis, datum)")
    marginal = joint[:, observed].sum()
    if marginal <= 0.0:
        raise ZeroProbabilityData(f"datum {observed} has probability {marginal}")
    return joint[:, observed] / marginal
