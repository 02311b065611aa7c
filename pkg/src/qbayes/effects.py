"""POVMs as the basic notion of measurement.

A POVM is a finite set of effects (PSD operators between 0 and I) that
resolves the identity.  This module validates candidate POVMs, constructs
the minimal informationally complete POVM used as the package-wide
standard quantum measurement (SQM), evaluates the generalized Born rule,
and inverts it: reconstructing a density operator from the values a frame
function takes on a spanning set of effects.
"""

import functools
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    DegenerateSpan,
    DimensionMismatch,
    NotAStateWarning,
    NotPsd,
    NotResolution,
    SingularGram,
)

# Sum-to-identity tolerance for POVM validation (Frobenius).
RESOLUTION_TOL = 1e-9
# Per-element PSD tolerance.
EFFECT_PSD_TOL = 1e-10
# Smallest singular value of the element Gram matrix certifying linear
# independence of an informationally complete POVM.
INDEPENDENCE_TOL = 1e-8
# Least-squares residual above which a frame reconstruction is rejected.
RECONSTRUCTION_RESIDUAL_TOL = 1e-6


def assert_effect(op: np.ndarray, tol: float = EFFECT_PSD_TOL) -> np.ndarray:
    """Validate 0 <= op <= I within tolerance and return it as complex."""
    op = linalg.as_operator(op)
    vals = np.linalg.eigvalsh((op + linalg.dagger(op)) / 2.0)
    if vals[0] < -tol:
        raise NotPsd(f"effect has eigenvalue {vals[0]:.3e} < 0")
    if vals[-1] > 1.0 + tol:
        raise NotPsd(f"effect has eigenvalue {vals[-1]:.6f} > 1")
    return op


def effect_key(op: np.ndarray, decimals: int = 12) -> bytes:
    """Canonical by-value key for an effect (entrywise, rounded)."""
    a = np.ascontiguousarray(np.round(np.asarray(op, dtype=complex), decimals))
    # -0.0 and 0.0 have different byte patterns; normalize.
    a = a + 0.0
    return a.tobytes()


@dataclass(frozen=True)
class Povm:
    """Validated POVM: an ordered tuple of effects summing to the identity."""

    elements: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, idx) -> np.ndarray:
        return self.elements[idx]


def validate_povm(
    candidate: Iterable[np.ndarray],
    psd_tol: float = EFFECT_PSD_TOL,
    sum_tol: float = RESOLUTION_TOL,
) -> Povm:
    """Check a sequence of matrices forms a POVM and wrap it.

    Raises NotPsd (with the offending index) when an element is not an
    effect, NotResolution (with the deficit norm) when the elements do not
    sum to the identity.
    """
    elements = [linalg.as_operator(e) for e in candidate]
    if not elements:
        raise NotResolution("a POVM needs at least one element", deficit=float("nan"))
    dim = elements[0].shape[0]
    for i, e in enumerate(elements):
        if e.shape[0] != dim:
            raise DimensionMismatch(f"element {i} has dim {e.shape[0]}, expected {dim}")
        vals = np.linalg.eigvalsh((e + linalg.dagger(e)) / 2.0)
        if vals[0] < -psd_tol:
            raise NotPsd(f"element {i} has eigenvalue {vals[0]:.3e} < 0", index=i)
    deficit = float(np.linalg.norm(sum(elements) - np.eye(dim)))
    if deficit > sum_tol:
        raise NotResolution(
            f"elements sum to the identity only within {deficit:.3e}", deficit=deficit
        )
    return Povm(tuple(elements))


def born(state: np.ndarray, povm: Povm | Sequence[np.ndarray]) -> np.ndarray:
    """Outcome probabilities tr(rho E_d) for each effect of ``povm``.

    Entries within -1e-12 of zero are clamped to exactly zero.
    """
    state = linalg.as_operator(state)
    elements = povm.elements if isinstance(povm, Povm) else tuple(povm)
    if elements[0].shape[0] != state.shape[0]:
        raise DimensionMismatch(
            f"state dim {state.shape[0]} vs POVM dim {elements[0].shape[0]}"
        )
    p = np.array([np.trace(state @ e).real for e in elements])
    if p.min() < -1e-12:
        raise NotPsd(f"negative outcome probability {p.min():.3e}")
    return np.clip(p, 0.0, None)


# --------------------------------------------------------------------------
# The minimal informationally complete construction.


def build_ic_projectors(dim: int) -> list[np.ndarray]:
    """The dim^2 linearly independent rank-1 projectors seeding the SQM.

    Over the computational basis ``|e_j>``: first the basis projectors
    ``|e_j><e_j|``, then for each pair j < k the projector onto
    ``(|e_j> + |e_k>)/sqrt(2)``, then onto ``(|e_j> + i |e_k>)/sqrt(2)``.
    Pairs are enumerated in lexicographic order.
    """
    if dim < 2:
        raise ValueError("need dim >= 2")
    projectors = [linalg.projector(linalg.ket(j, dim)) for j in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            projectors.append(
                linalg.projector(linalg.ket(j, dim) + linalg.ket(k, dim))
            )
    for j in range(dim):
        for k in range(j + 1, dim):
            projectors.append(
                linalg.projector(linalg.ket(j, dim) + 1j * linalg.ket(k, dim))
            )
    return projectors


@dataclass(frozen=True)
class MinimalIcPovm:
    """Minimal informationally complete POVM with its construction data.

    ``base`` holds the dim^2 renormalized effects, ``gram`` the positive
    definite sum of the seed projectors, ``projectors`` the seeds
    themselves.
    """

    base: Povm
    gram: np.ndarray
    projectors: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.base.dim

    def __len__(self) -> int:
        return len(self.base)


def gram_renormalize(projectors: Sequence[np.ndarray]) -> MinimalIcPovm:
    """Turn linearly independent PSD operators into a POVM.

    Conjugates each seed by the inverse square root of their sum G, which
    preserves rank and linear independence while forcing the elements to
    resolve the identity.  Raises SingularGram when G is not positive
    definite.
    """
    projectors = tuple(linalg.as_operator(p) for p in projectors)
    gram = sum(projectors)
    vals = np.linalg.eigvalsh(gram)
    if vals[0] < linalg.PINV_TOL * vals[-1]:
        raise SingularGram(f"sum of projectors has min eigenvalue {vals[0]:.3e}")
    w = linalg.mat_invsqrt(gram)
    elements = validate_povm([w @ p @ w for p in projectors])
    sqm = MinimalIcPovm(elements, gram, projectors)
    if element_gram_min_singular_value(sqm.base) < INDEPENDENCE_TOL:
        raise DegenerateSpan("renormalized elements lost linear independence")
    return sqm


def element_gram_min_singular_value(povm: Povm) -> float:
    """Smallest singular value of the Hilbert-Schmidt Gram of the elements."""
    g = np.array(
        [[linalg.hs_inner(a, b) for b in povm.elements] for a in povm.elements]
    )
    return float(np.linalg.svd(g, compute_uv=False)[-1])


@functools.lru_cache(maxsize=None)
def standard_sqm(dim: int) -> MinimalIcPovm:
    """The package-wide standard quantum measurement for dimension ``dim``.

    Built once per dimension over the computational basis and cached; all
    probability-vector representations of states refer to this measurement
    unless another one is passed explicitly.
    """
    return gram_renormalize(build_ic_projectors(dim))


def certainty_bound(dim: int, check: bool = True) -> float:
    """Largest outcome probability any state can assign to the standard SQM.

    Closed form ``1 / (dim - (1 + cot(3 pi / 4 dim)) / 2)``.  With
    ``check=True`` the value is compared against the numerically computed
    largest eigenvalue of G^{-1}; on disagreement beyond 1e-9 the numeric
    value is returned and a warning attached, since the eigenvalue chain
    it comes from is the authoritative derivation.
    """
    if dim < 2:
        raise ValueError("need dim >= 2")
    closed = 1.0 / (dim - 0.5 * (1.0 + 1.0 / np.tan(3.0 * np.pi / (4.0 * dim))))
    if not check:
        return closed
    gram_eigs = np.linalg.eigvalsh(standard_sqm(dim).gram)
    numeric = 1.0 / float(gram_eigs[0])
    if abs(closed - numeric) > 1e-9:
        warnings.warn(
            f"closed-form certainty bound {closed!r} disagrees with the "
            f"eigenvalue computation {numeric!r} at dim={dim}; using the latter",
            stacklevel=2,
        )
        return numeric
    return closed


def max_probability(povm: Povm) -> np.ndarray:
    """Per-element least upper bound on outcome probabilities.

    Returns the largest eigenvalue of each effect; born(rho, povm) is
    dominated entrywise by this vector for every state rho.
    """
    return np.array(
        [float(np.linalg.eigvalsh(e)[-1]) for e in povm.elements]
    )


# --------------------------------------------------------------------------
# Frame functions and Gleason-type reconstruction.


class FrameFunction:
    """Probability assignment to effects, keyed by entrywise value.

    Effects are canonicalized by rounding to 12 decimal digits before
    keying, so two numerically equal effects share one assignment no
    matter which POVM they appear in.
    """

    def __init__(self):
        self._values: dict[bytes, float] = {}
        self._effects: dict[bytes, np.ndarray] = {}

    @classmethod
    def from_state(cls, state: np.ndarray, effects: Iterable[np.ndarray]) -> "FrameFunction":
        """Record tr(rho E) for each effect."""
        f = cls()
        state = linalg.as_operator(state)
        for e in effects:
            f.record(e, float(np.trace(state @ e).real))
        return f

    def record(self, effect: np.ndarray, value: float) -> None:
        effect = linalg.as_operator(effect)
        key = effect_key(effect)
        self._values[key] = float(value)
        self._effects[key] = effect

    def value(self, effect: np.ndarray) -> float:
        key = effect_key(linalg.as_operator(effect))
        if key not in self._values:
            raise KeyError("no assignment recorded for this effect")
        return self._values[key]

    def __len__(self) -> int:
        return len(self._values)

    def items(self) -> list[tuple[np.ndarray, float]]:
        return [(self._effects[k], v) for k, v in self._values.items()]

    def povm_sum(self, povm: Povm) -> float:
        return sum(self.value(e) for e in povm.elements)


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of Hermitian dim x dim matrices."""
    basis = []
    for j in range(dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[j, j] = 1.0
        basis.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(m)
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = -1j / np.sqrt(2.0)
            m[k, j] = 1j / np.sqrt(2.0)
            basis.append(m)
    return basis


def reconstruct_from_frame(frame: FrameFunction) -> np.ndarray:
    """Solve tr(rho E_i) = f(E_i) over the recorded effects.

    The system is solved by least squares over the real vector space of
    Hermitian operators; at least dim^2 linearly independent effects must
    have been recorded, otherwise DegenerateSpan is raised.  The unique
    Hermitian solution is returned as-is.  If it fails the density-operator
    checks (which signals that the frame values did not come from a state)
    a NotAStateWarning is emitted rather than an exception, so callers can
    inspect the operator.
    """
    pairs = frame.items()
    if not pairs:
        raise DegenerateSpan("empty frame function")
    dim = pairs[0][0].shape[0]
    if len(pairs) < dim * dim:
        raise DegenerateSpan(
            f"{len(pairs)} effects cannot span the {dim * dim}-dim operator space"
        )
    basis = hermitian_basis(dim)
    a = np.array(
        [[linalg.hs_inner(b, e).real for b in basis] for e, _ in pairs]
    )
    y = np.array([v for _, v in pairs])
    coeffs, _, rank, _ = np.linalg.lstsq(a, y, rcond=None)
    if rank < dim * dim:
        raise DegenerateSpan(f"sampled effects span only {rank} of {dim * dim} dims")
    residual = float(np.linalg.norm(a @ coeffs - y))
    if residual > RECONSTRUCTION_RESIDUAL_TOL:
        raise DegenerateSpan(f"least-squares residual {residual:.3e} too large")
    rho = sum(c * b for c, b in zip(coeffs, basis))
    vals = np.linalg.eigvalsh(rho)
    if vals[0] < -1e-8 or abs(np.trace(rho).real - 1.0) > 1e-8:
        warnings.warn(
            f"reconstructed operator is not a state (min eigenvalue "
            f"{vals[0]:.3e}, trace {np.trace(rho).real:.6f})",
            NotAStateWarning,
            stacklevel=2,
        )
    return rho


# --------------------------------------------------------------------------
# POVMs from ancilla dilations.


def povm_from_dilation(
    rho_ancilla: np.ndarray,
    u: np.ndarray,
    ancilla_projectors: Povm | Sequence[np.ndarray],
) -> Povm:
    """System POVM induced by measuring an ancilla after an interaction.

    The joint state (system tensor ancilla, system first) evolves through
    ``u`` and the ancilla is then measured projectively.  The effect for
    outcome d is ``tr_ancilla((I x rho_A) u^dag (I x Pi_d) u)``, defined so
    that born(rho_S, result) reproduces the joint-picture outcome
    probabilities ``tr(u (rho_S x rho_A) u^dag (I x Pi_d))`` exactly.
    """
    rho_ancilla = linalg.as_operator(rho_ancilla)
    u = linalg.as_operator(u)
    projs = (
        ancilla_projectors.elements
        if isinstance(ancilla_projectors, Povm)
        else tuple(ancilla_projectors)
    )
    d_anc = rho_ancilla.shape[0]
    if projs[0].shape[0] != d_anc:
        raise DimensionMismatch("ancilla projectors vs ancilla state dims differ")
    if u.shape[0] % d_anc != 0:
        raise DimensionMismatch("unitary dim is not a multiple of the ancilla dim")
    d_sys = u.shape[0] // d_anc
    weight = np.kron(np.eye(d_sys), rho_ancilla)
    effects = []
    for pi in projs:
        big = weight @ linalg.dagger(u) @ np.kron(np.eye(d_sys), pi) @ u
        effects.append(linalg.partial_trace(big, (d_sys, d_anc), side="B"))
    return validate_povm(effects)
