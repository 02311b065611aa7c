"""Locally-measurable POVM trees and bilinear frame reconstruction.

A two-stage local measurement lets the second party condition their POVM
on the first party's outcome.  Any probability assignment that is
consistent across all such trees extends to a bilinear functional and is
therefore represented by a single joint operator L under the trace with
product effects.  This module evaluates frames over trees, reconstructs
L from product samples, exhibits the swap-operator frame showing L need
not be a state, counts the real-field degrees of freedom that break
uniqueness, and builds the nine-state product measurement on two qutrits
that cannot be performed by local means.
"""

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .effects import Povm, hermitian_basis, standard_sqm, validate_povm
from .errors import DegenerateSpan, DimensionMismatch

RECONSTRUCTION_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class PovmTree:
    """Two-stage local measurement with a conditioned second stage.

    ``direction`` is "AtoB" when the first POVM acts on factor A and each
    branch on B, or "BtoA" for the reverse walk.  ``branches[i]`` is the
    second-stage POVM chosen after first outcome i.
    """

    direction: str
    first: Povm
    branches: tuple[Povm, ...]

    def __post_init__(self):
        if self.direction not in ("AtoB", "BtoA"):
            raise ValueError("direction must be 'AtoB' or 'BtoA'")
        if len(self.branches) != len(self.first):
            raise DimensionMismatch("need one branch POVM per first outcome")
        db = self.branches[0].dim
        for b in self.branches:
            if b.dim != db:
                raise DimensionMismatch("branch POVMs must share one dimension")

    def pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """All ordered (effect on A, effect on B) pairs of the tree."""
        out = []
        if self.direction == "AtoB":
            for i, e in enumerate(self.first.elements):
                for f in self.branches[i].elements:
                    out.append((e, f))
        else:
            for j, f in enumerate(self.first.elements):
                for e in self.branches[j].elements:
                    out.append((e, f))
        return out


def random_tree(
    dim_a: int, dim_b: int, seed=None, direction: str | None = None
) -> PovmTree:
    """Random tree with 2 to 5 outcomes at each stage."""
    g = linalg.rng_from(seed)
    if direction is None:
        direction = "AtoB" if g.integers(2) == 0 else "BtoA"
    d_first, d_branch = (dim_a, dim_b) if direction == "AtoB" else (dim_b, dim_a)
    first = validate_povm(linalg.random_povm(d_first, int(g.integers(2, 6)), g))
    branches = tuple(
        validate_povm(linalg.random_povm(d_branch, int(g.integers(2, 6)), g))
        for _ in range(len(first))
    )
    return PovmTree(direction, first, branches)


@dataclass(frozen=True)
class BilinearFrame:
    """Probability assignment f(E on A, F on B) for local effect pairs."""

    dim_a: int
    dim_b: int
    evaluator: Callable[[np.ndarray, np.ndarray], float]

    def __call__(self, e: np.ndarray, f: np.ndarray) -> float:
        return float(self.evaluator(e, f))

    @classmethod
    def from_state(cls, rho_ab: np.ndarray, dims: tuple[int, int]) -> "BilinearFrame":
        """The frame tr(rho (E x F)) of a joint state."""
        rho_ab = linalg.as_operator(rho_ab)
        da, db = dims
        if rho_ab.shape[0] != da * db:
            raise DimensionMismatch("joint state dim does not factor as given")

        def evaluator(e, f):
            return np.trace(rho_ab @ linalg.tensor(e, f)).real

        return cls(da, db, evaluator)

    @classmethod
    def from_swap(cls, dim: int) -> "BilinearFrame":
        """The swap frame f(E, F) = tr(E F) / dim on equal factors.

        The normalization constant is fixed by requiring the trivial tree
        {I} x {I} to carry total probability one, which gives tr(S)/c = 1
        and hence c = dim.
        """

        def evaluator(e, f):
            return np.trace(np.asarray(e) @ np.asarray(f)).real / dim

        return cls(dim, dim, evaluator)


def swap_operator(dim: int) -> np.ndarray:
    s = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            s[i * dim + j, j * dim + i] = 1.0
    return s


def tree_probabilities(frame: BilinearFrame, tree: PovmTree) -> list[np.ndarray]:
    """Joint outcome table of a frame over a tree, one row per first outcome."""
    rows = []
    if tree.direction == "AtoB":
        for i, e in enumerate(tree.first.elements):
            rows.append(np.array([frame(e, f) for f in tree.branches[i].elements]))
    else:
        for j, f in enumerate(tree.first.elements):
            rows.append(np.array([frame(e, f) for e in tree.branches[j].elements]))
    return rows


def tree_total(frame: BilinearFrame, tree: PovmTree) -> float:
    return float(sum(row.sum() for row in tree_probabilities(frame, tree)))


def product_effect_basis(dim_a: int, dim_b: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """All pairs from the two standard SQMs; spans product operator space."""
    sa = standard_sqm(dim_a).base.elements
    sb = standard_sqm(dim_b).base.elements
    return [(e, f) for e in sa for f in sb]


def reconstruct_joint_operator(
    frame: BilinearFrame, dim_a: int | None = None, dim_b: int | None = None
) -> np.ndarray:
    """Solve tr(L (E x F)) = f(E, F) over a spanning set of product effects.

    Samples the frame on products of the two standard SQMs and solves the
    (dim_a dim_b)^2 real linear system over Hermitian operator space.  For
    complex factors the solution is unique; DegenerateSpan is raised when
    the sampled system is rank deficient or inconsistent.
    """
    da = frame.dim_a if dim_a is None else dim_a
    db = frame.dim_b if dim_b is None else dim_b
    pairs = product_effect_basis(da, db)
    basis = hermitian_basis(da * db)
    a = np.empty((len(pairs), len(basis)))
    y = np.empty(len(pairs))
    for row, (e, f) in enumerate(pairs):
        prod = linalg.tensor(e, f)
        a[row] = [linalg.hs_inner(b, prod).real for b in basis]
        y[row] = frame(e, f)
    coeffs, _, rank, _ = np.linalg.lstsq(a, y, rcond=None)
    if rank < len(basis):
        raise DegenerateSpan(f"product effects span only {rank} of {len(basis)} dims")
    residual = float(np.linalg.norm(a @ coeffs - y))
    if residual > RECONSTRUCTION_RESIDUAL_TOL:
        raise DegenerateSpan(f"sampling residual {residual:.3e} too large")
    return sum(c * b for c, b in zip(coeffs, basis))


@dataclass(frozen=True)
class SwapCounterexample:
    """Certificate that a valid frame's operator need not be a state.

    The swap frame is nonnegative on effect pairs and normalized on every
    tree, yet its joint operator has a negative eigenvalue, witnessed by
    the antisymmetric vector recorded here.
    """

    dim: int
    normalization_constant: float
    min_frame_value: float
    max_tree_deviation: float
    joint_operator: np.ndarray
    min_eigenvalue: float
    witness_value: float


def swap_counterexample(
    dim: int, n_trees: int = 100, n_pairs: int = 200, seed=0
) -> SwapCounterexample:
    """Build and certify the swap frame on two equal factors."""
    g = linalg.rng_from(seed)
    frame = BilinearFrame.from_swap(dim)
    min_val = np.inf
    for _ in range(n_pairs):
        e = _random_effect(dim, g)
        f = _random_effect(dim, g)
        min_val = min(min_val, frame(e, f))
    max_dev = 0.0
    for _ in range(n_trees):
        max_dev = max(max_dev, abs(tree_total(frame, random_tree(dim, dim, g)) - 1.0))
    joint = reconstruct_joint_operator(frame)
    witness = np.zeros(dim * dim, dtype=complex)
    witness[0 * dim + 1] = 1.0 / np.sqrt(2.0)
    witness[1 * dim + 0] = -1.0 / np.sqrt(2.0)
    return SwapCounterexample(
        dim=dim,
        normalization_constant=float(dim),
        min_frame_value=float(min_val),
        max_tree_deviation=float(max_dev),
        joint_operator=joint,
        min_eigenvalue=float(np.linalg.eigvalsh(joint)[0]),
        witness_value=float(np.real(witness.conj() @ joint @ witness)),
    )


def _random_effect(dim: int, g) -> np.ndarray:
    m = linalg.random_psd(dim, g)
    return m / (np.linalg.eigvalsh(m)[-1] + g.random())


# --------------------------------------------------------------------------
# Real-field dimension counting.


def real_symmetric_effects(dim: int) -> list[np.ndarray]:
    """Real symmetric effects spanning the symmetric operators on R^dim.

    The basis projectors together with the pairwise (+) superposition
    projectors; dim (dim + 1) / 2 operators in total.
    """
    out = [linalg.projector(linalg.ket(j, dim)) for j in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            out.append(linalg.projector(linalg.ket(j, dim) + linalg.ket(k, dim)))
    return [op.real.astype(complex) for op in out]


def _sym_basis(dim: int) -> list[np.ndarray]:
    basis = []
    for j in range(dim):
        m = np.zeros((dim, dim))
        m[j, j] = 1.0
        basis.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim))
            m[j, k] = m[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(m)
    return basis


@dataclass(frozen=True)
class RealSpanAnalysis:
    """Rank data for product effects over real symmetric operator space."""

    product_span_dim: int
    full_symmetric_dim: int
    numeric_rank: int
    null_directions: tuple[np.ndarray, ...]


def real_span_analysis(dim_a: int, dim_b: int) -> RealSpanAnalysis:
    """Numeric rank of {E_i x F_j} over real symmetric joint operators."""
    ea = real_symmetric_effects(dim_a)
    fb = real_symmetric_effects(dim_b)
    basis = _sym_basis(dim_a * dim_b)
    rows = []
    for e in ea:
        for f in fb:
            prod = linalg.tensor(e, f).real
            rows.append([float((b * prod).sum()) for b in basis])
    a = np.array(rows)
    svals = np.linalg.svd(a, compute_uv=False)
    rank = int((svals > 1e-10 * svals[0]).sum())
    # Orthonormal basis of the unreachable directions, as matrices.
    _, _, vt = np.linalg.svd(a)
    nulls = tuple(
        sum(c * b for c, b in zip(vt[k], basis)).astype(complex)
        for k in range(rank, len(basis))
    )
    full = dim_a * dim_b * (dim_a * dim_b + 1) // 2
    return RealSpanAnalysis(
        product_span_dim=dim_a * dim_b * (dim_a + 1) * (dim_b + 1) // 4,
        full_symmetric_dim=full,
        numeric_rank=rank,
        null_directions=nulls,
    )


def real_dimension_count(dim_a: int, dim_b: int, verify: bool = True) -> tuple[int, int]:
    """Equations available vs needed for L over real Hilbert spaces.

    Returns (product-span dimension, full symmetric dimension).  With
    ``verify=True`` the first number is checked against the numeric rank
    of an explicit product-effect family.
    """
    if dim_a < 2 or dim_b < 2:
        raise ValueError("need dims >= 2")
    m = dim_a * dim_b * (dim_a + 1) * (dim_b + 1) // 4
    n = dim_a * dim_b * (dim_a * dim_b + 1) // 2
    if verify:
        analysis = real_span_analysis(dim_a, dim_b)
        if analysis.numeric_rank != m:
            raise DegenerateSpan(
                f"numeric rank {analysis.numeric_rank} disagrees with the "
                f"formula value {m}"
            )
    return m, n


def complex_product_rank(dim_a: int, dim_b: int) -> int:
    """Rank of {E_i x F_j} over the full Hermitian space (complex field)."""
    basis = hermitian_basis(dim_a * dim_b)
    rows = []
    for e, f in product_effect_basis(dim_a, dim_b):
        prod = linalg.tensor(e, f)
        rows.append([linalg.hs_inner(b, prod).real for b in basis])
    a = np.array(rows)
    svals = np.linalg.svd(a, compute_uv=False)
    return int((svals > 1e-10 * svals[0]).sum())


# --------------------------------------------------------------------------
# The two-qutrit domino measurement.


def domino_fixture() -> Povm:
    """Nine product states on two qutrits resolving the identity.

    All elements are tensor products of local states, yet the measurement
    cannot be carried out by local operations and classical communication;
    the fixture is exposed for exercising joint-operator machinery on a
    measurement that no tree can express.
    """
    k0, k1, k2 = (linalg.ket(i, 3) for i in range(3))
    plus01 = (k0 + k1) / np.sqrt(2.0)
    minus01 = (k0 - k1) / np.sqrt(2.0)
    plus12 = (k1 + k2) / np.sqrt(2.0)
    minus12 = (k1 - k2) / np.sqrt(2.0)
    kets = [
        np.kron(k1, k1),
        np.kron(k0, plus01),
        np.kron(k0, minus01),
        np.kron(k2, plus12),
        np.kron(k2, minus12),
        np.kron(plus12, k0),
        np.kron(minus12, k0),
        np.kron(plus01, k2),
        np.kron(minus01, k2),
    ]
    return validate_povm([np.outer(k, k.conj()) for k in kets], sum_tol=1e-10)
