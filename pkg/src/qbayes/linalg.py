"""Dense complex linear algebra for small-dimension quantum operators.

All operators are plain ``numpy.ndarray`` values of complex dtype, treated
as immutable after construction.  Dimensions are expected to stay small
(products of a few qubits or qutrits), so everything uses dense LAPACK
routines without apology.

Eigenvalues are reported in descending order throughout the package.
"""

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd, SingularOperator

# Relative tolerance deciding whether a matrix counts as Hermitian.
HERMITIAN_TOL = 1e-10
# Eigenvalues may undershoot zero by this much and still count as PSD.
PSD_TOL = 1e-10
# Rank threshold for inverse powers, relative to the largest eigenvalue.
PINV_TOL = 1e-10

sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
sigma_z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
paulis = (np.eye(2, dtype=complex), sigma_x, sigma_y, sigma_z)


def as_operator(m) -> np.ndarray:
    """Coerce ``m`` to a square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector |index> in dimension ``dim``."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec: np.ndarray) -> np.ndarray:
    """Rank-1 projector |v><v| / <v|v>."""
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj()) / np.vdot(v, v).real


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = as_operator(m)
    scale = np.linalg.norm(m)
    if scale == 0.0:
        return True
    return np.linalg.norm(m - dagger(m)) <= tol * scale


@dataclass(frozen=True)
class EigDecomposition:
    """Hermitian eigendecomposition with eigenvalues sorted descending.

    ``eigenvectors[:, k]`` is the unit eigenvector paired with
    ``eigenvalues[k]``; the matrix of eigenvectors is unitary.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def eig_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> EigDecomposition:
    """Eigendecompose a Hermitian matrix, eigenvalues descending.

    Raises NotHermitian when the relative Frobenius deviation from
    self-adjointness exceeds ``tol``.
    """
    m = as_operator(m)
    if not is_hermitian(m, tol):
        raise NotHermitian(
            f"matrix deviates from Hermiticity by more than {tol} (relative)"
        )
    vals, vecs = np.linalg.eigh((m + dagger(m)) / 2.0)
    order = np.argsort(vals)[::-1]
    return EigDecomposition(vals[order], vecs[:, order])


def mat_fn(m: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix via its spectrum.

    Returns ``V f(Lambda) V^dag``.  ``f`` must accept an ndarray of
    eigenvalues.  Positivity constraints on the domain of ``f`` are the
    caller's business; see :func:`mat_invsqrt` for the guarded inverse.
    """
    eig = eig_hermitian(m)
    vals = np.asarray(f(eig.eigenvalues), dtype=float)
    return (eig.eigenvectors * vals) @ dagger(eig.eigenvectors)


def _psd_eigs(m: np.ndarray, tol: float = PSD_TOL) -> EigDecomposition:
    eig = eig_hermitian(m)
    scale = max(abs(eig.eigenvalues[0]), 1.0)
    if eig.eigenvalues[-1] < -tol * scale:
        raise NotPsd(f"smallest eigenvalue {eig.eigenvalues[-1]:.3e} below PSD tolerance")
    return eig


def mat_sqrt(m: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues below the rank threshold (relative to the largest) are
    treated as rank noise and mapped to zero; the square root would
    otherwise amplify them from around 1e-16 to 1e-8.
    """
    eig = _psd_eigs(m)
    vals = np.clip(eig.eigenvalues, 0.0, None)
    vals[vals <= PINV_TOL * vals[0]] = 0.0
    return (eig.eigenvectors * np.sqrt(vals)) @ dagger(eig.eigenvectors)


def mat_invsqrt(m: np.ndarray, pseudo: bool = False) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian matrix.

    With ``pseudo=True`` the inverse is taken on the support only
    (eigenvalues below the rank threshold are mapped to zero) instead of
    raising SingularOperator.
    """
    eig = _psd_eigs(m)
    cutoff = PINV_TOL * max(eig.eigenvalues[0], 0.0)
    small = eig.eigenvalues <= cutoff
    if small.any() and not pseudo:
        raise SingularOperator(
            f"eigenvalue {eig.eigenvalues[-1]:.3e} below the invertibility threshold"
        )
    inv = np.zeros_like(eig.eigenvalues)
    keep = ~small
    inv[keep] = 1.0 / np.sqrt(eig.eigenvalues[keep])
    return (eig.eigenvectors * inv) @ dagger(eig.eigenvectors)


def support_projector(m: np.ndarray) -> np.ndarray:
    """Projector onto the support (non-null eigenspaces) of a PSD matrix."""
    eig = _psd_eigs(m)
    cutoff = PINV_TOL * max(eig.eigenvalues[0], 0.0)
    keep = (eig.eigenvalues > cutoff).astype(float)
    return (eig.eigenvectors * keep) @ dagger(eig.eigenvectors)


def polar_unitary(a: np.ndarray) -> np.ndarray:
    """Unitary factor W of the polar decomposition ``a = W (a^dag a)^{1/2}``.

    Computed from the SVD, which extends W orthonormally across any null
    space, so rank-deficient inputs still yield a genuine unitary.
    """
    a = as_operator(a)
    u, _, vh = np.linalg.svd(a)
    return u @ vh


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product of two operators."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def partial_trace(m: np.ndarray, dims: tuple[int, int], side: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``dims`` gives (dim_A, dim_B) with A the leading tensor factor.
    ``side`` names the factor that is traced away: "A" returns the dB x dB
    operator left on B, "B" the dA x dA operator left on A.
    """
    m = as_operator(m)
    da, db = dims
    if m.shape[0] != da * db:
        raise DimensionMismatch(f"matrix of dim {m.shape[0]} is not {da}x{db}")
    t = m.reshape(da, db, da, db)
    if side == "A":
        return np.einsum("ijik->jk", t)
    if side == "B":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def trace_out_factor(m: np.ndarray, dims: Sequence[int], which: int) -> np.ndarray:
    """Trace a single factor out of an n-partite operator."""
    m = as_operator(m)
    dims = list(dims)
    n = len(dims)
    if m.shape[0] != int(np.prod(dims)):
        raise DimensionMismatch("factor dimensions do not multiply to the matrix dim")
    t = m.reshape(dims + dims)
    t = np.trace(t, axis1=which, axis2=n + which)
    d_rest = int(np.prod(dims)) // dims[which]
    return t.reshape(d_rest, d_rest)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance (1/2)||a - b||_1 between two Hermitian operators."""
    diff = as_operator(a) - as_operator(b)
    vals = np.linalg.eigvalsh((diff + dagger(diff)) / 2.0)
    return 0.5 * float(np.abs(vals).sum())


def fidelity_with_pure(psi: np.ndarray, rho: np.ndarray) -> float:
    """<psi|rho|psi> for a normalized state vector psi."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return float(np.real(psi.conj() @ rho @ psi))


# --------------------------------------------------------------------------
# Seeded random generators.  ``default_rng`` wraps the PCG64 bit generator,
# which is the stream named in CLI reports for reproducibility.


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_ket(dim: int, seed=None) -> np.ndarray:
    """Normalized Haar-random state vector."""
    g = rng_from(seed)
    v = g.normal(size=dim) + 1j * g.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix."""
    g = rng_from(seed)
    z = g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()


def random_hermitian(dim: int, seed=None, scale: float = 1.0) -> np.ndarray:
    g = rng_from(seed)
    z = g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))
    return scale * (z + dagger(z)) / 2.0


def random_state(dim: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Random density operator (PSD, unit trace) from the Ginibre ensemble."""
    g = rng_from(seed)
    r = dim if rank is None else rank
    z = g.normal(size=(dim, r)) + 1j * g.normal(size=(dim, r))
    m = z @ dagger(z)
    return m / np.trace(m).real


def random_psd(dim: int, seed=None) -> np.ndarray:
    g = rng_from(seed)
    z = g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))
    return z @ dagger(z)


def random_povm(dim: int, n_elements: int, seed=None) -> list[np.ndarray]:
    """Random ``n_elements``-outcome POVM.

    Draws random PSD matrices and conjugates each by the inverse square
    root of their sum, the same renormalization used for the standard
    informationally complete construction; validity is automatic.
    """
    g = rng_from(seed)
    parts = [random_psd(dim, g) for _ in range(n_elements)]
    total = sum(parts)
    w = mat_invsqrt(total)
    return [w @ p @ w for p in parts]
