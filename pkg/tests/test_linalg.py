import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbayes import linalg
from qbayes.errors import DimensionMismatch, NotHermitian, SingularOperator

RECONSTRUCTION_TOL = 1e-10
SQRT_TOL = 1e-9


def test_eig_identity():
    eig = linalg.eig_hermitian(np.eye(2))
    assert np.allclose(eig.eigenvalues, [1.0, 1.0])


def test_eig_sigma_z_sorted_descending():
    eig = linalg.eig_hermitian(linalg.sigma_z)
    assert np.allclose(eig.eigenvalues, [1.0, -1.0])
    assert abs(abs(eig.eigenvectors[0, 0]) - 1.0) < 1e-12
    assert abs(abs(eig.eigenvectors[1, 1]) - 1.0) < 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_eig_reconstructs_random_hermitian(seed):
    m = linalg.random_hermitian(4, seed)
    eig = linalg.eig_hermitian(m)
    scale = max(np.linalg.norm(m), 1.0)
    assert np.linalg.norm(eig.reconstruct() - m) <= RECONSTRUCTION_TOL * scale
    v = eig.eigenvectors
    assert np.linalg.norm(v.conj().T @ v - np.eye(4)) < 1e-12


def test_sqrt_identity_and_diagonal():
    assert np.allclose(linalg.mat_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(linalg.mat_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_sqrt_squares_back(seed):
    m = linalg.random_psd(3, seed)
    root = linalg.mat_sqrt(m)
    assert np.linalg.norm(root @ root - m) <= SQRT_TOL * np.linalg.norm(m)


def test_invsqrt_multiplies_back():
    g = np.array([[2.0, 0.5 - 0.5j], [0.5 + 0.5j, 2.0]])
    w = linalg.mat_invsqrt(g)
    assert np.linalg.norm(w @ g @ w - np.eye(2)) < 1e-9


def test_invsqrt_rejects_singular():
    with pytest.raises(SingularOperator):
        linalg.mat_invsqrt(np.diag([1.0, 0.0]))
    pinv = linalg.mat_invsqrt(np.diag([1.0, 0.0]), pseudo=True)
    assert np.allclose(pinv, np.diag([1.0, 0.0]))


def test_mat_fn_applies_spectrally():
    m = np.diag([1.0, 4.0])
    assert np.allclose(linalg.mat_fn(m, np.log), np.diag([0.0, np.log(4.0)]))


def test_polar_of_unitary_is_itself():
    u = linalg.random_unitary(3, 7)
    assert np.linalg.norm(linalg.polar_unitary(u) - u) < 1e-12


def test_polar_of_psd_is_identity():
    p = linalg.random_psd(3, 8)
    assert np.linalg.norm(linalg.polar_unitary(p) - np.eye(3)) < 1e-10


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_polar_reconstructs(seed):
    g = np.random.default_rng(seed)
    a = g.normal(size=(3, 3)) + 1j * g.normal(size=(3, 3))
    w = linalg.polar_unitary(a)
    pos = linalg.mat_sqrt(a.conj().T @ a)
    assert np.linalg.norm(w @ pos - a) <= 1e-9 * max(np.linalg.norm(a), 1.0)
    assert np.linalg.norm(w.conj().T @ w - np.eye(3)) <= 1e-9


def test_tensor_identity():
    assert np.allclose(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_flips_basis_state():
    xx = linalg.tensor(linalg.sigma_x, linalg.sigma_x)
    v00 = np.kron(linalg.ket(0, 2), linalg.ket(0, 2))
    v11 = np.kron(linalg.ket(1, 2), linalg.ket(1, 2))
    assert np.allclose(xx @ v00, v11)


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_tensor_trace_multiplicative(seed):
    g = np.random.default_rng(seed)
    a, b, c, d = (g.normal(size=(2, 2)) + 1j * g.normal(size=(2, 2)) for _ in range(4))
    lhs = np.trace(linalg.tensor(a, b) @ linalg.tensor(c, d))
    rhs = np.trace(a @ c) * np.trace(b @ d)
    assert abs(lhs - rhs) < 1e-10 * max(abs(rhs), 1.0)


def test_partial_trace_product_state():
    rho = linalg.random_state(2, 1)
    sigma = linalg.random_state(3, 2)
    joint = linalg.tensor(rho, sigma)
    assert np.linalg.norm(linalg.partial_trace(joint, (2, 3), "A") - sigma) < 1e-12
    assert np.linalg.norm(linalg.partial_trace(joint, (2, 3), "B") - rho) < 1e-12


def test_partial_trace_maximally_entangled_marginal():
    psi = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    rho = np.outer(psi, psi.conj())
    marginal = linalg.partial_trace(rho, (2, 2), "A")
    assert np.linalg.norm(marginal - np.eye(2) / 2.0) < 1e-12


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_partial_trace_preserves_trace_and_linearity(seed):
    g = np.random.default_rng(seed)
    m = g.normal(size=(6, 6)) + 1j * g.normal(size=(6, 6))
    n = g.normal(size=(6, 6)) + 1j * g.normal(size=(6, 6))
    for side in ("A", "B"):
        reduced = linalg.partial_trace(m, (2, 3), side)
        assert abs(np.trace(reduced) - np.trace(m)) < 1e-10
        combo = linalg.partial_trace(2.0 * m - 0.5 * n, (2, 3), side)
        direct = 2.0 * reduced - 0.5 * linalg.partial_trace(n, (2, 3), side)
        assert np.linalg.norm(combo - direct) < 1e-10


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.partial_trace(np.eye(5), (2, 3), "A")


def test_hs_inner_values():
    assert linalg.hs_inner(np.eye(2), np.eye(2)) == pytest.approx(2.0)
    assert abs(linalg.hs_inner(linalg.sigma_x, linalg.sigma_y)) < 1e-15


@given(seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_hs_inner_is_frobenius_norm(seed):
    g = np.random.default_rng(seed)
    a = g.normal(size=(3, 3)) + 1j * g.normal(size=(3, 3))
    assert linalg.hs_inner(a, a).real == pytest.approx(np.linalg.norm(a) ** 2)


def test_random_state_valid():
    rho = linalg.random_state(2, 3)
    assert np.linalg.eigvalsh(rho)[0] > -1e-12
    assert abs(np.trace(rho).real - 1.0) < 1e-12


def test_random_unitary_haar_columns():
    u = linalg.random_unitary(3, 4)
    assert np.linalg.norm(u.conj().T @ u - np.eye(3)) <= 1e-10


def test_random_povm_resolves_identity():
    elements = linalg.random_povm(2, 5, 11)
    assert np.linalg.norm(sum(elements) - np.eye(2)) <= 1e-10
    for e in elements:
        assert np.linalg.eigvalsh(e)[0] > -1e-12


def test_random_generators_deterministic_per_seed():
    assert np.array_equal(linalg.random_state(3, 42), linalg.random_state(3, 42))
    assert np.array_equal(linalg.random_unitary(3, 42), linalg.random_unitary(3, 42))


def test_trace_distance_pure_orthogonal():
    a = linalg.projector(linalg.ket(0, 2))
    b = linalg.projector(linalg.ket(1, 2))
    assert linalg.trace_distance(a, b) == pytest.approx(1.0)
