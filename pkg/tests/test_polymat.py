import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trunclrs import fplinalg
from trunclrs.polymat import (
    PolyMatrix,
    is_popov,
    is_reduced,
    pivot_profile,
    pm_basis,
    poly_matmul,
    popov_form,
    popov_normalize,
    row_degrees,
    weak_popov,
)
from trunclrs.ring import ParameterError

p = 9001


def rand_matrix(rng, rows, cols, deg):
    return PolyMatrix(rng.integers(0, p, size=(deg + 1, rows, cols)), p)


def approximant_space(F: PolyMatrix, sigma: int, D: int) -> np.ndarray:
    """F_p basis (rows) of {q : deg q <= D, q F = 0 mod x^sigma}, q flattened as (row, coeff)."""
    mu, nu = F.shape
    Fc = np.zeros((sigma, mu, nu), dtype=np.int64)
    m = min(sigma, F.coeffs.shape[0])
    Fc[:m] = F.coeffs[:m]
    M = np.zeros((mu * (D + 1), sigma * nu), dtype=np.int64)
    for j in range(mu):
        for c in range(D + 1):
            for k in range(c, sigma):
                M[j * (D + 1) + c, k * nu : (k + 1) * nu] = Fc[k - c, j]
    return fplinalg.nullspace(M.T, p)


def basis_span(B: PolyMatrix, D: int) -> np.ndarray:
    mu = B.rows
    rdeg = row_degrees(B)
    vecs = []
    for i in range(mu):
        for k in range(D - rdeg[i] + 1):
            v = np.zeros((mu, D + 1), dtype=np.int64)
            for j in range(mu):
                coeffs = B.coeffs[: rdeg[i] + 1, i, j]
                v[j, k : k + len(coeffs)] = coeffs
            vecs.append(v.reshape(-1))
    return np.array(vecs, dtype=np.int64).reshape(-1, mu * (D + 1))


def test_single_relation():
    F = PolyMatrix.from_entries([[[0, 1]]], p)
    B = pm_basis(2, F)
    assert popov_normalize(B).basis == PolyMatrix.from_entries([[[0, 1]]], p)


def test_zero_matrix_gives_identity():
    F = PolyMatrix.zeros(3, 2, p)
    assert pm_basis(4, F).basis == PolyMatrix.identity(3, p)


def test_sum_relation_popov():
    F = PolyMatrix.from_entries([[[1]], [[1]]], p)
    B = popov_normalize(pm_basis(1, F))
    assert B.basis == PolyMatrix.from_entries([[[0, 1], []], [[p - 1], [1]]], p)
    assert is_popov(B.basis)
    # the same module as the (1, -1), (0, x) basis
    other = PolyMatrix.from_entries([[[1], [p - 1]], [[], [0, 1]]], p)
    assert popov_form(other) == B.basis


def test_identity_is_popov():
    I = PolyMatrix.identity(4, p)
    assert is_popov(I)
    assert popov_form(I) == I


def test_popov_row_permutation(rng):
    F = rand_matrix(rng, 3, 1, 3)
    B = popov_normalize(pm_basis(4, F)).basis
    perm = PolyMatrix(B.coeffs[:, [2, 0, 1]], p)
    assert popov_form(perm) == B


def test_poly_matmul_examples(rng):
    A = rand_matrix(rng, 3, 3, 2)
    assert poly_matmul(A, PolyMatrix.identity(3, p)) == A
    X = PolyMatrix(np.array([np.zeros((2, 2)), np.eye(2)], dtype=np.int64), p)
    X2 = poly_matmul(X, X)
    assert X2 == PolyMatrix(np.array([np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2)], dtype=np.int64), p)
    B = rand_matrix(rng, 3, 3, 2)
    want = np.zeros((5, 3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for a in range(3):
                    for b in range(3):
                        want[a + b, i, j] += int(A.coeffs[a, i, k]) * int(B.coeffs[b, k, j])
    assert np.array_equal(poly_matmul(A, B).coeffs, (want % p).astype(np.int64))


def test_dimension_mismatch():
    with pytest.raises(ParameterError):
        poly_matmul(PolyMatrix.identity(2, p), PolyMatrix.identity(3, p))
    with pytest.raises(ParameterError):
        pm_basis(2, PolyMatrix.identity(2, p), shift=[0, 0, 0])


@pytest.mark.parametrize("threshold", [1, 2, 32])
def test_residual_and_generation_bruteforce(rng, threshold):
    for _ in range(25):
        mu, nu = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        sigma = int(rng.integers(1, 5))
        deg = int(rng.integers(0, 3))
        F = rand_matrix(rng, mu, nu, deg)
        if rng.random() < 0.3:
            F = PolyMatrix(F.coeffs * (rng.random(F.coeffs.shape) < 0.3), p)
        B = pm_basis(sigma, F, threshold=threshold)
        assert not B.residual(F).coeffs.any()
        assert is_reduced(B.basis)
        D = sigma + 1
        brute = approximant_space(F, sigma, D)
        mine = basis_span(B.basis, D)
        assert fplinalg.rank(mine, p) == brute.shape[0]
        assert fplinalg.rank(np.vstack([mine, brute]), p) == brute.shape[0]


def test_determinant_is_monomial(rng):
    pts = (1, 2, 3, 5)
    for _ in range(10):
        B = pm_basis(5, rand_matrix(rng, 3, 2, 2)).basis
        vals = []
        for z in pts:
            M = np.zeros((3, 3), dtype=np.int64)
            for k in range(B.coeffs.shape[0]):
                M = (M + B.coeffs[k] * pow(z, k, p)) % p
            vals.append(fplinalg.det(M, p))
        c = vals[0]  # det(B) = c x^k evaluated at 1
        assert c != 0
        assert any(all(v == c * pow(z, k, p) % p for v, z in zip(vals, pts)) for k in range(16))


def test_popov_uniqueness_across_thresholds(rng):
    for _ in range(20):
        F = rand_matrix(rng, 4, 2, 3)
        w = rng.integers(0, 4, size=4)
        a = popov_normalize(pm_basis(7, F, shift=w, threshold=1)).basis
        b = popov_normalize(pm_basis(7, F, shift=w, threshold=32)).basis
        assert a == b
        assert is_popov(a, w)


def test_weak_popov_has_distinct_pivots(rng):
    for _ in range(10):
        M = rand_matrix(rng, 4, 4, 3)
        W = weak_popov(M)
        piv, _, _ = pivot_profile(W)
        assert len(set(piv.tolist())) == 4
        assert is_reduced(W)


def test_weak_popov_rejects_singular():
    M = PolyMatrix.from_entries([[[1], [1]], [[1], [1]]], p)
    with pytest.raises(ParameterError):
        weak_popov(M)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 6), st.integers(0, 2**31))
def test_shifted_popov_is_canonical(mu, nu, sigma, seed):
    rng = np.random.default_rng(seed)
    F = rand_matrix(rng, mu, nu, 2)
    w = rng.integers(-2, 3, size=mu)
    B = popov_normalize(pm_basis(sigma, F, shift=w))
    assert not B.residual(F).coeffs.any()
    assert is_popov(B.basis, w)
    # a unimodular transformation of the basis has the same Popov form
    U = PolyMatrix.identity(mu, p)
    if mu > 1:
        c = U.coeffs.copy()
        c = np.concatenate([c, np.zeros((1, mu, mu), dtype=np.int64)])
        c[1, 0, 1] = 3
        U = PolyMatrix(c, p)
    assert popov_form(poly_matmul(U, B.basis), w) == B.basis
