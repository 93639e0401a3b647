"""Sparse matrices over A: Krylov projections, minimal-polynomial ideals, determinants.

Both applications follow Wiedemann's pattern.  The matrix is only touched
through matrix-vector products; the resulting projected sequences are
handed to the Hankel-kernel annihilator.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fplinalg
from .bivariate import LexGB, minimal_gb_extract
from .hankel import hankel_kernel_annihilator
from .ring import DEFAULT_PRIME, ParameterError, TruncPoly, check_prime, tmul
from .sequences import AnnPoly, PartialSequence, apply_array

DET_RETRIES = 5


class DeterminantFailure(RuntimeError):
    """Every preconditioner draw produced a derogatory matrix."""


class SparseMatrixA:
    """Square matrix over A = F_p[x]/(x^d) stored as a coordinate list.

    ``rows`` and ``cols`` are 0-based; ``vals`` has shape (nnz, d).  Zero
    entries are dropped and each position may appear only once.
    """

    __slots__ = ("size", "d", "p", "rows", "cols", "vals")

    def __init__(self, size: int, rows, cols, vals, d: int, p: int = DEFAULT_PRIME):
        check_prime(p)
        if size < 1 or d < 1:
            raise ParameterError("need size >= 1 and d >= 1")
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        vals = np.asarray(vals, dtype=np.int64).reshape(len(rows), d) % p
        if len(cols) != len(rows):
            raise ParameterError("row and column lists differ in length")
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= size or cols.max() >= size):
            raise ParameterError("index out of range")
        keys = rows * size + cols
        if np.unique(keys).size != keys.size:
            raise ParameterError("duplicate entry position")
        keep = vals.any(axis=1)
        order = np.argsort(keys[keep], kind="stable")
        self.size, self.d, self.p = size, d, p
        self.rows = rows[keep][order]
        self.cols = cols[keep][order]
        self.vals = vals[keep][order]

    @property
    def nnz(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, M, p: int = DEFAULT_PRIME) -> "SparseMatrixA":
        M = np.asarray(M, dtype=np.int64) % p
        if M.ndim != 3 or M.shape[0] != M.shape[1]:
            raise ParameterError("dense matrix must have shape (size, size, d)")
        r, c = np.nonzero(M.any(axis=2))
        return cls(M.shape[0], r, c, M[r, c], M.shape[2], p)

    @classmethod
    def identity(cls, size: int, d: int, p: int = DEFAULT_PRIME) -> "SparseMatrixA":
        vals = np.zeros((size, d), dtype=np.int64)
        vals[:, 0] = 1
        return cls(size, np.arange(size), np.arange(size), vals, d, p)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size, self.d), dtype=np.int64)
        out[self.rows, self.cols] = self.vals
        return out

    def constant_part(self) -> np.ndarray:
        return self.to_dense()[:, :, 0]

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.size, self.d):
            raise ParameterError(f"vector must have shape ({self.size}, {self.d})")
        out = np.zeros_like(v)
        if self.nnz:
            np.add.at(out, self.rows, tmul(self.vals, v[self.cols], self.p))
        return out % self.p

    def scale_columns(self, diag) -> "SparseMatrixA":
        """A D for a constant diagonal D."""
        diag = np.asarray(diag, dtype=np.int64)
        return SparseMatrixA(self.size, self.rows, self.cols, self.vals * diag[self.cols, None], self.d, self.p)

    # -- text format: "p d n nnz" then "row col c_0 ... c_{d-1}" --------------

    def to_text(self) -> str:
        lines = [f"{self.p} {self.d} {self.size} {self.nnz}"]
        for r, c, v in zip(self.rows, self.cols, self.vals):
            lines.append(" ".join(str(int(t)) for t in (r, c, *v)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseMatrixA":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines or len(lines[0]) != 4:
            raise ParameterError("missing header 'p d n nnz'")
        try:
            p, d, size, nnz = (int(t) for t in lines[0])
            body = [[int(t) for t in ln] for ln in lines[1:]]
        except ValueError as exc:
            raise ParameterError(f"non-integer token: {exc}") from exc
        if len(body) != nnz:
            raise ParameterError(f"header announces {nnz} entries, found {len(body)}")
        if any(len(ln) != d + 2 for ln in body):
            raise ParameterError(f"each entry line needs {d + 2} integers")
        arr = np.array(body, dtype=np.int64).reshape(nnz, d + 2)
        if arr[:, 2:].size and (arr[:, 2:].min() < 0 or arr[:, 2:].max() >= p):
            raise ParameterError("coefficients must lie in [0, p)")
        return cls(size, arr[:, 0], arr[:, 1], arr[:, 2:], d, p)

    def dump(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "SparseMatrixA":
        return cls.from_text(Path(path).read_text())

    def __repr__(self):
        return f"SparseMatrixA(size={self.size}, nnz={self.nnz}, d={self.d}, p={self.p})"


def random_sparse_matrix(size: int, d: int, per_row: int = 3, seed=None, p: int = DEFAULT_PRIME) -> SparseMatrixA:
    """About ``per_row`` random nonzero entries per row, always including the diagonal."""
    rng = np.random.default_rng(seed)
    rows, cols = [], []
    for i in range(size):
        others = rng.choice(size, size=min(size, per_row), replace=False)
        picked = sorted(set(int(c) for c in others[: per_row - 1]) | {i})
        rows.extend([i] * len(picked))
        cols.extend(picked)
    vals = rng.integers(0, p, size=(len(rows), d))
    vals[:, 0] = rng.integers(1, p, size=len(rows))
    return SparseMatrixA(size, rows, cols, vals, d, p)


def _random_vectors(rng, count: int, size: int, d: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(count, size, d), dtype=np.int64)


def krylov_sequence(A: SparseMatrixA, U, v, length: int) -> PartialSequence:
    """Terms (u_j^T A^k v)_j for k < length, with one matvec per term."""
    if length < 1:
        raise ParameterError("length must be positive")
    U = np.asarray(U, dtype=np.int64).reshape(-1, A.size, A.d) % A.p
    w = np.asarray(v, dtype=np.int64) % A.p
    tau, mu, d, p = U.shape[0], A.size, A.d, A.p
    K = np.empty((length, mu, d), dtype=np.int64)
    for k in range(length):
        K[k] = w
        if k + 1 < length:
            w = A.matvec(w)
    # u^T w = sum_i w_i * u_i in A, i.e. w_i @ mul_matrix(u_i) summed over i
    idx = np.arange(d)[None, :] - np.arange(d)[:, None]
    M = np.where(idx >= 0, U[..., np.clip(idx, 0, d - 1)], 0)  # (tau, mu, d, d), M[.., c, m] = u[m - c]
    right = np.moveaxis(M, 0, 2).reshape(mu * d, tau * d)
    terms = fplinalg.matmul_mod(K.reshape(length, mu * d), right, p).reshape(length, tau, d)
    return PartialSequence(terms, p)


def _dense_matmul(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    return tmul(X[:, :, None, :], Y[None, :, :, :], p).sum(axis=1) % p


def coordinate_annihilator(A: SparseMatrixA) -> LexGB:
    """ann(A) from all size^2 coordinate sequences of A^0, A^1, ... (dense, small inputs)."""
    mu, d, p = A.size, A.d, A.p
    dense = A.to_dense()
    powers = np.empty((2 * mu, mu * mu, d), dtype=np.int64)
    cur = np.zeros((mu, mu, d), dtype=np.int64)
    cur[np.arange(mu), np.arange(mu), 0] = 1
    for k in range(2 * mu):
        powers[k] = cur.reshape(mu * mu, d)
        cur = _dense_matmul(dense, cur, p)
    S = PartialSequence(powers, p)
    return minimal_gb_extract(hankel_kernel_annihilator(S, mu), d)


@dataclass
class MinpolyResult:
    basis: LexGB
    tau: int
    rounds: int
    fallback: bool

    @property
    def generators(self) -> list[AnnPoly]:
        return self.basis.to_annpolys()


def _cancels_all(polys: list[AnnPoly], S: PartialSequence) -> bool:
    return all(not apply_array(P.coeffs, S.terms, S.p).any() for P in polys if P.degree < S.e)


def minimal_ideal_of_matrix(A: SparseMatrixA, seed=None) -> MinpolyResult:
    """Lex Groebner basis of ann(A) by random projections with doubling.

    Round s uses tau = 2^s projections u_1..u_tau of the Krylov sequence
    of a random v, with 2 size terms each.  The candidate ideal is accepted
    when it also cancels a fresh projection u'^T A^k v' (with an independent
    v' as well, so a v whose Krylov sequence has a larger annihilator than
    A cannot be accepted).  Once tau exceeds size^2 the ideal is computed
    from all coordinate sequences instead.
    """
    mu, d, p = A.size, A.d, A.p
    rng = np.random.default_rng(seed)
    L = 2 * mu
    v = _random_vectors(rng, 1, mu, d, p)[0]
    tau, rounds = 1, 0
    while tau <= mu * mu:
        rounds += 1
        U = _random_vectors(rng, tau, mu, d, p)
        S = krylov_sequence(A, U, v, L)
        gb = minimal_gb_extract(hankel_kernel_annihilator(S, mu), d)
        u_val, v_val = _random_vectors(rng, 2, mu, d, p)
        if _cancels_all(gb.to_annpolys(), krylov_sequence(A, u_val, v_val, L)):
            return MinpolyResult(gb, tau, rounds, False)
        tau *= 2
    return MinpolyResult(coordinate_annihilator(A), mu * mu, rounds, True)


@dataclass
class DeterminantResult:
    value: TruncPoly
    attempts: int
    charpoly: AnnPoly
    preconditioner: np.ndarray


def determinant(A: SparseMatrixA, seed=None, retries: int = DET_RETRIES) -> DeterminantResult:
    """det(A) through the characteristic polynomial of A D for a random diagonal D.

    chi(y) = det(y I - A D) satisfies chi(0) = (-1)^size det(A) det(D).  A
    draw is rejected unless the projected sequence has a principal
    annihilator generated by a monic polynomial of degree size.
    """
    mu, d, p = A.size, A.d, A.p
    rng = np.random.default_rng(seed)
    for attempt in range(1, retries + 1):
        diag = rng.integers(1, p, size=mu, dtype=np.int64)
        B = A.scale_columns(diag)
        u, v = _random_vectors(rng, 2, mu, d, p)
        S = krylov_sequence(B, u, v, 2 * mu)
        gb = minimal_gb_extract(hankel_kernel_annihilator(S, mu), d)
        if gb.leading_terms != [(0, mu), (d, 0)]:
            continue
        P = gb.to_annpolys()[0]
        scale = 1
        for c in diag:
            scale = scale * int(c) % p
        factor = (-1) ** mu * pow(scale, -1, p) % p
        value = TruncPoly(P.coeffs[0] * factor % p, d, p)
        return DeterminantResult(value, attempts=attempt, charpoly=P, preconditioner=diag)
    raise DeterminantFailure(f"no nonderogatory preconditioned matrix in {retries} draws")


def dense_det_oracle(A: SparseMatrixA) -> TruncPoly:
    """det(A) mod x^d by evaluation at size (d - 1) + 1 points and interpolation."""
    mu, d, p = A.size, A.d, A.p
    npts = mu * (d - 1) + 1
    if npts > p:
        raise ParameterError("the field is too small for evaluation/interpolation")
    dense = A.to_dense()
    pts = np.arange(npts, dtype=np.int64)
    V = np.ones((npts, npts), dtype=np.int64)
    for j in range(1, npts):
        V[:, j] = V[:, j - 1] * pts % p
    values = np.empty(npts, dtype=np.int64)
    powers = V[:, :d]
    for k in range(npts):
        M = (dense * powers[k][None, None, :]).sum(axis=2) % p
        values[k] = fplinalg.det(M, p)
    coeffs = fplinalg.solve(V, values, p)
    return TruncPoly(np.asarray(coeffs, dtype=np.int64).reshape(-1)[:d], d, p)
