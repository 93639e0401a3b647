"""Polynomial matrices over F_p[x] and minimal approximant bases.

A :class:`PolyMatrix` stores its coefficients as an int64 array of shape
``(deg + 1, rows, cols)``: ``coeffs[k]`` is the constant matrix multiplying
x^k.  Approximant bases are computed by the iterative M-Basis step and the
divide-and-conquer PM-Basis on top of it; shifted Popov forms are obtained
from any shifted reduced basis by Mulders-Storjohann row reduction followed
by the usual -delta normalization.

Shifted degrees follow the convention: the w-degree of row i is
max_j deg(M[i, j]) + w[j], and the w-pivot of the row is the *rightmost*
index reaching it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fplinalg
from .ring import ParameterError, check_prime

PMBASIS_THRESHOLD = 32

NEG = -(1 << 40)  # degree of the zero polynomial in shifted-degree arithmetic


class PolyMatrix:
    """A rows x cols matrix over F_p[x]; immutable after construction."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        c = np.array(coeffs, dtype=np.int64) % p
        if c.ndim != 3:
            raise ParameterError("coefficient array must have shape (deg+1, rows, cols)")
        if c.shape[0] == 0:
            c = np.zeros((1,) + c.shape[1:], dtype=np.int64)
        nz = np.flatnonzero(c.reshape(c.shape[0], -1).any(axis=1))
        top = nz[-1] + 1 if nz.size else 1
        c = c[:top]
        c.flags.writeable = False
        self.coeffs = c
        self.p = check_prime(p)

    @classmethod
    def identity(cls, n: int, p: int) -> "PolyMatrix":
        return cls(np.eye(n, dtype=np.int64)[None], p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "PolyMatrix":
        return cls(np.zeros((1, rows, cols), dtype=np.int64), p)

    @classmethod
    def from_entries(cls, entries, p: int) -> "PolyMatrix":
        """Build from a nested list: entries[i][j] is a coefficient list (x^0 first)."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        deg = max((len(e) for row in entries for e in row), default=1)
        c = np.zeros((max(deg, 1), rows, cols), dtype=np.int64)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ParameterError("ragged entry list")
            for j, e in enumerate(row):
                c[: len(e), i, j] = e
        return cls(c, p)

    def to_entries(self) -> list[list[list[int]]]:
        out = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                col = self.coeffs[:, i, j]
                nz = np.flatnonzero(col)
                row.append([int(v) for v in col[: nz[-1] + 1]] if nz.size else [])
            out.append(row)
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1], self.coeffs.shape[2]

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def degree(self) -> int:
        """Maximal entry degree; -1 for the zero matrix."""
        if not self.coeffs.any():
            return -1
        return self.coeffs.shape[0] - 1

    def entry_degrees(self) -> np.ndarray:
        return entry_degrees(self.coeffs)

    def truncate(self, sigma: int) -> "PolyMatrix":
        return PolyMatrix(self.coeffs[:sigma], self.p)

    def coefficient(self, k: int) -> np.ndarray:
        if k < self.coeffs.shape[0]:
            return self.coeffs[k].copy()
        return np.zeros(self.shape, dtype=np.int64)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.coeffs.transpose(0, 2, 1), self.p)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return poly_matmul(self, other)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.p == other.p and self.coeffs.shape == other.coeffs.shape and bool(
            np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.p, self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, deg={self.degree}, p={self.p})"


def entry_degrees(c: np.ndarray) -> np.ndarray:
    """Degree of every entry of a coefficient array; NEG for zero entries."""
    nz = c != 0
    any_nz = nz.any(axis=0)
    last = c.shape[0] - 1 - np.argmax(nz[::-1], axis=0)
    return np.where(any_nz, last, NEG)


def _mul_coeffs(a: np.ndarray, b: np.ndarray, p: int, top: int | None = None) -> np.ndarray:
    """Coefficient array of the product, optionally only degrees < top."""
    da, db = a.shape[0], b.shape[0]
    n = da + db - 1 if top is None else min(top, da + db - 1)
    out = np.zeros((max(n, 1), a.shape[1], b.shape[2]), dtype=np.int64)
    for i in range(min(da, n)):
        if not a[i].any():
            continue
        m = min(db, n - i)
        out[i : i + m] = (out[i : i + m] + fplinalg.matmul_mod(a[i], b[:m], p)) % p
    return out


def poly_matmul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Exact product over F_p[x]."""
    if a.p != b.p:
        raise ParameterError("moduli differ")
    if a.cols != b.rows:
        raise ParameterError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    return PolyMatrix(_mul_coeffs(a.coeffs, b.coeffs, a.p), a.p)


# ---------------------------------------------------------------------------
# shifted degrees, pivots, leading matrices


def row_degrees(m: PolyMatrix | np.ndarray, shift=None) -> np.ndarray:
    c = m.coeffs if isinstance(m, PolyMatrix) else m
    degs = entry_degrees(c)
    w = np.zeros(c.shape[2], dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    sd = np.where(degs > NEG, degs + w[None, :], NEG)
    return sd.max(axis=1)


def pivot_profile(m: PolyMatrix | np.ndarray, shift=None):
    """(pivot indices, pivot degrees, shifted row degrees); -1 pivots for zero rows."""
    c = m.coeffs if isinstance(m, PolyMatrix) else m
    degs = entry_degrees(c)
    w = np.zeros(c.shape[2], dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    sd = np.where(degs > NEG, degs + w[None, :], NEG)
    rdeg = sd.max(axis=1)
    cols = c.shape[2]
    hit = (sd == rdeg[:, None]) & (degs > NEG)
    piv = np.where(hit.any(axis=1), cols - 1 - np.argmax(hit[:, ::-1], axis=1), -1)
    pdeg = np.where(piv >= 0, degs[np.arange(len(piv)), np.maximum(piv, 0)], NEG)
    return piv, pdeg, rdeg


def leading_matrix(m: PolyMatrix | np.ndarray, shift=None) -> np.ndarray:
    """Row-wise w-leading matrix: entry (i, j) is the coefficient of x^(rdeg_i - w_j)."""
    c = m.coeffs if isinstance(m, PolyMatrix) else m
    w = np.zeros(c.shape[2], dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    rdeg = row_degrees(c, w)
    rows, cols = c.shape[1], c.shape[2]
    out = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        if rdeg[i] == NEG:
            continue
        k = rdeg[i] - w
        ok = (k >= 0) & (k < c.shape[0])
        js = np.flatnonzero(ok)
        out[i, js] = c[k[js], i, js]
    return out


def is_reduced(m: PolyMatrix, shift=None) -> bool:
    """Square nonsingular matrix whose w-leading matrix is invertible."""
    if m.rows != m.cols:
        return False
    return fplinalg.rank(leading_matrix(m, shift), m.p) == m.rows


def is_popov(m: PolyMatrix, shift=None) -> bool:
    """w-Popov: pivots on the diagonal, monic, strictly dominating their column."""
    if m.rows != m.cols:
        return False
    piv, pdeg, _ = pivot_profile(m, shift)
    if not np.array_equal(piv, np.arange(m.rows)):
        return False
    degs = entry_degrees(m.coeffs)
    for j in range(m.rows):
        if m.coeffs[pdeg[j], j, j] != 1:
            return False
        col = np.delete(degs[:, j], j)
        if np.any(col >= pdeg[j]):
            return False
    return True


def _row_profile(c: np.ndarray, i: int, w: np.ndarray):
    piv, pdeg, rdeg = pivot_profile(c[:, i : i + 1, :], w)
    return int(piv[0]), int(pdeg[0]), int(rdeg[0])


def weak_popov(m: PolyMatrix, shift=None) -> PolyMatrix:
    """Mulders-Storjohann reduction to w-weak Popov form (distinct w-pivots).

    The input must be square and nonsingular; the output generates the
    same row space and is w-reduced.  Only the row touched by a reduction
    step has its pivot recomputed.
    """
    p = m.p
    rows = m.rows
    w = np.zeros(m.cols, dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    cap = m.coeffs.shape[0]
    c = np.zeros((cap + 1, rows, m.cols), dtype=np.int64)
    c[:cap] = m.coeffs
    piv, pdeg, _ = pivot_profile(c, w)
    piv, pdeg = piv.tolist(), pdeg.tolist()
    owner: dict[int, int] = {}
    for start in range(rows):
        i = start
        while True:
            j = piv[i]
            if j < 0:
                raise ParameterError("matrix is singular (zero row during reduction)")
            k = owner.get(j)
            if k is None:
                owner[j] = i
                break
            if pdeg[i] < pdeg[k]:
                owner[j] = i
                i, k = k, i
            # reduce row i by x^s times row k, which has the same pivot
            s = pdeg[i] - pdeg[k]
            f = c[pdeg[i], i, j] * fplinalg.inv_mod(c[pdeg[k], k, j], p) % p
            need = s + int(entry_degrees(c[:, k : k + 1, :]).max()) + 1
            if need > c.shape[0]:
                c = np.concatenate([c, np.zeros((need - c.shape[0], rows, m.cols), dtype=np.int64)])
            top = c.shape[0] - s
            c[s:, i] = (c[s:, i] - f * c[:top, k]) % p
            piv[i], pdeg[i], _ = _row_profile(c, i, w)
    return PolyMatrix(c, p)


def popov_form(m: PolyMatrix, shift=None) -> PolyMatrix:
    """The unique w-Popov basis of the row space of a nonsingular square matrix."""
    p = m.p
    w = np.zeros(m.cols, dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    wp = weak_popov(m, w)
    piv, pdeg, _ = pivot_profile(wp, w)
    delta = np.zeros(m.cols, dtype=np.int64)
    delta[piv] = pdeg
    r = weak_popov(wp, -delta)
    lm = leading_matrix(r, -delta)
    u = fplinalg.inverse(lm, p)
    out = _mul_coeffs(u[None], r.coeffs, p)
    res = PolyMatrix(out, p)
    piv2, _, _ = pivot_profile(res, w)
    order = np.argsort(piv2)
    return PolyMatrix(res.coeffs[:, order], p)


# ---------------------------------------------------------------------------
# approximant bases


@dataclass(frozen=True)
class ApproximantBasis:
    basis: PolyMatrix
    order: int
    shift: tuple
    form: str = "reduced"

    def residual(self, f: PolyMatrix) -> PolyMatrix:
        """basis @ F truncated at the order; zero for a genuine approximant basis."""
        return PolyMatrix(_mul_coeffs(self.basis.coeffs, f.coeffs, f.p, top=self.order), f.p)


def _coeff_of_product(P: np.ndarray, F: np.ndarray, k: int, p: int) -> np.ndarray:
    """Coefficient k of P @ F as one stacked matmul."""
    lo = max(0, k - F.shape[0] + 1)
    hi = min(k, P.shape[0] - 1)
    if hi < lo:
        return np.zeros((P.shape[1], F.shape[2]), dtype=np.int64)
    idx = np.arange(lo, hi + 1)
    left = np.concatenate(list(P[idx]), axis=1)
    right = np.concatenate(list(F[k - idx]), axis=0)
    return fplinalg.matmul_mod(left, right, p)


_ELIM_BLOCK = 8


def _priority_elimination(delta: np.ndarray, order: np.ndarray, p: int):
    """Row-echelon transform of ``delta`` respecting a row priority.

    Rows are visited in ``order``; each row is reduced against the pivots
    of the rows visited before it.  Returns (L, pivots) where L is a
    unit lower-triangular transform (in the original row indexing, lower
    with respect to ``order``) and ``pivots`` lists the rows whose reduced
    residual is nonzero.  Updates are applied one block of rows at a time
    through :func:`fplinalg.matmul_mod`.
    """
    mu, nu = delta.shape
    work = np.concatenate([delta[order], np.eye(mu, dtype=np.int64)], axis=1)
    pivots: list[int] = []
    for s in range(0, mu, _ELIM_BLOCK):
        e = min(mu, s + _ELIM_BLOCK)
        blk_rows, blk_cols = [], []
        for r in range(s, e):
            row = work[r, :nu]
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            c = nz[0]
            blk_rows.append(r)
            blk_cols.append(c)
            if r + 1 < e:
                f = work[r + 1 : e, c] * fplinalg.inv_mod(row[c], p) % p
                hit = np.flatnonzero(f)
                if hit.size:
                    work[r + 1 + hit] = (work[r + 1 + hit] - f[hit, None] * work[r][None, :]) % p
        if not blk_rows or e == mu:
            pivots.extend(blk_rows)
            continue
        pivots.extend(blk_rows)
        # reduced copy of the block pivots: identity on their pivot columns
        red = work[blk_rows].copy()
        for k in range(len(blk_rows) - 1, -1, -1):
            c = blk_cols[k]
            red[k] = red[k] * fplinalg.inv_mod(red[k, c], p) % p
            if k:
                f = red[:k, c].copy()
                hit = np.flatnonzero(f)
                if hit.size:
                    red[hit] = (red[hit] - f[hit, None] * red[k][None, :]) % p
        coef = work[e:, blk_cols]
        if coef.any():
            work[e:] = (work[e:] - fplinalg.matmul_mod(coef, red, p)) % p
    L = np.zeros((mu, mu), dtype=np.int64)
    L[np.ix_(order, order)] = work[:, nu:]
    return L, order[np.array(pivots, dtype=np.int64)] if pivots else np.array([], dtype=np.int64)


def _mbasis(F: np.ndarray, sigma: int, shift: np.ndarray, p: int):
    """Iterative order basis: one order of approximation per step."""
    mu = F.shape[1]
    P = np.zeros((sigma + 1, mu, mu), dtype=np.int64)
    P[0] = np.eye(mu, dtype=np.int64)
    sd = np.array(shift, dtype=np.int64)
    top = 1  # P[:top] holds all nonzero coefficients
    for k in range(sigma):
        delta = _coeff_of_product(P[:top], F, k, p)
        if not delta.any():
            continue
        order = np.lexsort((np.arange(mu), sd))
        L, piv = _priority_elimination(delta, order, p)
        P[:top] = fplinalg.matmul_mod(L[None], P[:top], p)
        P[1 : top + 1, piv] = P[:top, piv]
        P[0, piv] = 0
        sd[piv] += 1
        top += 1
    return P[:top], sd


def _pmbasis(F: np.ndarray, sigma: int, shift: np.ndarray, p: int, threshold: int):
    if sigma <= threshold:
        return _mbasis(F, sigma, shift, p)
    half = sigma // 2
    P1, sd1 = _pmbasis(F[:half], half, shift, p, threshold)
    R = _mul_coeffs(P1, F[:sigma], p, top=sigma)[half:]
    if R.shape[0] < sigma - half:
        R = np.concatenate([R, np.zeros((sigma - half - R.shape[0],) + R.shape[1:], dtype=np.int64)])
    P2, sd2 = _pmbasis(R, sigma - half, sd1, p, threshold)
    return _mul_coeffs(P2, P1, p), sd2


def pm_basis(sigma: int, F: PolyMatrix, shift=None, threshold: int | None = None) -> ApproximantBasis:
    """A w-reduced basis of {p : p F = 0 mod x^sigma}.

    Divide-and-conquer on the order, with the iterative step below
    ``threshold`` (default :data:`PMBASIS_THRESHOLD`).
    """
    mu = F.rows
    w = np.zeros(mu, dtype=np.int64) if shift is None else np.asarray(shift, dtype=np.int64)
    if w.shape != (mu,):
        raise ParameterError(f"shift has length {w.size}, expected {mu}")
    if sigma < 0:
        raise ParameterError("order must be nonnegative")
    if sigma == 0:
        return ApproximantBasis(PolyMatrix.identity(mu, F.p), 0, tuple(int(v) for v in w), "reduced")
    coeffs = np.zeros((sigma,) + F.shape, dtype=np.int64)
    m = min(sigma, F.coeffs.shape[0])
    coeffs[:m] = F.coeffs[:m]
    P, _ = _pmbasis(coeffs, sigma, w, F.p, PMBASIS_THRESHOLD if threshold is None else threshold)
    return ApproximantBasis(PolyMatrix(P, F.p), sigma, tuple(int(v) for v in w), "reduced")


def popov_normalize(B: ApproximantBasis) -> ApproximantBasis:
    """Shifted Popov form of the module spanned by a reduced approximant basis."""
    P = popov_form(B.basis, np.asarray(B.shift, dtype=np.int64))
    return ApproximantBasis(P, B.order, B.shift, "popov")
