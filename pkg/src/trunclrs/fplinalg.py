"""Dense linear algebra over F_p on int64 numpy arrays."""

from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 1 << 53


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p, exact.

    Goes through float64 BLAS whenever every partial sum stays below 2^53,
    otherwise chunks the inner dimension in int64.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    k = a.shape[-1]
    if k == 0:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        return np.zeros(shape, dtype=np.int64)
    bound = (p - 1) ** 2
    if k * bound < _FLOAT_EXACT:
        out = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.fmod(out, p).astype(np.int64)
    step = max(1, (1 << 62) // max(bound, 1))
    out = None
    for s in range(0, k, step):
        part = np.matmul(a[..., s : s + step].astype(np.int64), b[..., s : s + step, :].astype(np.int64)) % p
        out = part if out is None else (out + part) % p
    return out


def rref(m: np.ndarray, p: int, ncols: int | None = None):
    """Reduced row echelon form; pivots are searched in the first ``ncols`` columns.

    Returns (R, pivot_columns).
    """
    r = np.array(m, dtype=np.int64) % p
    rows, cols = r.shape
    limit = cols if ncols is None else ncols
    pivots = []
    row = 0
    for c in range(limit):
        if row == rows:
            break
        nz = np.flatnonzero(r[row:, c])
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] * inv_mod(r[row, c], p) % p
        col = r[:, c].copy()
        col[row] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            r[nzr] = (r[nzr] - np.outer(col[nzr], r[row])) % p
        pivots.append(c)
        row += 1
    return r, pivots


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of a @ x = b (b a vector), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    n = a.shape[1]
    aug, piv = rref(np.hstack([a, b]), p, ncols=n)
    # inconsistent iff a row is zero on the left and nonzero on the right
    lead = len(piv)
    if aug[lead:, n].any():
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = aug[i, n]
    return x


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, as rows."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(piv):
            basis[k, c] = (-r[i, f]) % p
    return basis


def det(a: np.ndarray, p: int) -> int:
    r = np.array(a, dtype=np.int64) % p
    n = r.shape[0]
    out = 1
    for c in range(n):
        nz = np.flatnonzero(r[c:, c])
        if nz.size == 0:
            return 0
        piv = c + nz[0]
        if piv != c:
            r[[c, piv]] = r[[piv, c]]
            out = -out
        out = out * int(r[c, c]) % p
        f = r[c + 1 :, c] * inv_mod(r[c, c], p) % p
        r[c + 1 :] = (r[c + 1 :] - np.outer(f, r[c])) % p
    return out % p


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug, piv = rref(np.hstack([np.asarray(a, dtype=np.int64), np.eye(n, dtype=np.int64)]), p, ncols=n)
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix over F_p")
    return aug[:, n:]
