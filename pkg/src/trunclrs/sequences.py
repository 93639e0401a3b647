"""Partial sequences over A^n and polynomials of A[y] acting on them.

A sequence of e terms in A^n is an int64 array of shape (e, n, d); a
polynomial of A[y] of degree g is an array of shape (g + 1, d) holding the
coefficient of y^j at row j.  ``apply_poly(P, S)[k] = sum_j P[j] * S[k + j]``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .ring import DEFAULT_PRIME, ParameterError, TruncPoly, check_prime, tmul


def _trim_rows(c: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(c.any(axis=1)) if c.size else np.array([], dtype=np.int64)
    return c[: nz[-1] + 1] if nz.size else c[:0]


class AnnPoly:
    """A polynomial p_0 + p_1 y + ... + p_g y^g with coefficients in A."""

    __slots__ = ("coeffs", "p", "d")

    def __init__(self, coeffs, d: int | None = None, p: int = DEFAULT_PRIME):
        c = np.asarray(coeffs, dtype=np.int64)
        if c.ndim == 1:
            # a list of TruncPoly or a flat list of ints is ambiguous; only
            # accept the empty polynomial here
            if c.size:
                raise ParameterError("coefficient array must have shape (deg+1, d)")
            c = c.reshape(0, d or 1)
        if d is None:
            d = c.shape[1]
        if c.shape[1] != d:
            raise ParameterError("coefficient width does not match d")
        c = _trim_rows(c % check_prime(p))
        c.flags.writeable = False
        self.coeffs = c
        self.p = p
        self.d = d

    @classmethod
    def from_truncpolys(cls, coeffs: list[TruncPoly]) -> "AnnPoly":
        if not coeffs:
            raise ParameterError("need at least one coefficient to infer the ring")
        d, p = coeffs[0].d, coeffs[0].p
        return cls(np.array([c.coeffs for c in coeffs]).reshape(len(coeffs), d), d, p)

    @classmethod
    def from_lists(cls, coeffs: list[list[int]], d: int, p: int = DEFAULT_PRIME) -> "AnnPoly":
        c = np.zeros((len(coeffs), d), dtype=np.int64)
        for j, row in enumerate(coeffs):
            c[j, : len(row)] = row[:d]
        return cls(c, d, p)

    @classmethod
    def zero(cls, d: int, p: int = DEFAULT_PRIME) -> "AnnPoly":
        return cls(np.zeros((0, d), dtype=np.int64), d, p)

    @property
    def degree(self) -> int:
        """deg(0) = -1."""
        return self.coeffs.shape[0] - 1

    def __getitem__(self, j: int) -> TruncPoly:
        if 0 <= j <= self.degree:
            return TruncPoly(self.coeffs[j], self.d, self.p)
        return TruncPoly.zero(self.d, self.p)

    def leading_coefficient(self) -> TruncPoly:
        return self[self.degree]

    def is_zero(self) -> bool:
        return self.degree < 0

    def _padded(self, n: int) -> np.ndarray:
        out = np.zeros((n, self.d), dtype=np.int64)
        out[: self.coeffs.shape[0]] = self.coeffs
        return out

    def __add__(self, other: "AnnPoly") -> "AnnPoly":
        n = max(self.degree, other.degree) + 1
        return AnnPoly(self._padded(n) + other._padded(n), self.d, self.p)

    def __sub__(self, other: "AnnPoly") -> "AnnPoly":
        n = max(self.degree, other.degree) + 1
        return AnnPoly(self._padded(n) - other._padded(n), self.d, self.p)

    def __neg__(self):
        return AnnPoly(-self.coeffs, self.d, self.p)

    def scale(self, c: TruncPoly | np.ndarray) -> "AnnPoly":
        arr = c.coeffs if isinstance(c, TruncPoly) else np.asarray(c)
        return AnnPoly(tmul(self.coeffs, arr[None, :], self.p), self.d, self.p)

    def shift_y(self, j: int) -> "AnnPoly":
        """Multiply by y^j."""
        out = np.zeros((self.coeffs.shape[0] + j, self.d), dtype=np.int64)
        out[j:] = self.coeffs
        return AnnPoly(out, self.d, self.p)

    def __mul__(self, other: "AnnPoly") -> "AnnPoly":
        if self.is_zero() or other.is_zero():
            return AnnPoly.zero(self.d, self.p)
        out = np.zeros((self.degree + other.degree + 1, self.d), dtype=np.int64)
        for j in range(self.degree + 1):
            out[j : j + other.degree + 1] += tmul(self.coeffs[j][None, :], other.coeffs, self.p)
        return AnnPoly(out, self.d, self.p)

    def __eq__(self, other):
        if not isinstance(other, AnnPoly):
            return NotImplemented
        return (self.p, self.d) == (other.p, other.d) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.d, self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return f"AnnPoly(0; d={self.d}, p={self.p})"
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c.any():
                continue
            coeff = "+".join(f"{v}x^{i}" if i else f"{v}" for i, v in enumerate(c) if v)
            parts.append(f"({coeff})y^{j}")
        return f"AnnPoly({' + '.join(parts)}; d={self.d}, p={self.p})"

    def to_lists(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.coeffs]


class PartialSequence:
    """The first e terms S_0..S_{e-1} of a sequence in (A^n)^N."""

    __slots__ = ("terms", "p")

    def __init__(self, terms, p: int = DEFAULT_PRIME):
        t = np.asarray(terms, dtype=np.int64)
        if t.ndim != 3:
            raise ParameterError("terms must have shape (e, n, d)")
        if t.shape[1] < 1 or t.shape[2] < 1:
            raise ParameterError("need n >= 1 and d >= 1")
        t = t % check_prime(p)
        t.flags.writeable = False
        self.terms = t
        self.p = p

    @property
    def e(self) -> int:
        return self.terms.shape[0]

    def __len__(self) -> int:
        return self.terms.shape[0]

    @property
    def n(self) -> int:
        return self.terms.shape[1]

    @property
    def d(self) -> int:
        return self.terms.shape[2]

    def __getitem__(self, k):
        if isinstance(k, slice):
            return PartialSequence(self.terms[k], self.p)
        return self.terms[k]

    def is_zero(self) -> bool:
        return not self.terms.any()

    def __eq__(self, other):
        if not isinstance(other, PartialSequence):
            return NotImplemented
        return self.p == other.p and self.terms.shape == other.terms.shape and np.array_equal(self.terms, other.terms)

    def __repr__(self):
        return f"PartialSequence(e={self.e}, n={self.n}, d={self.d}, p={self.p})"

    @classmethod
    def from_scalars(cls, values, d: int, p: int = DEFAULT_PRIME) -> "PartialSequence":
        """Scalar (n = 1) sequence from a list whose items are ints or coefficient lists."""
        t = np.zeros((len(values), 1, d), dtype=np.int64)
        for k, v in enumerate(values):
            if isinstance(v, TruncPoly):
                t[k, 0] = v.coeffs
            elif np.ndim(v) == 0:
                t[k, 0, 0] = v
            else:
                t[k, 0, : len(v)] = v[:d]
        return cls(t, p)

    # -- file format -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "n": self.n,
            "e": self.e,
            "terms": self.terms.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PartialSequence":
        try:
            p, d, n, e = int(obj["p"]), int(obj["d"]), int(obj["n"]), int(obj["e"])
            terms = np.array(obj["terms"], dtype=np.int64).reshape(e, n, d) if e else np.zeros((0, n, d), np.int64)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParameterError(f"malformed sequence record: {exc}") from exc
        if terms.size and (terms.min() < 0 or terms.max() >= p):
            raise ParameterError("coefficients must lie in [0, p)")
        return cls(terms, p)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "PartialSequence":
        return cls.from_json(json.loads(Path(path).read_text()))


def _compatible(S: PartialSequence, T: PartialSequence):
    if S.p != T.p or S.n != T.n or S.d != T.d:
        raise ParameterError("sequences have different (p, n, d)")


def shift(S: PartialSequence, j: int) -> PartialSequence:
    """y^j . S: drop the first j terms."""
    if j < 0 or j > S.e:
        raise ParameterError(f"cannot shift {S.e} terms by {j}")
    return PartialSequence(S.terms[j:], S.p)


def scale_add(c: TruncPoly, S: PartialSequence, T: PartialSequence) -> PartialSequence:
    """c.S + T on the first min(len S, len T) terms."""
    _compatible(S, T)
    if c.p != S.p or c.d != S.d:
        raise ParameterError("scalar lives in a different ring")
    m = min(S.e, T.e)
    return PartialSequence(tmul(c.coeffs, S.terms[:m], S.p) + T.terms[:m], S.p)


def apply_array(P: np.ndarray, S: np.ndarray, p: int) -> np.ndarray:
    """Array version of :func:`apply_poly`; P is (g+1, d), S is (e, n, d)."""
    g = P.shape[0] - 1
    e = S.shape[0]
    out = np.zeros((e - g,) + S.shape[1:], dtype=np.int64)
    for j in range(g + 1):
        if P[j].any():
            out += tmul(P[j], S[j : e - g + j], p)
    return out % p


def apply_poly(P: AnnPoly, S: PartialSequence) -> PartialSequence:
    """P . S, of length e - deg(P); the zero polynomial acts as the zero map."""
    if P.p != S.p or P.d != S.d:
        raise ParameterError("polynomial and sequence live over different rings")
    if P.degree >= S.e:
        raise ParameterError(f"degree {P.degree} needs more than {S.e} terms")
    if P.is_zero():
        return PartialSequence(np.zeros_like(S.terms), S.p)
    return PartialSequence(apply_array(P.coeffs, S.terms, S.p), S.p)


def cancels(P: AnnPoly, S: PartialSequence) -> bool:
    return apply_poly(P, S).is_zero()


def truncated_series(S: PartialSequence) -> np.ndarray:
    """G = sum_j S_j y^(e-1-j) as an (e, n, d) array indexed by y-degree."""
    if S.e % 2:
        raise ParameterError("the truncated generating series needs an even number of terms")
    return np.ascontiguousarray(S.terms[::-1])
