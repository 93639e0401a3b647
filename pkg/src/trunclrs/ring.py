"""Arithmetic in F_p, F_p[x] and the truncated ring A = F_p[x]/(x^d).

Elements of A are stored densely: exactly ``d`` coefficients, the
coefficient of x^i at index i.  The scalar :class:`TruncPoly` type is the
public face; the array helpers (``tmul``, ``tinv``, ``valuations`` ...)
work on numpy int64 arrays whose *last* axis holds the d coefficients and
are what the algorithms use internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_PRIME = 9001
# Univariate products switch from schoolbook to Karatsuba above this length.
KARATSUBA_THRESHOLD = 32
# Keeps every accumulated product sum inside int64.
MAX_PRIME = 1 << 31


class ParameterError(ValueError):
    """Operands with incompatible parameters (p, d, shapes)."""


class NotAUnitError(ArithmeticError):
    """Inversion or normalization of an element that does not allow it."""


class ContractError(ValueError):
    """An operation was called on input violating its documented precondition."""


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p, p one machine word."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not (2 <= self.p < MAX_PRIME) or not _is_prime(self.p):
            raise ParameterError(f"modulus {self.p} is not a supported prime")

    def __call__(self, value: int) -> int:
        return int(value) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return pow(a, -1, self.p)


def check_prime(p: int) -> int:
    PrimeField(p)
    return p


# ---------------------------------------------------------------------------
# univariate polynomials over F_p (1-D coefficient arrays, low degree first)


def poly_trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _schoolbook(a, b, p):
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for i, ai in enumerate(a):
        if ai:
            out[i : i + len(b)] = (out[i : i + len(b)] + ai * b) % p
    return out


def poly_mul(a, b, p: int) -> np.ndarray:
    """Full product of two coefficient vectors over F_p."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) == 0 or len(b) == 0:
        return np.zeros(0, dtype=np.int64)
    if min(len(a), len(b)) <= KARATSUBA_THRESHOLD:
        return _schoolbook(a, b, p)
    h = max(len(a), len(b)) // 2
    a0, a1 = a[:h], a[h:]
    b0, b1 = b[:h], b[h:]
    z0 = poly_mul(a0, b0, p)
    z2 = poly_mul(a1, b1, p) if len(a1) and len(b1) else np.zeros(0, np.int64)
    sa = _padd(a0, a1, p)
    sb = _padd(b0, b1, p)
    z1 = poly_mul(sa, sb, p)
    z1 = _psub(_psub(z1, z0, p), z2, p)
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    out[: len(z0)] += z0
    out[h : h + len(z1)] += z1
    out[2 * h : 2 * h + len(z2)] += z2
    return out % p


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return out % p


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out % p


# ---------------------------------------------------------------------------
# vectorized arithmetic in A (last axis = d coefficients)


def tmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Broadcast product in A of two coefficient arrays (last axis length d)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    d = a.shape[-1]
    if b.shape[-1] != d:
        raise ParameterError("truncation orders differ")
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    # (p-1)^2 * d must fit in int64 between reductions
    safe = max(1, (1 << 62) // max(1, (p - 1) ** 2))
    for i in range(d):
        ai = a[..., i : i + 1]
        if not ai.any():
            continue
        out[..., i:] += ai * b[..., : d - i]
        if (i + 1) % safe == 0:
            out %= p
    return out % p


def mul_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix M with ``v @ M`` equal to the product a*v in A (row vectors)."""
    a = np.asarray(a, dtype=np.int64)
    d = a.shape[-1]
    idx = np.arange(d)[None, :] - np.arange(d)[:, None]  # m - c at [c, m]
    return np.where(idx >= 0, a[np.clip(idx, 0, d - 1)], 0)


def tmul_elem(a: np.ndarray, arr: np.ndarray, p: int) -> np.ndarray:
    """a * arr for a single element a (shape (d,)) and any coefficient array."""
    arr = np.asarray(arr, dtype=np.int64)
    d = arr.shape[-1]
    if (p - 1) ** 2 * d < (1 << 53):
        out = arr.astype(np.float64) @ mul_matrix(a).astype(np.float64)
        return np.fmod(out, p).astype(np.int64)
    return tmul(a, arr, p)


def tshift(a: np.ndarray, k: int) -> np.ndarray:
    """Multiply by x^k in A (k >= 0)."""
    a = np.asarray(a, dtype=np.int64)
    d = a.shape[-1]
    out = np.zeros_like(a)
    if k < d:
        out[..., k:] = a[..., : d - k]
    return out


def tdivx(a: np.ndarray, k: int) -> np.ndarray:
    """Exact quotient by x^k, padded with zeros (caller guarantees valuation >= k)."""
    a = np.asarray(a, dtype=np.int64)
    d = a.shape[-1]
    out = np.zeros_like(a)
    if k < d:
        out[..., : d - k] = a[..., k:]
    return out


def valuations(a: np.ndarray) -> np.ndarray:
    """x-adic valuation along the last axis; d for zero entries."""
    a = np.asarray(a)
    d = a.shape[-1]
    nz = a != 0
    return np.where(nz.any(axis=-1), nz.argmax(axis=-1), d)


def tinv(a: np.ndarray, p: int) -> np.ndarray:
    """Inverse in A by Newton iteration g <- g(2 - a g); entries must be units."""
    a = np.asarray(a, dtype=np.int64) % p
    d = a.shape[-1]
    c0 = a[..., 0]
    if np.any(c0 == 0):
        raise NotAUnitError("element with zero constant term is not a unit")
    g = np.zeros_like(a)
    g[..., 0] = np.vectorize(lambda c: pow(int(c), -1, p), otypes=[np.int64])(c0)
    prec = 1
    while prec < d:
        prec = min(2 * prec, d)
        ag = tmul(a[..., :prec], g[..., :prec], p)
        two_minus = (-ag) % p
        two_minus[..., 0] = (two_minus[..., 0] + 2) % p
        g[..., :prec] = tmul(g[..., :prec], two_minus, p)
    return g


def tconst(c: int, d: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.int64)
    out[0] = c
    return out


def tmonomial(i: int, d: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.int64)
    if i < d:
        out[i] = 1
    return out


# ---------------------------------------------------------------------------
# scalar element of A


class TruncPoly:
    """An element of F_p[x]/(x^d), immutable."""

    __slots__ = ("p", "d", "_c")

    def __init__(self, coeffs, d: int | None = None, p: int = DEFAULT_PRIME):
        c = np.asarray(coeffs, dtype=np.int64).ravel()
        if d is None:
            d = len(c)
        if d < 1:
            raise ParameterError("truncation order must be >= 1")
        check_prime(p)
        full = np.zeros(d, dtype=np.int64)
        m = min(d, len(c))
        full[:m] = c[:m]
        full %= p
        full.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_c", full)

    def __setattr__(self, name, value):
        raise AttributeError("TruncPoly is immutable")

    @classmethod
    def from_array(cls, arr, p: int) -> "TruncPoly":
        return cls(arr, len(arr), p)

    @classmethod
    def zero(cls, d: int, p: int = DEFAULT_PRIME) -> "TruncPoly":
        return cls([], d, p)

    @classmethod
    def one(cls, d: int, p: int = DEFAULT_PRIME) -> "TruncPoly":
        return cls([1], d, p)

    @classmethod
    def monomial(cls, i: int, d: int, p: int = DEFAULT_PRIME) -> "TruncPoly":
        return cls(tmonomial(i, d), d, p)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def to_list(self) -> list[int]:
        return [int(c) for c in self._c]

    def _check(self, other: "TruncPoly"):
        if not isinstance(other, TruncPoly):
            return NotImplemented
        if other.p != self.p or other.d != self.d:
            raise ParameterError(f"mismatched rings: (p={self.p}, d={self.d}) vs (p={other.p}, d={other.d})")
        return other

    def _coerce(self, other):
        if isinstance(other, (int, np.integer)):
            return TruncPoly([int(other)], self.d, self.p)
        return self._check(other)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncPoly(self._c + other._c, self.d, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncPoly(self._c - other._c, self.d, self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncPoly(-self._c, self.d, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return trunc_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = TruncPoly([int(other)], self.d, self.p)
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.p == other.p and self.d == other.d and bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash((self.p, self.d, self._c.tobytes()))

    def __bool__(self):
        return bool(self._c.any())

    def __repr__(self):
        terms = []
        for i, c in enumerate(self._c):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}" if i > 1 else f"{c}*x")
        return f"TruncPoly({' + '.join(terms) or '0'}; d={self.d}, p={self.p})"

    def valuation(self) -> int:
        return valuation(self)

    def is_unit(self) -> bool:
        return is_unit(self)

    def inverse(self) -> "TruncPoly":
        return inverse(self)


def trunc_mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    """(a*b) mod x^d."""
    if a.p != b.p or a.d != b.d:
        raise ParameterError("operands live in different truncated rings")
    prod = poly_mul(a.coeffs, b.coeffs, a.p)
    return TruncPoly(prod[: a.d], a.d, a.p)


def valuation(a: TruncPoly) -> int:
    return int(valuations(a.coeffs))


def is_unit(a: TruncPoly) -> bool:
    return a.coeffs[0] != 0


def inverse(a: TruncPoly) -> TruncPoly:
    if not is_unit(a):
        raise NotAUnitError(f"{a!r} is not a unit")
    return TruncPoly(tinv(a.coeffs, a.p), a.d, a.p)


def normalize_leading(a: TruncPoly) -> tuple[int, TruncPoly]:
    """Split a nonzero a as x^t * u with u a unit.

    Only the first d - t coefficients of u are determined by a; the rest are
    set to zero.
    """
    t = valuation(a)
    if t == a.d:
        raise NotAUnitError("zero has no leading normalization")
    return t, TruncPoly(tdivx(a.coeffs, t), a.d, a.p)
