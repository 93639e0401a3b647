"""Kurakin's algorithm for the annihilator of a partial sequence over A^n.

For every i < d it computes a canceling polynomial P_i of minimal degree
with leading coefficient exactly x^i.  The work happens in a
:class:`SubmoduleTable`: for each k, generators of the A-submodule of A^n
spanned by the k-th terms of the tracked sequences having exactly k leading
zeros, with the polynomial and sequence that produced each generator.

Membership in such a submodule, and the coefficients expressing a member,
are read off an approximant basis of the lifted generator matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polymat import PolyMatrix, pm_basis, popov_normalize
from .ring import (
    DEFAULT_PRIME,
    ContractError,
    ParameterError,
    TruncPoly,
    tdivx,
    tinv,
    tmul,
    tmul_elem,
    tshift,
    valuations,
)
from .sequences import AnnPoly, PartialSequence


def _vec_array(v, n: int | None = None, d: int | None = None) -> np.ndarray:
    """Accept a VecA as an (n, d) array or a list of TruncPoly."""
    if isinstance(v, np.ndarray):
        return v.astype(np.int64, copy=False)
    if v and isinstance(v[0], TruncPoly):
        return np.array([c.coeffs for c in v], dtype=np.int64)
    return np.asarray(v, dtype=np.int64)


def relation_basis(vectors: np.ndarray, p: int) -> np.ndarray:
    """Popov basis of the F_p[x]-relations among the rows of ``vectors`` mod x^d.

    ``vectors`` has shape (m, n, d).  Returns coefficients (deg+1, m, m):
    each row q of the basis satisfies sum_j q_j * vectors[j] = 0 mod x^d.
    """
    m, n, d = vectors.shape
    F = PolyMatrix(np.transpose(vectors, (2, 0, 1)), p)
    B = popov_normalize(pm_basis(d, F))
    c = B.basis.coeffs
    if c.shape[0] < d:
        c = np.concatenate([c, np.zeros((d - c.shape[0], m, m), dtype=np.int64)])
    return c


def _solve_arrays(gens: np.ndarray, target: np.ndarray, p: int):
    """Coefficients c (m, d) with target = sum_j c_j gens_j, or None."""
    m = gens.shape[0]
    if not target.any():
        return np.zeros((m, target.shape[-1]), dtype=np.int64)
    if m == 0:
        return None
    d = target.shape[-1]
    B = relation_basis(np.concatenate([gens, target[None]], axis=0), p)
    rows = np.flatnonzero(B[0, :, m])
    if rows.size == 0:
        return None
    q = B[:d, rows[0], :].T  # (m + 1, d), q[j] is a polynomial truncated mod x^d
    inv_last = tinv(q[m], p)
    return (-tmul(q[:m], inv_last[None, :], p)) % p


def submodule_membership_and_solve(gens, target, p: int | None = None):
    """c with target = sum_j c_j gens[j] in A^n, or None if target is outside the span.

    ``gens`` is a list of VecA (arrays of shape (n, d) or lists of TruncPoly)
    and ``target`` a VecA.  The coefficients come from the first Popov basis
    row whose last entry has a nonzero constant term.
    """
    t = _vec_array(target)
    if p is None:
        p = target[0].p if (isinstance(target, list) and target and isinstance(target[0], TruncPoly)) else DEFAULT_PRIME
    g = np.array([_vec_array(v) for v in gens], dtype=np.int64).reshape((len(gens),) + t.shape)
    if g.shape[1:] != t.shape:
        raise ParameterError("generators and target have different shapes")
    c = _solve_arrays(g % p, t % p, p)
    if c is None:
        return None
    d = t.shape[-1]
    return [TruncPoly(row, d, p) for row in c]


class ModuleEchelon:
    """Howell-type echelon form of the A-span of a few vectors of A^n.

    Column by column, the row of least valuation becomes a pivot normalized
    to exactly x^v, clears that column in the other rows, and leaves its
    multiple x^{d-v} * pivot behind (which vanishes in the pivot column).
    Every pivot carries its coordinates in terms of the original
    generators, so membership tests also return coefficients.
    """

    def __init__(self, gens: np.ndarray, p: int):
        m, n, d = gens.shape
        self.m, self.n, self.d, self.p = m, n, d, p
        rows = [g.copy() for g in gens]
        coords = [np.eye(m, dtype=np.int64)[j][:, None] * np.eye(1, d, 0, dtype=np.int64) for j in range(m)]
        self.pivots: list[tuple[int, int, np.ndarray, np.ndarray]] = []  # (col, v, row, coords)
        for col in range(n):
            if not rows:
                break
            vals = [int(valuations(r[col])) for r in rows]
            j = int(np.argmin(vals))
            v = vals[j]
            if v >= d:
                continue
            row, co = rows.pop(j), coords.pop(j)
            u = tinv(tdivx(row[col], v), p)
            row, co = tmul_elem(u, row, p), tmul_elem(u, co, p)
            for r in range(len(rows)):
                q = tdivx(rows[r][col], v)
                if q.any():
                    rows[r] = (rows[r] - tmul_elem(q, row, p)) % p
                    coords[r] = (coords[r] - tmul_elem(q, co, p)) % p
            if v > 0:
                rows.append(tshift(row, d - v))
                coords.append(tshift(co, d - v))
            keep = [r for r in range(len(rows)) if rows[r].any()]
            rows = [rows[r] for r in keep]
            coords = [coords[r] for r in keep]
            self.pivots.append((col, v, row, co))

    def solve(self, target: np.ndarray):
        """Coefficients (m, d) expressing target, or None."""
        t = np.array(target, dtype=np.int64) % self.p
        c = np.zeros((self.m, self.d), dtype=np.int64)
        for col, v, row, co in self.pivots:
            if int(valuations(t[col])) < v:
                return None
            q = tdivx(t[col], v)
            if q.any():
                t = (t - tmul_elem(q, row, self.p)) % self.p
                c = (c + tmul_elem(q, co, self.p)) % self.p
        return c if not t.any() else None


@dataclass
class _Entry:
    gen: np.ndarray  # (n, d)
    poly: np.ndarray  # (deg + 1, d)
    seq: np.ndarray  # (len, n, d)


@dataclass
class SubmoduleTable:
    """Per leading-zero count k: at most n generators with their companions."""

    n: int
    d: int
    p: int
    slots: dict = field(default_factory=dict)
    membership_calls: int = 0
    method: str = "echelon"
    _cache: dict = field(default_factory=dict, repr=False)

    def entries(self, k: int) -> list[_Entry]:
        return self.slots.get(k, [])

    def generators(self, k: int) -> np.ndarray:
        ents = self.entries(k)
        if not ents:
            return np.zeros((0, self.n, self.d), dtype=np.int64)
        return np.array([e.gen for e in ents])

    def solve(self, k: int, target: np.ndarray):
        """Coefficients over I[k] for target, or None if it is not a member."""
        self.membership_calls += 1
        if self.method == "approximant":
            return _solve_arrays(self.generators(k), target, self.p)
        if not target.any():
            return np.zeros((len(self.entries(k)), self.d), dtype=np.int64)
        ech = self._cache.get(k)
        if ech is None:
            ech = self._cache[k] = ModuleEchelon(self.generators(k), self.p)
        return ech.solve(target)

    def contains(self, k: int, target: np.ndarray) -> bool:
        return self.solve(k, target) is not None


def submodule_insert_and_reduce(T: SubmoduleTable, k: int, new_gen, new_poly, new_seq) -> SubmoduleTable:
    """Append a non-member generator to I[k], dropping a redundant old one if |I[k]| > n.

    The redundant generator is the lowest-indexed one that carries a unit
    constant coefficient in some relation of the approximant basis.
    Mutates and returns ``T``.
    """
    gen = _vec_array(new_gen) % T.p
    poly = np.array(new_poly.coeffs if isinstance(new_poly, AnnPoly) else new_poly, dtype=np.int64)
    seq = np.array(new_seq.terms if isinstance(new_seq, PartialSequence) else new_seq, dtype=np.int64)
    ents = list(T.entries(k))
    if not gen.any():
        raise ContractError("the zero vector is already in every submodule")
    if ents:
        gens = np.array([e.gen for e in ents] + [gen])
        B = relation_basis(gens, T.p)
        m = len(ents)
        const = B[0]
        if const[:, m].any():
            raise ContractError("inserted generator already belongs to the submodule")
        ents.append(_Entry(gen, poly, seq))
        if len(ents) > T.n:
            cols = np.flatnonzero(const[:, :m].any(axis=0))
            if cols.size == 0:
                raise ContractError(f"cannot reduce {len(ents)} generators in A^{T.n}")
            ents.pop(int(cols[0]))
    else:
        ents.append(_Entry(gen, poly, seq))
    T.slots[k] = ents
    T._cache.pop(k, None)
    return T


@dataclass
class KurakinResult:
    """P_i (leading coefficient x^i) for i < d plus counters."""

    polys: list[AnnPoly]
    iterations: int = 0
    membership_calls: int = 0

    def degrees(self) -> list[int]:
        return [P.degree for P in self.polys]


def first_nonzero(seq: np.ndarray) -> int | None:
    """Index of the first nonzero term of an (L, n, d) array, or None."""
    nz = np.flatnonzero(seq.reshape(seq.shape[0], -1).any(axis=1))
    return int(nz[0]) if nz.size else None


class _State:
    __slots__ = ("poly", "seq", "done")

    def __init__(self, poly, seq, done=False):
        self.poly = poly
        self.seq = seq
        self.done = done

    def scaled(self, m: int) -> "_State":
        return _State(tshift(self.poly, m), tshift(self.seq, m), self.done)


class _Engine:
    """State shared by the full and the lazy algorithm."""

    def __init__(self, S: PartialSequence, d: int, membership: str = "echelon"):
        if membership not in ("echelon", "approximant"):
            raise ParameterError(f"unknown membership method {membership!r}")
        self.S = S.terms
        self.e, self.n, self.d = S.terms.shape
        self.p = S.p
        self.table = SubmoduleTable(self.n, self.d, self.p, method=membership)
        self.iterations = 0

    def initial(self, i: int) -> _State:
        poly = np.zeros((1, self.d), dtype=np.int64)
        poly[0] = tshift(np.eye(1, self.d, 0, dtype=np.int64)[0], i)
        return _State(poly, tshift(self.S, i))

    def record_if_new(self, st: _State):
        """End-of-step table update for one tracked state."""
        if st.done:
            return
        k = first_nonzero(st.seq)
        if k is None:
            st.done = True
            return
        if not self.table.contains(k, st.seq[k]):
            submodule_insert_and_reduce(self.table, k, st.seq[k], st.poly, st.seq)

    def shift(self, st: _State):
        st.poly = np.concatenate([np.zeros((1, self.d), dtype=np.int64), st.poly])
        st.seq = st.seq[1:]

    def reduce_once(self, st: _State, k: int, c: np.ndarray):
        p = self.p
        L = st.seq.shape[0]
        for cj, ent in zip(c, self.table.entries(k)):
            if not cj.any():
                continue
            st.seq = (st.seq - tmul_elem(cj, ent.seq[:L], p)) % p
            deg = ent.poly.shape[0]
            st.poly[:deg] = (st.poly[:deg] - tmul_elem(cj, ent.poly, p)) % p
        self.iterations += 1

    def finish(self, st: _State) -> AnnPoly:
        poly = st.poly
        if not st.done:
            poly = np.concatenate([np.zeros((1, self.d), dtype=np.int64), poly])
        return AnnPoly(poly, self.d, self.p)


def kurakin_annihilator(S: PartialSequence, d: int | None = None, membership: str = "echelon") -> KurakinResult:
    """Minimal canceling polynomials P_0..P_{d-1} of S (lc(P_i) = x^i).

    ``membership`` selects how I[k] membership is decided: "echelon" keeps a
    cached Howell-type form per k, "approximant" recomputes a Popov
    approximant basis of [I[k] | target] at every test.  Both give valid
    coefficients; the outputs may differ by the choice of combination but
    generate the same ideal.
    """
    if d is None:
        d = S.d
    if d != S.d:
        raise ParameterError("d does not match the sequence")
    if S.e < 1:
        raise ParameterError("need at least one term")
    eng = _Engine(S, d, membership)
    states = [eng.initial(i) for i in range(d)]
    for st in states:
        eng.record_if_new(st)
    for _ in range(1, S.e):
        for st in states:
            if st.done:
                continue
            eng.shift(st)
            while True:
                k = first_nonzero(st.seq)
                if k is None:
                    st.done = True
                    break
                c = eng.table.solve(k, st.seq[k])
                if c is None:
                    break
                eng.reduce_once(st, k, c)
        for st in states:
            eng.record_if_new(st)
    polys = [eng.finish(st) for st in states]
    return KurakinResult(polys, eng.iterations, eng.table.membership_calls)


def minimal_valuation(v: np.ndarray) -> int:
    """Smallest valuation among the entries of a VecA array (d if zero)."""
    return int(valuations(v).min())
