"""Lazy Kurakin: only track the monomials x^i that can matter.

The set U of tracked exponents starts as [0].  A monomial x^{i'} that is
not tracked behaves like x^{i'-i} times the state of the largest tracked
i < i'.  During every subiteration of a tracked i, the smallest i' in the
gap after i for which that stops being true is added to U, with state
x^{i'-i} times the current state of i:

* u2: multiplying the current sequence by x^{i'-i} changes its number of
  leading zeros;
* u3: the current leading term is not in I[k], but its x^{i'-i} multiple is.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .kurakin import _Engine, _solve_arrays, _State, first_nonzero, minimal_valuation
from .ring import ParameterError, tshift
from .sequences import AnnPoly, PartialSequence


def check_u2(seq, i: int, i_prime: int, d: int | None = None) -> bool:
    """Does x^{i'-i} * seq start at a later index than seq?

    ``seq`` is an (L, n, d) array or a PartialSequence; a zero sequence
    never triggers the condition.
    """
    arr = seq.terms if isinstance(seq, PartialSequence) else np.asarray(seq)
    d = arr.shape[-1] if d is None else d
    if i_prime <= i:
        raise ParameterError("the candidate must exceed the tracked exponent")
    k = first_nonzero(arr)
    if k is None:
        return False
    return i_prime - i >= d - minimal_valuation(arr[k])


def _u2_candidate(seq_k: np.ndarray, i: int, d: int) -> int:
    return i + d - minimal_valuation(seq_k)


def find_min_useful_u3(gens, s_k, i: int, d: int | None = None, p: int = 9001, upper: int | None = None):
    """Least i' in (i, upper) with x^{i'-i} s_k in the span of gens, or None.

    Membership of x^m s_k is monotone in m, so a binary search needs
    O(log d) membership tests.  ``upper`` defaults to d.
    """
    s_k = np.asarray(s_k, dtype=np.int64)
    d = s_k.shape[-1] if d is None else d
    g = np.asarray(gens, dtype=np.int64).reshape((-1,) + s_k.shape)
    upper = d if upper is None else min(upper, d)
    return _binary_search(lambda m: _solve_arrays(g, tshift(s_k, m), p) is not None, i, upper)


def _binary_search(member, i: int, upper: int):
    lo, hi = 1, upper - i - 1  # candidate shifts m = i' - i
    if hi < lo or not member(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if member(mid):
            hi = mid
        else:
            lo = mid + 1
    return i + lo


@dataclass
class LazyResult:
    """Polynomials for the tracked exponents, aligned with ``useful``."""

    polys: list[AnnPoly]
    useful: tuple[int, ...]
    iterations: int = 0
    membership_calls: int = 0

    @property
    def dstar(self) -> int:
        return len(self.useful)

    def expanded(self) -> list[AnnPoly]:
        """All d polynomials, filling the gaps with x^{i - i1} P_{i1}."""
        d = self.polys[0].d
        out = []
        for i in range(d):
            j = bisect.bisect_right(self.useful, i) - 1
            base = self.polys[j]
            out.append(AnnPoly(tshift(base.coeffs, i - self.useful[j]), d, base.p))
        return out


def lazy_kurakin_annihilator(S: PartialSequence, d: int | None = None, membership: str = "echelon") -> LazyResult:
    """Lazy variant of :func:`~trunclrs.kurakin.kurakin_annihilator`; see the module notes."""
    if d is None:
        d = S.d
    if d != S.d:
        raise ParameterError("d does not match the sequence")
    if S.e < 1:
        raise ParameterError("need at least one term")
    eng = _Engine(S, d, membership)
    U: list[int] = [0]
    states: dict[int, _State] = {0: eng.initial(0)}

    def gap_end(i: int) -> int:
        pos = bisect.bisect_right(U, i)
        return U[pos] if pos < len(U) else d

    def adopt(i: int, cand: int | None, st: _State) -> bool:
        if cand is None or cand >= gap_end(i):
            return False
        bisect.insort(U, cand)
        states[cand] = st.scaled(cand - i)
        return True

    def u2_only(i: int, st: _State):
        k = first_nonzero(st.seq)
        if k is not None:
            adopt(i, _u2_candidate(st.seq[k], i, d), st)

    # step 0: each newly tracked monomial gets its own initial pass
    pos = 0
    while pos < len(U):
        i = U[pos]
        u2_only(i, states[i])
        eng.record_if_new(states[i])
        pos += 1

    for _ in range(1, S.e):
        fresh: set[int] = set()
        pos = 0
        while pos < len(U):
            i = U[pos]
            st = states[i]
            pos += 1
            if st.done:
                continue
            if i not in fresh:
                eng.shift(st)
            while True:
                k = first_nonzero(st.seq)
                if k is None:
                    st.done = True
                    break
                lead = st.seq[k]
                c = eng.table.solve(k, lead)
                u2 = _u2_candidate(lead, i, d)
                cand = None
                if c is None:
                    top = min(u2, gap_end(i))

                    def member(m, k=k, lead=lead):
                        return eng.table.solve(k, tshift(lead, m)) is not None

                    cand = _binary_search(member, i, top)
                if cand is None:
                    cand = u2
                if adopt(i, cand, st):
                    fresh.add(cand)
                if c is None:
                    break
                eng.reduce_once(st, k, c)
        for i in U:
            eng.record_if_new(states[i])

    polys = [eng.finish(states[i]) for i in U]
    return LazyResult(polys, tuple(U), eng.iterations, eng.table.membership_calls)
