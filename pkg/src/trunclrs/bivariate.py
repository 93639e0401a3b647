"""Bivariate view of annihilators: A[y] embedded in F_p[alpha, beta].

The map phi sends x to alpha and y to beta.  Ideals are compared through
their lexicographic Groebner bases with alpha < beta, which (because alpha^d
always belongs to the ideal) have the Lazard shape

    g_i = alpha^{d_i} * ghat_i,  ghat_i monic of beta-degree e_i,

with 0 = d_0 < ... < d_t and e_0 > ... > e_t = 0.  The staircase of such an
ideal is described by its heights r_a = min{b : alpha^a beta^b is a leading
term}, a < d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fplinalg
from .ring import (
    DEFAULT_PRIME,
    ContractError,
    ParameterError,
    check_prime,
    tdivx,
    tinv,
    tmul,
    tshift,
    valuations,
)
from .sequences import AnnPoly, PartialSequence

# staircase_oracle refuses systems with more entries than this
ORACLE_MAX_ENTRIES = 4_000_000


def _trim2(g: np.ndarray) -> np.ndarray:
    if not g.any():
        return np.zeros((0, 0), dtype=np.int64)
    rows = np.flatnonzero(g.any(axis=1))
    cols = np.flatnonzero(g.any(axis=0))
    return g[: rows[-1] + 1, : cols[-1] + 1]


def _bimul(a: np.ndarray, b: np.ndarray, p: int, alpha_size: int | None = None) -> np.ndarray:
    """Product of two coefficient grids, optionally truncated in alpha."""
    if a.size == 0 or b.size == 0:
        return np.zeros((0, 0), dtype=np.int64)
    na = a.shape[0] + b.shape[0] - 1
    if alpha_size is not None:
        na = min(na, alpha_size)
    out = np.zeros((max(na, 0), a.shape[1] + b.shape[1] - 1), dtype=np.int64)
    for i in np.flatnonzero(a.any(axis=1)):
        for k in np.flatnonzero(b.any(axis=1)):
            if i + k >= na:
                continue
            out[i + k] = (out[i + k] + np.convolve(a[i], b[k])) % p
    return out


class BiPoly:
    """Polynomial in alpha and beta over F_p; ``grid[a, b]`` multiplies alpha^a beta^b."""

    __slots__ = ("grid", "p")

    def __init__(self, grid, p: int = DEFAULT_PRIME):
        g = np.asarray(grid, dtype=np.int64)
        if g.ndim != 2:
            raise ParameterError("BiPoly grid must be two-dimensional")
        g = _trim2(g % check_prime(p))
        g.flags.writeable = False
        self.grid = g
        self.p = p

    @classmethod
    def from_terms(cls, terms, p: int = DEFAULT_PRIME) -> "BiPoly":
        """Build from (alpha_exp, beta_exp, coeff) triples; repeated monomials add up."""
        terms = [(int(a), int(b), int(c)) for a, b, c in terms]
        if not terms:
            return cls(np.zeros((0, 0)), p)
        if min(min(a, b) for a, b, _ in terms) < 0:
            raise ParameterError("negative exponent")
        g = np.zeros((max(a for a, _, _ in terms) + 1, max(b for _, b, _ in terms) + 1), dtype=np.int64)
        for a, b, c in terms:
            g[a, b] = (g[a, b] + c) % p
        return cls(g, p)

    @classmethod
    def monomial(cls, a: int, b: int, p: int = DEFAULT_PRIME) -> "BiPoly":
        return cls.from_terms([(a, b, 1)], p)

    def terms(self) -> list[tuple[int, int, int]]:
        """Nonzero terms in decreasing lex order (beta first)."""
        out = []
        for b in range(self.grid.shape[1] - 1, -1, -1):
            for a in range(self.grid.shape[0] - 1, -1, -1):
                c = int(self.grid[a, b])
                if c:
                    out.append((a, b, c))
        return out

    def is_zero(self) -> bool:
        return self.grid.size == 0

    @property
    def beta_degree(self) -> int:
        return self.grid.shape[1] - 1

    @property
    def alpha_degree(self) -> int:
        return self.grid.shape[0] - 1

    def leading_term(self) -> tuple[int, int]:
        """(a, b) of the lex-largest monomial, beta compared first."""
        if self.is_zero():
            raise ContractError("the zero polynomial has no leading term")
        b = self.beta_degree
        a = int(np.flatnonzero(self.grid[:, b])[-1])
        return a, b

    def leading_coefficient(self) -> int:
        a, b = self.leading_term()
        return int(self.grid[a, b])

    def padded(self, na: int, nb: int) -> np.ndarray:
        """Grid copy of shape (na, nb), truncating or zero-padding."""
        out = np.zeros((na, nb), dtype=np.int64)
        ma, mb = min(na, self.grid.shape[0]), min(nb, self.grid.shape[1])
        out[:ma, :mb] = self.grid[:ma, :mb]
        return out

    def _binary(self, other: "BiPoly", sign: int) -> "BiPoly":
        if self.p != other.p:
            raise ParameterError("different primes")
        na = max(self.grid.shape[0], other.grid.shape[0])
        nb = max(self.grid.shape[1], other.grid.shape[1])
        return BiPoly(self.padded(na, nb) + sign * other.padded(na, nb), self.p)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return BiPoly(-self.grid, self.p)

    def scale(self, c: int) -> "BiPoly":
        return BiPoly(self.grid * (int(c) % self.p), self.p)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        return BiPoly(_bimul(self.grid, other.grid, self.p), self.p)

    def shift(self, a: int, b: int) -> "BiPoly":
        """Multiply by alpha^a beta^b."""
        if self.is_zero():
            return self
        g = np.zeros((self.grid.shape[0] + a, self.grid.shape[1] + b), dtype=np.int64)
        g[a:, b:] = self.grid
        return BiPoly(g, self.p)

    def truncate_alpha(self, n: int) -> "BiPoly":
        """Reduce modulo alpha^n."""
        return BiPoly(self.grid[:n], self.p)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.grid, other.grid)

    def __hash__(self):
        return hash((self.p, self.grid.shape, self.grid.tobytes()))

    def __repr__(self):
        if self.is_zero():
            return "BiPoly(0)"
        parts = []
        for a, b, c in self.terms():
            mono = "*".join(s for s in (f"a^{a}" if a else "", f"b^{b}" if b else "") if s)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "BiPoly(" + " + ".join(parts) + ")"


def phi(P: AnnPoly) -> BiPoly:
    """x -> alpha, y -> beta."""
    return BiPoly(P.coeffs.T, P.p)


def phi_inverse(f: BiPoly, d: int) -> AnnPoly:
    """Read a BiPoly back as an element of A[y], dropping alpha^d and beyond."""
    g = f.padded(d, max(f.grid.shape[1], 0))
    return AnnPoly(g.T, d, f.p)


def phibar_generators(gens: list[AnnPoly], d: int | None = None) -> list[BiPoly]:
    """Images of the generators followed by alpha^d."""
    if d is None:
        if not gens:
            raise ParameterError("cannot infer d from an empty generator list")
        d = gens[0].d
    p = gens[0].p if gens else DEFAULT_PRIME
    return [phi(P) for P in gens] + [BiPoly.monomial(d, 0, p)]


# ---------------------------------------------------------------------------
# staircases


@dataclass(frozen=True)
class Staircase:
    """Monomials alpha^a beta^b (a < d) with b < heights[a]."""

    d: int
    heights: tuple[int, ...]

    def __post_init__(self):
        h = tuple(int(v) for v in self.heights)
        if len(h) != self.d:
            raise ParameterError("need one height per alpha exponent")
        if any(v < 0 for v in h) or any(h[i] < h[i + 1] for i in range(len(h) - 1)):
            raise ContractError(f"heights {h} are not a nonincreasing ladder")
        object.__setattr__(self, "heights", h)

    @classmethod
    def from_corners(cls, d: int, corners) -> "Staircase":
        """From leading exponents (d_i, e_i) of a minimal basis."""
        heights = []
        for a in range(d):
            cands = [e for (da, e) in corners if da <= a]
            if not cands:
                raise ContractError(f"no leading term covers alpha^{a}")
            heights.append(min(cands))
        return cls(d, tuple(heights))

    @property
    def corners(self) -> list[tuple[int, int]]:
        """[(d_0, e_0), ..., (d_t, e_t)] with e_t = 0."""
        out: list[tuple[int, int]] = []
        for a, h in enumerate(self.heights):
            if not out or h != out[-1][1]:
                out.append((a, h))
            if h == 0:
                break
        if out[-1][1] > 0:
            out.append((self.d, 0))
        return out

    @property
    def t(self) -> int:
        return len(self.corners) - 1

    @property
    def D(self) -> int:
        return sum(self.heights)

    @property
    def gaps(self) -> tuple[list[int], list[int]]:
        """(delta_i = d_i - d_{i-1} for i >= 1, eps_i = e_i - e_{i+1} for i < t)."""
        c = self.corners
        return [c[i][0] - c[i - 1][0] for i in range(1, len(c))], [c[i][1] - c[i + 1][1] for i in range(len(c) - 1)]

    def monomials(self) -> list[tuple[int, int]]:
        return [(a, b) for a, h in enumerate(self.heights) for b in range(h)]

    def __contains__(self, mono) -> bool:
        a, b = mono
        return 0 <= a < self.d and 0 <= b < self.heights[a]

    def __str__(self):
        return f"Staircase(d={self.d}, corners={self.corners}, D={self.D})"


# ---------------------------------------------------------------------------
# division


def _divide(f: np.ndarray, basis, p: int) -> np.ndarray:
    """Lex remainder of the grid f by a ladder of (a_i, b_i, grid_i).

    ``basis`` must be sorted by increasing a_i (hence decreasing b_i), each
    grid_i having the single term 1 * alpha^{a_i} beta^{b_i} in its top beta
    column.  f is modified in place and returned; its alpha size is the
    truncation used throughout.
    """
    na = f.shape[0]
    lead_a = [a for a, _, _ in basis]
    for b in range(f.shape[1] - 1, -1, -1):
        col = f[:, b]
        for a in np.flatnonzero(col):
            c = int(col[a])
            if not c:
                continue
            # the ladder element with the largest a_i <= a has the smallest b_i
            i = int(np.searchsorted(lead_a, a, side="right")) - 1
            if i < 0:
                continue
            ga, gb, g = basis[i]
            if gb > b:
                continue
            da, db = a - ga, b - gb
            rows = min(g.shape[0], na - da)
            f[da : da + rows, db : db + g.shape[1]] = (f[da : da + rows, db : db + g.shape[1]] - c * g[:rows]) % p
    return f


class LexGB:
    """A lexicographic Groebner basis in Lazard form.

    ``polys[i]`` has leading term alpha^{d_i} beta^{e_i}; the last entry is
    the pure power alpha^{d_t}.
    """

    def __init__(self, polys: list[BiPoly], d: int, p: int = DEFAULT_PRIME):
        if not polys:
            raise ContractError("a basis needs at least one polynomial")
        polys = [f for f in polys if not f.is_zero()]
        lts = [f.leading_term() for f in polys]
        order = sorted(range(len(polys)), key=lambda i: (-lts[i][1], lts[i][0]))
        polys = [polys[i] for i in order]
        lts = [lts[i] for i in order]
        for i in range(len(lts) - 1):
            if not (lts[i][0] < lts[i + 1][0] and lts[i][1] > lts[i + 1][1]):
                raise ContractError(f"leading terms {lts} do not form a minimal ladder")
        if lts[-1][1] != 0 or lts[0][0] != 0:
            raise ContractError("a ladder must start at alpha^0 and end with a pure alpha power")
        if lts[-1][0] > d:
            raise ContractError("alpha^d must belong to the ideal")
        monic = []
        for f in polys:
            c = f.leading_coefficient()
            monic.append(f if c == 1 else f.scale(pow(c, -1, p)))
        self.polys = tuple(monic)
        self.d = d
        self.p = p
        self.staircase = Staircase.from_corners(d, [(a, b) for a, b in lts])

    @property
    def leading_terms(self) -> list[tuple[int, int]]:
        return [f.leading_term() for f in self.polys]

    @property
    def t(self) -> int:
        return len(self.polys) - 1

    @property
    def d_opt(self) -> int:
        return self.t

    def _ladder(self, alpha_size: int):
        out = []
        for f in self.polys[:-1]:
            a, b = f.leading_term()
            out.append((a, b, f.padded(min(alpha_size, f.grid.shape[0]), f.grid.shape[1])))
        return out

    def normal_form(self, f: BiPoly) -> BiPoly:
        return normal_form(f, self)

    def reduced(self) -> "LexGB":
        """The reduced basis: every tail supported on the staircase."""
        dt = self.polys[-1].leading_term()[0]
        ladder = self._ladder(dt)
        out = []
        for f in self.polys[:-1]:
            a, b = f.leading_term()
            g = f.padded(dt, f.grid.shape[1])
            g[a, b] = 0
            g = _divide(g, ladder, self.p)
            g[a, b] = 1
            out.append(BiPoly(g, self.p))
        out.append(self.polys[-1])
        return LexGB(out, self.d, self.p)

    def lazard_violations(self) -> list[str]:
        """Empty iff the Lazard conditions hold."""
        bad = []
        corners = self.leading_terms
        t = self.t
        dt = corners[-1][0]
        hats = []
        for i, f in enumerate(self.polys):
            di, ei = corners[i]
            g = f.padded(max(f.grid.shape[0], di), ei + 1)
            if g[:di].any():
                bad.append(f"alpha^{di} does not divide g_{i}")
            hat = g[di:]
            top = hat[:, ei]
            if top.size == 0 or top[0] != 1 or top[1:].any():
                bad.append(f"ghat_{i} is not monic of beta-degree {ei}")
            hats.append(hat)
        for i in range(t):
            shift = corners[i + 1][0]
            size = dt - shift
            ladder = []
            for j in range(i + 1, t):
                a, b = corners[j]
                h = self.polys[j].padded(max(self.polys[j].grid.shape[0], shift), b + 1)[shift:]
                ladder.append((a - shift, b, h[:size]))
            rem = _divide(np.array(hats[i][:size], dtype=np.int64), ladder, self.p)
            if rem.any():
                bad.append(f"ghat_{i} is not in the ideal of the later elements")
        return bad

    def is_lazard(self) -> bool:
        return not self.lazard_violations()

    def to_annpolys(self) -> list[AnnPoly]:
        """The elements with alpha-degree < d read back in A[y] (alpha^d drops out)."""
        return [phi_inverse(f, self.d) for f in self.polys if f.leading_term()[0] < self.d]

    def __eq__(self, other):
        if not isinstance(other, LexGB):
            return NotImplemented
        return (self.d, self.p, self.polys) == (other.d, other.p, other.polys)

    def __repr__(self):
        return f"LexGB(d={self.d}, p={self.p}, leading_terms={self.leading_terms})"

    # -- file format -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "t": self.t,
            "polys": [{"terms": [list(tm) for tm in f.terms()]} for f in self.polys],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LexGB":
        try:
            p, d = int(obj["p"]), int(obj["d"])
            polys = [BiPoly.from_terms(rec["terms"], p) for rec in obj["polys"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed basis record: {exc}") from exc
        gb = cls(polys, d, p)
        if "t" in obj and int(obj["t"]) != gb.t:
            raise ParameterError("stored t disagrees with the polynomials")
        return gb

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "LexGB":
        return cls.from_json(json.loads(Path(path).read_text()))


def normal_form(f: BiPoly, G: LexGB) -> BiPoly:
    """Remainder of f by G; supported on the staircase of G."""
    if f.is_zero():
        return f
    dt = G.polys[-1].leading_term()[0]
    g = f.padded(dt, f.grid.shape[1])
    return BiPoly(_divide(g, G._ladder(dt), G.p), G.p)


# ---------------------------------------------------------------------------
# random instances


def random_lazard_basis(d: int, delta: int, t: int, seed=None, p: int = DEFAULT_PRIME, tails: bool = True) -> LexGB:
    """A random basis with e_0 = delta and d_t = d satisfying the Lazard conditions.

    Each ghat_i is built as beta^{eps_i} ghat_{i+1} plus random multiples of
    alpha^{d_j - d_{i+1}} ghat_j (j > i), so the tail inclusion holds by
    construction.  ``tails=False`` drops the random multiples.
    """
    if d < 1 or delta < 1 or not (1 <= t <= min(delta, d)):
        raise ParameterError(f"no staircase with t={t}, delta={delta}, d={d}")
    rng = np.random.default_rng(seed)
    ds = [0] + sorted(int(v) for v in rng.choice(np.arange(1, d), t - 1, replace=False)) + [d]
    es = [delta] + sorted((int(v) for v in rng.choice(np.arange(1, delta), t - 1, replace=False)), reverse=True) + [0]
    hats: list[np.ndarray | None] = [None] * (t + 1)
    hats[t] = np.ones((1, 1), dtype=np.int64)
    for i in range(t - 1, -1, -1):
        room = d - ds[i]  # ghat_i only matters modulo alpha^{d - d_i}
        h = np.zeros((room, es[i] + 1), dtype=np.int64)
        nxt = hats[i + 1]
        ra = min(room, nxt.shape[0])
        eps = es[i] - es[i + 1]
        h[:ra, eps : eps + nxt.shape[1]] = nxt[:ra]
        if tails:
            for j in range(i + 1, t + 1):
                s = ds[j] - ds[i + 1]
                if s >= room or es[i] - es[j] <= 0:
                    continue
                r = rng.integers(0, p, (room - s, es[i] - es[j]))
                prod = _bimul(r, hats[j], p, alpha_size=room - s)
                h[s : s + prod.shape[0], : prod.shape[1]] += prod
            h %= p
        hats[i] = h
    polys = []
    for i in range(t):
        g = np.zeros((d, es[i] + 1), dtype=np.int64)
        g[ds[i] :] = hats[i][: d - ds[i]]
        polys.append(BiPoly(g, p))
    polys.append(BiPoly.monomial(d, 0, p))
    return LexGB(polys, d, p)


def sequence_from_gb(G: LexGB, n: int, e: int, seed=None, values: np.ndarray | None = None) -> PartialSequence:
    """n independent sequences of e terms whose annihilator contains G.

    Coordinate l of S_j carries b_{a,j} = lambda_l(NF(alpha^a beta^j)) at
    x^{d-1-a}, lambda_l a linear form on the quotient given by its values
    on the staircase monomials (random unless ``values`` of shape (n, D) is
    supplied, in staircase monomial order).  The normal forms are produced
    incrementally with the multiplication-by-beta map.
    """
    d, p = G.d, G.p
    sc = G.staircase
    h = np.array(sc.heights, dtype=np.int64)
    R = int(h.max()) if d else 0
    terms = np.zeros((e, n, d), dtype=np.int64)
    if R == 0:
        return PartialSequence(terms, p)
    mask = np.arange(R)[None, :] < h[:, None]
    if values is None:
        lam = np.random.default_rng(seed).integers(0, p, (n, d, R)) * mask
    else:
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (n, sc.D):
            raise ParameterError(f"values must have shape ({n}, {sc.D})")
        lam = np.zeros((n, d, R), dtype=np.int64)
        lam[:, mask] = values % p
    # boundary normal forms NF(alpha^a beta^{h_a}) for the rows that have any
    live = np.flatnonzero(h > 0)
    bnd = np.zeros((d, d, R), dtype=np.int64)
    for a in live:
        nf = normal_form(BiPoly.monomial(int(a), int(h[a]), p), G)
        bnd[a] = nf.padded(d, R)
    state = np.zeros((d, d, R), dtype=np.int64)
    state[live, live, 0] = 1
    for j in range(e):
        b = np.einsum("lxy,sxy->ls", lam, state) % p  # (n, d)
        terms[j, :, ::-1] = b
        carry = np.zeros((d, d), dtype=np.int64)
        carry[:, live] = state[:, live, h[live] - 1]
        nxt = np.zeros_like(state)
        nxt[:, :, 1:] = state[:, :, :-1]
        nxt *= mask[None]
        nxt = (nxt + np.einsum("sa,axy->sxy", carry, bnd)) % p
        state = nxt
    return PartialSequence(terms, p)


# ---------------------------------------------------------------------------
# staircases of explicit generators


def valuation_echelon(polys: list[AnnPoly], d: int | None = None, p: int | None = None):
    """Echelonize the A-module spanned by ``polys`` by descending y-degree.

    Returns a dict gamma -> (v, pivot) where pivot (an AnnPoly of degree
    gamma with coefficient exactly x^v at y^gamma) generates, together with
    the lower pivots, all elements of the span of degree <= gamma.  Degrees
    whose leading-coefficient ideal is zero are absent.
    """
    if not polys:
        return {}
    d = polys[0].d if d is None else d
    p = polys[0].p if p is None else p
    L = max(P.degree for P in polys) + 1
    if L <= 0:
        return {}
    rows = np.zeros((len(polys), L, d), dtype=np.int64)
    for i, P in enumerate(polys):
        rows[i, : P.degree + 1] = P.coeffs
    out = {}
    for gamma in range(L - 1, -1, -1):
        if rows.shape[0] == 0:
            break
        vals = valuations(rows[:, gamma])
        k = int(np.argmin(vals))
        v = int(vals[k])
        if v >= d:
            rows = rows[:, :gamma]
            continue
        piv = rows[k, : gamma + 1].copy()
        unit = tinv(tdivx(piv[gamma], v), p)
        piv = tmul(piv, unit[None, :], p)
        rest = np.delete(rows, k, axis=0)[:, : gamma + 1]
        hit = np.flatnonzero(rest[:, gamma].any(axis=1))
        if hit.size:
            q = tdivx(rest[hit, gamma], v)  # (h, d)
            rest[hit] = (rest[hit] - tmul(q[:, None, :], piv[None], p)) % p
        if v > 0:
            rest = np.concatenate([rest, tshift(piv, d - v)[None]], axis=0)
        out[gamma] = (v, AnnPoly(piv, d, p))
        rows = rest[:, :gamma]
        rows = rows[rows.any(axis=(1, 2))]
    return out


def _heights_from_echelon(ech: dict, d: int) -> tuple[int, ...]:
    heights = []
    for a in range(d):
        cands = [g for g, (v, _) in ech.items() if v <= a]
        if not cands:
            raise ContractError(f"no generator has a leading coefficient of valuation <= {a}")
        heights.append(min(cands))
    return tuple(heights)


def staircase_of(polys: list[AnnPoly], d: int | None = None) -> Staircase:
    """Staircase of the ideal generated by polys and alpha^d.

    The polys must either form a Groebner basis or span (over A) every
    element of the ideal up to their maximal degree, which is the case for
    Kurakin outputs and for Hankel kernel bases.
    """
    if not polys:
        raise ContractError("empty generator list")
    d = polys[0].d if d is None else d
    return Staircase(d, _heights_from_echelon(valuation_echelon(polys, d), d))


def minimal_gb_extract(cancelers: list[AnnPoly], d: int | None = None) -> LexGB:
    """Reduced lex basis (Lazard form) of the ideal generated by cancelers and alpha^d.

    Same precondition as :func:`staircase_of`.
    """
    if not cancelers:
        raise ContractError("empty generator list")
    d = cancelers[0].d if d is None else d
    p = cancelers[0].p
    ech = valuation_echelon(cancelers, d)
    sc = Staircase(d, _heights_from_echelon(ech, d))
    polys = []
    for a, b in sc.corners[:-1]:
        v, piv = ech[b]
        if v != a:
            raise ContractError("echelon pivots disagree with the staircase")
        polys.append(phi(piv))
    polys.append(BiPoly.monomial(sc.corners[-1][0], 0, p))
    return LexGB(polys, d, p).reduced()


# ---------------------------------------------------------------------------
# brute-force ground truth


def _toeplitz_blocks(S: np.ndarray) -> np.ndarray:
    """T[k, l] is the d x d matrix of multiplication by S[k, l] in A."""
    e, n, d = S.shape
    idx = np.arange(d)[:, None] - np.arange(d)[None, :]
    T = S[..., np.clip(idx, 0, d - 1)]
    return np.where(idx >= 0, T, 0)


def staircase_oracle(S: PartialSequence, d: int | None = None) -> Staircase:
    """Staircase of ann(S) by exhaustive F_p linear algebra.

    With eh = len(S) // 2, heights[a] is the least gamma <= eh for which
    some P = x^a y^gamma + (lower) satisfies sum_j P_j S_{k+j} = 0 for all
    k < eh.
    """
    d = S.d if d is None else d
    if d != S.d:
        raise ParameterError("d does not match the sequence")
    eh = S.e // 2
    n, p = S.n, S.p
    rows = eh * n * d
    if rows * (eh * d + 1) > ORACLE_MAX_ENTRIES:
        raise ParameterError("instance too large for the brute-force oracle")
    terms = S.terms
    T = _toeplitz_blocks(terms)  # (e, n, d, d)
    heights = []
    upper = eh
    for a in range(d):
        found = None
        for gamma in range(0, upper + 1):
            # unknowns p_0..p_{gamma-1}, each d coefficients
            rhs = (-tshift(terms[gamma : gamma + eh], a)).reshape(-1) % p
            if gamma == 0:
                ok = not rhs.any()
            else:
                M = np.zeros((eh, n, d, gamma, d), dtype=np.int64)
                for j in range(gamma):
                    M[:, :, :, j, :] = T[j : j + eh]
                ok = fplinalg.solve(M.reshape(rows, gamma * d), rhs, p) is not None
            if ok:
                found = gamma
                break
        if found is None:
            raise ParameterError(f"{S.e} terms do not determine the staircase (alpha^{a} row)")
        heights.append(found)
        upper = found
    return Staircase(d, tuple(heights))


# ---------------------------------------------------------------------------
# Pade characterization


def pade_remainder(P: AnnPoly, S: PartialSequence) -> np.ndarray:
    """Coefficients of P * G mod y^{2e} as a (2e, n, d) array indexed by y-degree.

    G = sum_j S_j y^{2e-1-j} is built from the first 2e terms, e = len(S) // 2.
    """
    eh = S.e // 2
    if P.p != S.p or P.d != S.d:
        raise ParameterError("polynomial and sequence live over different rings")
    E = 2 * eh
    G = S.terms[:E][::-1]
    out = np.zeros((E, S.n, S.d), dtype=np.int64)
    for i in range(min(P.degree + 1, E)):
        if P.coeffs[i].any():
            out[i:] += tmul(P.coeffs[i], G[: E - i], S.p)
    return out % S.p


def pade_check(P: AnnPoly, S: PartialSequence) -> bool:
    """True iff P * G = q mod y^{2e} with deg q < e, for deg P <= e."""
    eh = S.e // 2
    if P.degree > eh:
        raise ParameterError(f"degree {P.degree} exceeds e = {eh}")
    return not pade_remainder(P, S)[eh:].any()
