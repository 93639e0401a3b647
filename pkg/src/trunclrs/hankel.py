"""Annihilators from the left kernel of a block-Hankel matrix.

For a sequence with 2e terms, H has rows i = 0..e and block columns
j = 0..e-1 with block (i, j) equal to S_{i+j}.  A row vector p over A
with p H = 0 is exactly a canceler p_0 + ... + p_e y^e, and lifting H to
F_p[x] turns that kernel into the approximant module App_d(F) reduced
mod x^d.

The compressed variant multiplies F on the right by a random constant
matrix C with r = mu columns first, so the approximant basis is computed
for a square mu x mu matrix instead of a wide mu x (e n) one.  It is a
Monte Carlo algorithm: App_d(F) is always contained in App_d(F C), and
the two agree with probability at least 1 - mu / kappa.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import fplinalg
from .polymat import ApproximantBasis, PolyMatrix, pm_basis, popov_normalize
from .ring import ParameterError
from .sequences import AnnPoly, PartialSequence

_FLOAT_EXACT = 1 << 53


@dataclass(frozen=True)
class BlockHankel:
    """mu x (e n) block-Hankel matrix over F_p[x] with block (i, j) = F_{i+j}.

    ``generators`` has shape (mu + e - 1, n, d): generator k is a row of n
    polynomials of degree < d.
    """

    generators: np.ndarray
    mu: int
    e: int
    p: int

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=np.int64)
        if g.ndim != 3:
            raise ParameterError("generators must have shape (mu + e - 1, n, d)")
        if self.mu < 1 or self.e < 1:
            raise ParameterError("need mu >= 1 and e >= 1")
        if g.shape[0] != self.mu + self.e - 1:
            raise ParameterError(f"expected {self.mu + self.e - 1} generators, got {g.shape[0]}")
        object.__setattr__(self, "generators", g % self.p)

    @property
    def n(self) -> int:
        return self.generators.shape[1]

    @property
    def d(self) -> int:
        return self.generators.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.mu, self.e * self.n

    def materialize(self) -> PolyMatrix:
        idx = np.arange(self.mu)[:, None] + np.arange(self.e)[None, :]
        blocks = self.generators[idx]  # (mu, e, n, d)
        coeffs = np.moveaxis(blocks, -1, 0).reshape(self.d, self.mu, self.e * self.n)
        return PolyMatrix(coeffs, self.p)


def build_hankel(S: PartialSequence, e: int) -> BlockHankel:
    """H_{S,e}: (e + 1) x (e n), built from the first 2e terms of S."""
    if e < 1:
        raise ParameterError("e must be positive")
    if S.e < 2 * e:
        raise ParameterError(f"H_(S,{e}) needs {2 * e} terms, the sequence has {S.e}")
    return BlockHankel(S.terms[: 2 * e], e + 1, e, S.p)


def structured_right_multiply(H: BlockHankel, C: np.ndarray) -> PolyMatrix:
    """F C for a constant (e n) x r matrix C, without forming F.

    Row i of F C is sum_j F_{i+j} C_j where C_j is the j-th n-row block of
    C: a correlation of the generator sequence against the weights.  Each
    term is one matmul on a sliding window of the generators, done for all
    x-coefficients at once.
    """
    C = np.asarray(C, dtype=np.int64)
    if C.ndim != 2 or C.shape[0] != H.e * H.n:
        raise ParameterError(f"C must have {H.e * H.n} rows, got shape {C.shape}")
    p, mu, n, d = H.p, H.mu, H.n, H.d
    r = C.shape[1]
    Cb = (C % p).reshape(H.e, n, r)
    # (mu + e - 1, d, n): a window of mu generators is one contiguous (mu d) x n block
    G = np.ascontiguousarray(np.swapaxes(H.generators, 1, 2))
    bound = n * (p - 1) ** 2
    if bound + p >= _FLOAT_EXACT:
        out = np.zeros((mu * d, r), dtype=np.int64)
        for j in range(H.e):
            out = (out + fplinalg.matmul_mod(G[j : j + mu].reshape(mu * d, n), Cb[j], p)) % p
    else:
        Gf = G.astype(np.float64)
        Cf = Cb.astype(np.float64)
        acc = np.zeros((mu * d, r), dtype=np.float64)
        room = p  # upper bound on the entries of acc
        for j in range(H.e):
            if room + bound >= _FLOAT_EXACT:
                acc = np.fmod(acc, p)
                room = p
            acc += Gf[j : j + mu].reshape(mu * d, n) @ Cf[j]
            room += bound
        out = np.fmod(acc, p).astype(np.int64)
    return PolyMatrix(np.moveaxis(out.reshape(mu, d, r), 1, 0), p)


@dataclass
class CompressionConfig:
    """Parameters of the random compression.

    ``r`` defaults to mu and ``kappa`` to p; entries of C are uniform in
    [0, min(kappa, p)).  Values of r below the (unknown) rank of F are not
    supported.  With ``verify`` the compressed computation is repeated and
    the majority answer kept.
    """

    r: int | None = None
    kappa: int | None = None
    seed: int | None = None
    verify: bool = False
    votes: int = 3
    max_draws: int = 7

    def __post_init__(self):
        if self.kappa is not None and self.kappa < 2:
            raise ParameterError("kappa must be at least 2")
        if self.r is not None and self.r < 1:
            raise ParameterError("r must be positive")
        if self.votes < 1 or self.max_draws < self.votes:
            raise ParameterError("need 1 <= votes <= max_draws")


@dataclass
class HankelReport:
    """What the compressed computation did; seeds allow replaying a draw."""

    compressed: bool
    draws: int = 0
    agreeing: int = 0
    fallback: bool = False
    seeds: list = field(default_factory=list)


def _compression_matrix(rows: int, r: int, kappa: int, p: int, seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seq)
    return rng.integers(0, min(kappa, p), size=(rows, r), dtype=np.int64)


def _basis_key(B: ApproximantBasis):
    c = B.basis.coeffs
    return c.shape, c.tobytes()


def hankel_pm_basis(d: int, H: BlockHankel, w=None, cfg: CompressionConfig | None = None, report: bool = False):
    """w-Popov approximant basis of F at order d through a compressed product.

    Falls through to the uncompressed computation when mu >= e n.  With
    ``report`` the return value is (basis, HankelReport).
    """
    cfg = CompressionConfig() if cfg is None else cfg
    p, mu = H.p, H.mu
    if mu >= H.e * H.n:
        B = popov_normalize(pm_basis(d, H.materialize(), w))
        return (B, HankelReport(False)) if report else B
    r = mu if cfg.r is None else min(cfg.r, H.e * H.n)
    kappa = p if cfg.kappa is None else cfg.kappa
    root = np.random.SeedSequence(cfg.seed)
    info = HankelReport(True, seeds=[root.entropy])

    def draw(child):
        info.draws += 1
        C = _compression_matrix(H.e * H.n, r, kappa, p, child)
        return popov_normalize(pm_basis(d, structured_right_multiply(H, C), w))

    if not cfg.verify:
        B = draw(root.spawn(1)[0])
        info.agreeing = 1
        return (B, info) if report else B

    need = cfg.votes // 2 + 1
    tally: Counter = Counter()
    found: dict = {}
    for child in root.spawn(cfg.max_draws):
        B = draw(child)
        key = _basis_key(B)
        found.setdefault(key, B)
        tally[key] += 1
        if tally[key] >= need:
            info.agreeing = tally[key]
            return (B, info) if report else B
    info.fallback = True
    B = popov_normalize(pm_basis(d, H.materialize(), w))
    return (B, info) if report else B


def _kernel_polys(B: ApproximantBasis, d: int, p: int) -> list[AnnPoly]:
    c = B.basis.coeffs[:d]  # rows mod x^d
    if c.shape[0] < d:
        c = np.concatenate([c, np.zeros((d - c.shape[0],) + c.shape[1:], dtype=np.int64)])
    polys = []
    for row in range(c.shape[1]):
        P = AnnPoly(c[:, row, :].T, d, p)  # (mu, d): coefficient of y^j at row j
        if not P.is_zero():
            polys.append(P)
    return polys


def _default_e(S: PartialSequence, e: int | None) -> int:
    if e is None:
        if S.e < 2:
            raise ParameterError("need at least two terms")
        return S.e // 2
    return e


def hankel_kernel_annihilator(S: PartialSequence, e: int | None = None) -> list[AnnPoly]:
    """Generators over A of ann(S) restricted to degree <= e.

    They generate ann(S) as an ideal once e is at least the order of S.
    ``e`` defaults to len(S) // 2.
    """
    e = _default_e(S, e)
    H = build_hankel(S, e)
    return _kernel_polys(pm_basis(S.d, H.materialize()), S.d, S.p)


def hankel_pm_annihilator(S: PartialSequence, e: int | None = None, cfg: CompressionConfig | None = None) -> list[AnnPoly]:
    """Same as :func:`hankel_kernel_annihilator` through the compressed basis."""
    e = _default_e(S, e)
    H = build_hankel(S, e)
    return _kernel_polys(hankel_pm_basis(S.d, H, None, cfg), S.d, S.p)
