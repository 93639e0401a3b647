"""Instance generation, algorithm dispatch and timing tables."""

from __future__ import annotations

import itertools
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .bivariate import LexGB, Staircase, minimal_gb_extract, random_lazard_basis, sequence_from_gb
from .hankel import CompressionConfig, build_hankel, hankel_kernel_annihilator, hankel_pm_annihilator
from .kurakin import kurakin_annihilator
from .lazy import lazy_kurakin_annihilator
from .ring import DEFAULT_PRIME, ParameterError
from .sequences import AnnPoly, PartialSequence

ALGORITHMS = ("kurakin", "lazy", "pmbasis", "hankel-pm")
CSV_COLUMNS = ("n", "d", "delta", "d_opt", "D_ratio", "K", "LK", "dstar", "PMB", "HPM")
_COLUMN_OF = {"kurakin": "K", "lazy": "LK", "pmbasis": "PMB", "hankel-pm": "HPM"}


def derive_seeds(seed: int | None, count: int) -> list[int]:
    """Independent child seeds from one root seed (fresh entropy when seed is None)."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint32)]


@dataclass
class RunConfig:
    p: int = DEFAULT_PRIME
    d: int = 4
    delta: int = 4
    n: int = 1
    e: int | None = None
    t: int = 1
    algorithms: tuple[str, ...] = ALGORITHMS
    seed: int | None = 0
    trials: int = 3
    fmt: str = "json"
    kappa: int | None = None
    verify: bool = False

    def __post_init__(self):
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ParameterError(f"unknown algorithm(s) {unknown}; choose from {ALGORITHMS}")
        if self.e is None:
            self.e = 2 * self.delta
        if self.trials < 1:
            raise ParameterError("trials must be positive")

    def compression(self, seed: int | None) -> CompressionConfig:
        return CompressionConfig(kappa=self.kappa, seed=seed, verify=self.verify)


@dataclass
class AlgoOutcome:
    polys: list[AnnPoly]
    seconds: float
    dstar: int | None = None
    iterations: int | None = None
    membership_calls: int | None = None


def run_algorithm(name: str, S: PartialSequence, cfg: CompressionConfig | None = None) -> AlgoOutcome:
    """Annihilator generators of S by one algorithm, with its wall time."""
    start = time.perf_counter()
    if name == "kurakin":
        res = kurakin_annihilator(S)
        out = AlgoOutcome(res.polys, 0.0, iterations=res.iterations, membership_calls=res.membership_calls)
    elif name == "lazy":
        res = lazy_kurakin_annihilator(S)
        out = AlgoOutcome(res.polys, 0.0, res.dstar, res.iterations, res.membership_calls)
    elif name == "pmbasis":
        out = AlgoOutcome(hankel_kernel_annihilator(S), 0.0)
    elif name == "hankel-pm":
        out = AlgoOutcome(hankel_pm_annihilator(S, cfg=cfg), 0.0)
    else:
        raise ParameterError(f"unknown algorithm {name!r}")
    out.seconds = time.perf_counter() - start
    return out


@dataclass
class Instance:
    gb: LexGB
    sequence: PartialSequence
    seeds: tuple[int, int]


def generate_instance(config: RunConfig) -> Instance:
    if not 1 <= config.t <= min(config.delta, config.d):
        raise ParameterError(f"need 1 <= t <= min(delta, d), got t={config.t}")
    gb_seed, seq_seed = derive_seeds(config.seed, 2)
    gb = random_lazard_basis(config.d, config.delta, config.t, seed=gb_seed, p=config.p)
    S = sequence_from_gb(gb, config.n, config.e, seed=seq_seed)
    return Instance(gb, S, (gb_seed, seq_seed))


@dataclass
class RunReport:
    seed: int | None
    times: dict[str, float] = field(default_factory=dict)
    staircases: dict[str, Staircase] = field(default_factory=dict)
    bases: dict[str, LexGB] = field(default_factory=dict)
    dstar: int | None = None
    iterations: dict[str, int] = field(default_factory=dict)
    agree: bool | None = None

    @property
    def reference(self) -> LexGB:
        return next(iter(self.bases.values()))

    @property
    def d_opt(self) -> int:
        return self.reference.d_opt

    @property
    def D(self) -> int:
        return self.reference.staircase.D

    def to_json(self) -> dict:
        ref = self.reference
        out = {
            "seed": self.seed,
            "staircase": [list(c) for c in ref.staircase.corners],
            "D": self.D,
            "d_opt": self.d_opt,
            "dstar": self.dstar,
            "agree": self.agree,
            "algorithms": {},
        }
        for name, st in self.staircases.items():
            out["algorithms"][name] = {
                "seconds": self.times[name],
                "staircase": [list(c) for c in st.corners],
                "basis": [[list(t) for t in f.terms()] for f in self.bases[name].polys],
            }
            if name in self.iterations:
                out["algorithms"][name]["iterations"] = self.iterations[name]
        return out


def annihilate(S: PartialSequence, algorithms, seed: int | None = 0, kappa: int | None = None, verify: bool = False) -> RunReport:
    """Run the chosen algorithms on S and compare their staircases.

    An odd trailing term is dropped so that every algorithm sees the same
    2 floor(e / 2) terms as the Hankel-based ones.
    """
    if S.e % 2:
        S = S[: S.e - 1]
    report = RunReport(seed)
    (hpm_seed,) = derive_seeds(seed, 1)
    cfg = CompressionConfig(kappa=kappa, seed=hpm_seed, verify=verify)
    for name in algorithms:
        out = run_algorithm(name, S, cfg)
        gb = minimal_gb_extract(out.polys, S.d)
        report.times[name] = out.seconds
        report.bases[name] = gb
        report.staircases[name] = gb.staircase
        if out.iterations is not None:
            report.iterations[name] = out.iterations
        if name == "lazy":
            report.dstar = out.dstar
    if len(report.staircases) >= 2:
        report.agree = len({st.heights for st in report.staircases.values()}) == 1
    return report


@dataclass
class BenchRow:
    n: int
    d: int
    delta: int
    d_opt: int
    D_ratio: float
    times: dict[str, float | None]
    dstar: int | None
    agree: bool | None

    def cells(self) -> list[str]:
        def t(col):
            v = self.times.get(col)
            return "NA" if v is None else f"{v:.4f}"

        return [
            str(self.n),
            str(self.d),
            str(self.delta),
            str(self.d_opt),
            f"{self.D_ratio:.3f}",
            t("K"),
            t("LK"),
            "NA" if self.dstar is None else str(self.dstar),
            t("PMB"),
            t("HPM"),
        ]


def bench_point(config: RunConfig) -> BenchRow:
    """Median wall time over ``config.trials`` runs of each selected algorithm."""
    inst = generate_instance(config)
    S = inst.sequence
    compressed = build_hankel(S, S.e // 2).mu < (S.e // 2) * S.n
    samples: dict[str, list[float]] = {}
    staircases = set()
    dstar = None
    trial_seeds = derive_seeds(config.seed, config.trials + 2)[2:]
    for trial in range(config.trials):
        for name in config.algorithms:
            if name == "hankel-pm" and not compressed:
                continue
            out = run_algorithm(name, S, config.compression(trial_seeds[trial]))
            samples.setdefault(_COLUMN_OF[name], []).append(out.seconds)
            if trial == 0:
                staircases.add(minimal_gb_extract(out.polys, S.d).staircase.heights)
            if name == "lazy":
                dstar = out.dstar
    times = {col: (statistics.median(v) if v else None) for col, v in samples.items()}
    sc = inst.gb.staircase
    agree = len(staircases) == 1 if staircases else None
    if len(staircases) == 1:
        sc = Staircase(config.d, next(iter(staircases)))
    return BenchRow(
        config.n,
        config.d,
        config.delta,
        sc.t,
        sc.D / (config.d * config.delta),
        times,
        dstar,
        agree if len(samples) >= 2 else None,
    )


def bench(points: list[dict], base: RunConfig) -> list[BenchRow]:
    rows = []
    for pt in points:
        cfg = RunConfig(**{**base.__dict__, **pt, "e": None})
        rows.append(bench_point(cfg))
    return rows


def grid(ns, ds, deltas) -> list[dict]:
    return [{"n": n, "d": d, "delta": delta} for n, d, delta in itertools.product(ns, ds, deltas)]
