
from trunclrs.bivariate import random_lazard_basis, sequence_from_gb
from trunclrs.sequences import PartialSequence

P = 9001

# filled by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def example_sequence() -> PartialSequence:
    """(1, 1+x, 1, 1+x) over F_9001[x]/x^2."""
    return PartialSequence.from_scalars([1, [1, 1], 1, [1, 1]], 2, P)


def fibonacci(d: int, e: int) -> PartialSequence:
    vals = [1, 1]
    while len(vals) < e:
        vals.append(vals[-1] + vals[-2])
    return PartialSequence.from_scalars([v % P for v in vals[:e]], d, P)


def lazard_instance(rng, d_max=3, delta_max=6, n_max=2, seed=None):
    """Random (G, S) with e = 2 delta terms and S canceled by G."""
    d = int(rng.integers(1, d_max + 1))
    delta = int(rng.integers(1, delta_max + 1))
    n = int(rng.integers(1, n_max + 1))
    t = int(rng.integers(1, min(d, delta) + 1))
    s = int(rng.integers(0, 2**31)) if seed is None else seed
    G = random_lazard_basis(d, delta, t, seed=s)
    return G, sequence_from_gb(G, n, 2 * delta, seed=s + 1)
