import numpy as np
import pytest

from helpers import fibonacci, lazard_instance, example_sequence
from trunclrs.bivariate import staircase_of, staircase_oracle
from trunclrs.kurakin import ModuleEchelon, kurakin_annihilator
from trunclrs.lazy import check_u2, find_min_useful_u3, lazy_kurakin_annihilator
from trunclrs.ring import ParameterError, TruncPoly, tshift
from trunclrs.sequences import AnnPoly, PartialSequence, cancels

p = 9001


def test_check_u2_examples():
    # first nonzero term has valuation 1 over x^3: a shift by 2 kills it
    seq = np.array([[[0, 0, 0]], [[0, 5, 1]]])
    assert not check_u2(seq, 0, 1)
    assert check_u2(seq, 0, 2)
    assert check_u2(seq, 1, 4)
    unit = np.array([[[1, 0, 0]]])
    assert not check_u2(unit, 0, 2)
    assert check_u2(unit, 0, 3)


def test_check_u2_zero_sequence_and_bad_candidate():
    assert not check_u2(np.zeros((3, 1, 2), dtype=np.int64), 0, 1)
    with pytest.raises(ParameterError):
        check_u2(np.ones((1, 1, 2), dtype=np.int64), 2, 2)


def test_find_min_useful_u3_examples():
    assert find_min_useful_u3([[[0, 1]]], [[1, 0]], 0) == 1
    assert find_min_useful_u3(np.zeros((0, 1, 2), dtype=np.int64), [[1, 0]], 0) is None
    # x^2 e1 over x^4: from i = 1 the first useful candidate is i' = 3
    assert find_min_useful_u3([[[0, 0, 1, 0]]], [[1, 0, 0, 0]], 1) == 3
    assert find_min_useful_u3([[[0, 0, 1, 0]]], [[1, 0, 0, 0]], 1, upper=3) is None


def test_find_min_useful_u3_matches_linear_scan(rng):
    for _ in range(60):
        n, d = int(rng.integers(1, 3)), int(rng.integers(2, 6))
        m = int(rng.integers(1, 3))
        gens = rng.integers(0, p, size=(m, n, d))
        gens = np.stack([tshift(g, int(rng.integers(0, d))) for g in gens])
        s = rng.integers(0, p, size=(n, d))
        i = int(rng.integers(0, d - 1))
        E = ModuleEchelon(gens, p)
        scan = next((j for j in range(i + 1, d) if E.solve(tshift(s, j - i)) is not None), None)
        assert find_min_useful_u3(gens, s, i) == scan


def test_fibonacci_tracks_only_zero():
    res = lazy_kurakin_annihilator(fibonacci(5, 10))
    assert res.useful == (0,) and res.dstar == 1
    assert res.polys[0] == AnnPoly.from_lists([[p - 1], [p - 1], [1]], 5, p)


def test_worked_example():
    res = lazy_kurakin_annihilator(example_sequence())
    assert res.useful == (0, 1)
    assert res.polys == kurakin_annihilator(example_sequence()).polys


def test_zero_sequence():
    S = PartialSequence(np.zeros((4, 1, 3), dtype=np.int64), p)
    res = lazy_kurakin_annihilator(S)
    assert res.useful == (0,)
    assert res.polys[0].degree == 0 and res.polys[0][0] == TruncPoly.one(3, p)


def test_expanded_fills_gaps():
    res = lazy_kurakin_annihilator(fibonacci(3, 8))
    full = res.expanded()
    assert len(full) == 3
    for i, P in enumerate(full):
        assert P.leading_coefficient() == TruncPoly.monomial(i, 3, p)


def test_against_full_kurakin(rng):
    for _ in range(60):
        G, S = lazard_instance(rng, d_max=5, delta_max=5)
        lazy = lazy_kurakin_annihilator(S)
        full = kurakin_annihilator(S)
        assert lazy.useful[0] == 0 and list(lazy.useful) == sorted(set(lazy.useful))
        assert all(cancels(P, S) for P in lazy.polys)
        assert staircase_of(lazy.expanded()) == staircase_of(full.polys) == staircase_oracle(S)
        assert staircase_oracle(S).t <= lazy.dstar <= S.d
        assert lazy.iterations <= full.iterations
