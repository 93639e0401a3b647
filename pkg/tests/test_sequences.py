import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import example_sequence
from trunclrs.ring import ParameterError, TruncPoly
from trunclrs.sequences import (
    AnnPoly,
    PartialSequence,
    apply_poly,
    cancels,
    scale_add,
    shift,
    truncated_series,
)

p = 9001


def poly(rows, d=2):
    return AnnPoly.from_lists(rows, d, p)


def rand_seq(rng, e, n, d):
    return PartialSequence(rng.integers(0, p, size=(e, n, d)), p)


def test_shift_examples(rng):
    S = rand_seq(rng, 3, 2, 2)
    assert shift(S, 0) == S
    assert shift(S, 2) == S[2:]
    assert shift(shift(S, 1), 1) == shift(S, 2)
    with pytest.raises(ParameterError):
        shift(S, 4)


def test_scale_add_examples(rng):
    S, T = rand_seq(rng, 4, 2, 3), rand_seq(rng, 3, 2, 3)
    assert scale_add(TruncPoly.zero(3), S, T) == T
    assert scale_add(TruncPoly([p - 1], 3), S, S).is_zero()
    c = TruncPoly(rng.integers(0, p, 3), 3)
    got = scale_add(c, S, T)
    for k in range(3):
        for l in range(2):
            want = c * TruncPoly(S.terms[k, l], 3) + TruncPoly(T.terms[k, l], 3)
            assert np.array_equal(got.terms[k, l], want.coeffs)


def test_example_cancelers():
    S = example_sequence()
    gen = poly([[p - 1], [], [1]])  # y^2 - 1
    assert apply_poly(gen, S).terms.shape == (2, 1, 2)
    assert apply_poly(gen, S).is_zero()
    low = poly([[0, p - 1], [0, 1]])  # x(y - 1)
    out = apply_poly(low, S)
    assert out.e == 3 and out.is_zero()
    assert apply_poly(poly([[1]]), S) == S
    assert cancels(gen, S)
    assert not cancels(poly([[p - 1], [1]]), S)
    assert cancels(AnnPoly.zero(2, p), S)


def test_truncated_series_examples():
    S = example_sequence()
    G = truncated_series(S)
    # y^3 + (1+x) y^2 + y + (1+x)
    assert G[:, 0].tolist() == [[1, 1], [1, 0], [1, 1], [1, 0]]
    v = np.array([[3, 4]])
    G2 = truncated_series(PartialSequence(np.array([v, 0 * v]), p))
    assert G2[1].tolist() == v.tolist() and not G2[0].any()
    assert not truncated_series(PartialSequence(np.zeros((2, 1, 2)), p)).any()
    with pytest.raises(ParameterError):
        truncated_series(PartialSequence(np.zeros((3, 1, 2)), p))


def test_annpoly_arithmetic():
    a = poly([[1], [1]])
    b = poly([[p - 1], [1]])
    assert (a * b) == poly([[p - 1], [], [1]])
    assert (a - a).degree == -1
    assert a.shift_y(2).degree == 3
    assert a.leading_coefficient() == TruncPoly.one(2)
    assert poly([[0, 1], [0, 0], [0, 0]]).degree == 0
    assert a.scale(TruncPoly([0, 1], 2)) == poly([[0, 1], [0, 1]])
    assert AnnPoly.from_truncpolys([TruncPoly([1], 2), TruncPoly([0, 1], 2)]) == poly([[1], [0, 1]])
    with pytest.raises(ParameterError):
        AnnPoly([1, 2, 3], 3)


def test_degree_too_large():
    with pytest.raises(ParameterError):
        apply_poly(poly([[1], [], [], [], [1]]), example_sequence())


def test_json_round_trip(tmp_path, rng):
    S = rand_seq(rng, 5, 3, 4)
    path = tmp_path / "s.json"
    S.dump(path)
    assert PartialSequence.load(path) == S
    obj = json.loads(path.read_text())
    assert set(obj) == {"p", "d", "n", "e", "terms"}


def test_json_rejects_bad_records():
    with pytest.raises(ParameterError):
        PartialSequence.from_json({"p": 7, "d": 1})
    with pytest.raises(ParameterError):
        PartialSequence.from_json({"p": 7, "d": 1, "n": 1, "e": 1, "terms": [[[9]]]})
    with pytest.raises(ParameterError):
        PartialSequence.from_json({"p": 7, "d": 2, "n": 1, "e": 2, "terms": [[[1]]]})


def test_composition_with_shift(rng):
    S = rand_seq(rng, 8, 2, 3)
    P = AnnPoly(rng.integers(0, p, size=(3, 3)), 3, p)
    assert apply_poly(P.shift_y(2), S) == apply_poly(P, shift(S, 2))


def test_longer_prefix_stays_canceled():
    # Fibonacci recurrence over A, generating polynomial y^2 - y - 1 of order 2
    vals = [1, 1]
    while len(vals) < 12:
        vals.append(vals[-1] + vals[-2])
    S = PartialSequence.from_scalars(vals, 3, p)
    P = poly([[p - 1], [p - 1], [1]], 3)
    assert cancels(P, S[:4])
    assert cancels(P, S)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3))
def test_cancelers_closed_under_combinations(seed, d):
    rng = np.random.default_rng(seed)
    # S_k = c * r^k for a unit ratio r: cancelled by y - r and by anything times it
    r = TruncPoly(np.concatenate([[int(rng.integers(1, p))], rng.integers(0, p, d - 1)]), d, p)
    cur = TruncPoly(rng.integers(0, p, d), d, p)
    terms = []
    for _ in range(6):
        terms.append([cur.coeffs])
        cur = cur * r
    S = PartialSequence(np.array(terms), p)
    base = AnnPoly(np.array([(-r).coeffs, TruncPoly.one(d, p).coeffs]), d, p)
    a = base * AnnPoly(rng.integers(0, p, size=(2, d)), d, p)
    b = base.shift_y(1)
    c1, c2 = (TruncPoly(rng.integers(0, p, d), d, p) for _ in range(2))
    combo = a.scale(c1) + b.scale(c2)
    assert cancels(a, S) and cancels(b, S) and cancels(combo, S)
