import numpy as np
import pytest

from helpers import fibonacci, lazard_instance, example_sequence
from trunclrs.bivariate import minimal_gb_extract, staircase_of, staircase_oracle
from trunclrs.kurakin import (
    ModuleEchelon,
    SubmoduleTable,
    kurakin_annihilator,
    submodule_insert_and_reduce,
    submodule_membership_and_solve,
)
from trunclrs.ring import ContractError, ParameterError, TruncPoly, tmul
from trunclrs.sequences import AnnPoly, PartialSequence, cancels

p = 9001


def vec(*entries, d):
    return [TruncPoly(e, d, p) for e in entries]


def test_membership_unit_vectors():
    a, b = TruncPoly([3, 4], 2, p), TruncPoly([5], 2, p)
    c = submodule_membership_and_solve([vec([1], [], d=2), vec([], [1], d=2)], [a, b])
    assert c == [a, b]


def test_membership_valuation_obstruction():
    assert submodule_membership_and_solve([vec([0, 1], [], d=2)], vec([1], [], d=2)) is None


def test_membership_derived_example():
    c = submodule_membership_and_solve([vec([1, 1], [0, 1], d=3)], vec([0, 1, 1], [0, 0, 1], d=3))
    assert c == [TruncPoly([0, 1], 3, p)]


def test_membership_random_agreement(rng):
    for _ in range(30):
        m, n, d = int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(1, 5))
        gens = rng.integers(0, p, size=(m, n, d)) * (rng.random((m, n, d)) < 0.6)
        for g in gens:  # push some valuations up
            g[:] = np.roll(g, int(rng.integers(0, d)), axis=-1) * (np.arange(d) >= 1)
        coef = rng.integers(0, p, size=(m, d))
        target = tmul(coef[:, None, :], gens, p).sum(axis=0) % p
        sol = submodule_membership_and_solve(list(gens), target)
        assert sol is not None
        back = sum(tmul(c.coeffs[None], g, p) for c, g in zip(sol, gens)) % p
        assert np.array_equal(back, target)
        ech = ModuleEchelon(gens, p).solve(target)
        assert ech is not None
        assert np.array_equal(tmul(ech[:, None, :], gens, p).sum(axis=0) % p, target)
        other = rng.integers(0, p, size=(n, d))
        assert (submodule_membership_and_solve(list(gens), other) is None) == (ModuleEchelon(gens, p).solve(other) is None)


def test_insert_into_empty_table():
    T = SubmoduleTable(1, 2, p)
    g = np.array([[0, 1]])
    submodule_insert_and_reduce(T, 0, g, np.array([[1, 0]]), np.zeros((2, 1, 2)))
    assert np.array_equal(T.generators(0), g[None])


def test_insert_reduces_redundant_generator():
    T = SubmoduleTable(1, 2, p)
    submodule_insert_and_reduce(T, 0, np.array([[0, 1]]), np.array([[1, 0]]), np.zeros((1, 1, 2)))
    submodule_insert_and_reduce(T, 0, np.array([[1, 0]]), np.array([[1, 0]]), np.zeros((1, 1, 2)))
    assert np.array_equal(T.generators(0), np.array([[[1, 0]]]))


def test_insert_member_is_a_contract_violation():
    T = SubmoduleTable(2, 2, p)
    submodule_insert_and_reduce(T, 0, np.array([[1, 0], [0, 0]]), np.array([[1, 0]]), np.zeros((1, 2, 2)))
    submodule_insert_and_reduce(T, 0, np.array([[0, 0], [1, 0]]), np.array([[1, 0]]), np.zeros((1, 2, 2)))
    with pytest.raises(ContractError):
        submodule_insert_and_reduce(T, 0, np.array([[2, 0], [3, 1]]), np.array([[1, 0]]), np.zeros((1, 2, 2)))
    with pytest.raises(ContractError):
        submodule_insert_and_reduce(T, 1, np.zeros((2, 2), dtype=np.int64), np.array([[1, 0]]), np.zeros((1, 2, 2)))


def test_fibonacci():
    d = 4
    res = kurakin_annihilator(fibonacci(d, 10))
    base = AnnPoly.from_lists([[p - 1], [p - 1], [1]], d, p)
    for i, P in enumerate(res.polys):
        assert P == base.scale(TruncPoly.monomial(i, d, p).coeffs)


def test_worked_example():
    S = example_sequence()
    res = kurakin_annihilator(S)
    P0, P1 = res.polys
    assert P0.degree == 2 and P1.degree == 1
    x = TruncPoly.monomial(1, 2, p)
    assert P1 == AnnPoly.from_lists([[0, p - 1], [0, 1]], 2, p)
    assert P0.leading_coefficient() == TruncPoly.one(2, p) and P1.leading_coefficient() == x
    G = minimal_gb_extract(res.polys)
    ref = minimal_gb_extract([AnnPoly.from_lists([[p - 1], [], [1]], 2, p), AnnPoly.from_lists([[0, p - 1], [0, 1]], 2, p)])
    assert G == ref


def test_zero_sequence():
    S = PartialSequence(np.zeros((4, 2, 3), dtype=np.int64), p)
    res = kurakin_annihilator(S)
    for i, P in enumerate(res.polys):
        assert P.degree == 0 and P[0] == TruncPoly.monomial(i, 3, p)


def test_parameter_errors(example_seq):
    with pytest.raises(ParameterError):
        kurakin_annihilator(example_seq, d=3)
    with pytest.raises(ParameterError):
        kurakin_annihilator(example_seq, membership="guess")


@pytest.mark.parametrize("membership", ["echelon", "approximant"])
def test_against_oracle(rng, membership):
    for _ in range(40 if membership == "echelon" else 15):
        G, S = lazard_instance(rng, d_max=4, delta_max=5)
        res = kurakin_annihilator(S, membership=membership)
        oracle = staircase_oracle(S)
        for i, P in enumerate(res.polys):
            assert cancels(P, S)
            assert P.leading_coefficient() == TruncPoly.monomial(i, S.d, p)
        # degree minimality: no canceler with leading coefficient x^i has lower degree
        assert tuple(P.degree for P in res.polys) == oracle.heights
        assert staircase_of(res.polys) == oracle
        assert res.membership_calls >= res.iterations
