import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import fibonacci, lazard_instance, example_sequence
from trunclrs.bivariate import (
    BiPoly,
    LexGB,
    Staircase,
    minimal_gb_extract,
    normal_form,
    pade_check,
    phi,
    phi_inverse,
    phibar_generators,
    random_lazard_basis,
    sequence_from_gb,
    staircase_of,
    staircase_oracle,
)
from trunclrs.hankel import hankel_kernel_annihilator
from trunclrs.ring import ContractError, ParameterError
from trunclrs.sequences import AnnPoly, PartialSequence, cancels

p = 9001


def ann(rows, d):
    return AnnPoly.from_lists(rows, d, p)


def test_phi_examples():
    assert phi(ann([[p - 1], [], [1]], 2)) == BiPoly.from_terms([(0, 2, 1), (0, 0, p - 1)], p)
    assert phi(ann([[0, p - 1], [0, 1]], 2)) == BiPoly.from_terms([(1, 1, 1), (1, 0, p - 1)], p)
    # x^d * anything is zero in A, so its image vanishes
    x = ann([[0, 1]], 2)
    assert phi(x * x).is_zero()
    gens = phibar_generators([ann([[1], [1]], 3)])
    assert gens[-1] == BiPoly.monomial(3, 0, p)


def test_phi_round_trip(rng):
    P = AnnPoly(rng.integers(0, p, size=(4, 3)), 3, p)
    assert phi_inverse(phi(P), 3) == P


def test_staircase_corners_and_size():
    sc = Staircase(3, (2, 1, 1))
    assert sc.corners == [(0, 2), (1, 1), (3, 0)]
    assert sc.t == 2 and sc.D == 4
    assert Staircase.from_corners(3, sc.corners) == sc
    assert (1, 0) in sc and (1, 1) not in sc
    assert sc.gaps == ([1, 2], [1, 1])
    assert Staircase(2, (0, 0)).corners == [(0, 0)]
    with pytest.raises(ContractError):
        Staircase(2, (1, 2))


def test_maximal_staircase_without_tails():
    G = random_lazard_basis(4, 5, 1, seed=3, tails=False)
    assert G.leading_terms == [(0, 5), (4, 0)]
    assert G.polys[0] == BiPoly.monomial(0, 5, p)
    assert G.staircase.D == 20


def test_example_shape():
    G = random_lazard_basis(2, 2, 2, seed=1)
    assert G.leading_terms == [(0, 2), (1, 1), (2, 0)]
    assert G.is_lazard()


def test_infeasible_parameters():
    with pytest.raises(ParameterError):
        random_lazard_basis(2, 5, 3)
    with pytest.raises(ParameterError):
        random_lazard_basis(4, 1, 2)


def test_random_bases_are_lazard(rng):
    for s in range(40):
        d, delta = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        t = int(rng.integers(1, min(d, delta) + 1))
        G = random_lazard_basis(d, delta, t, seed=s)
        assert G.is_lazard(), G.lazard_violations()
        assert G.t == t and G.d_opt == t
        assert G.reduced() == G.reduced().reduced()


def test_normal_form_properties(rng):
    G = random_lazard_basis(4, 6, 3, seed=11)
    for g in G.polys:
        assert normal_form(g, G).is_zero()
    for a, b in G.staircase.monomials()[:5]:
        m = BiPoly.monomial(a, b, p)
        assert normal_form(m, G) == m
    for _ in range(5):
        f = BiPoly(rng.integers(0, p, size=(5, 9)), p)
        r = normal_form(f, G)
        assert normal_form(f - r, G).is_zero()
        assert normal_form(r, G) == r
        assert all((a, b) in G.staircase for a, b, _ in r.terms())


def test_json_round_trip(tmp_path):
    G = random_lazard_basis(3, 4, 2, seed=5)
    G.dump(tmp_path / "g.json")
    assert LexGB.load(tmp_path / "g.json") == G


def test_lexgb_rejects_bad_ladders():
    with pytest.raises(ContractError):
        LexGB([BiPoly.monomial(0, 2, p), BiPoly.monomial(1, 3, p), BiPoly.monomial(2, 0, p)], 2, p)
    with pytest.raises(ContractError):
        LexGB([BiPoly.monomial(0, 2, p)], 2, p)


def test_zero_values_give_zero_sequence():
    G = random_lazard_basis(3, 4, 2, seed=5)
    S = sequence_from_gb(G, 2, 8, values=np.zeros((2, G.staircase.D), dtype=np.int64))
    assert S.is_zero()


def test_generated_sequences_are_canceled(rng):
    for _ in range(30):
        G, S = lazard_instance(rng, d_max=5, delta_max=8, n_max=3)
        for P in G.to_annpolys():
            assert cancels(P, S)


def test_oracle_recovers_generating_staircase(rng):
    hits = 0
    for _ in range(60):
        G, S = lazard_instance(rng)
        hits += staircase_oracle(S) == G.staircase
    assert hits >= 57  # generic seeds; degenerate draws are rare at p = 9001


def test_oracle_examples():
    sc = staircase_oracle(example_sequence())
    assert sc.corners == [(0, 2), (1, 1), (2, 0)] and sc.D == 3 and sc.t == 2
    fib = staircase_oracle(fibonacci(3, 8))
    assert fib.corners == [(0, 2), (3, 0)] and fib.D == 6 and fib.t == 1
    zero = staircase_oracle(PartialSequence(np.zeros((4, 1, 2), dtype=np.int64), p))
    assert zero.D == 0 and zero.corners == [(0, 0)]


def test_oracle_size_guard():
    S = PartialSequence(np.ones((400, 4, 8), dtype=np.int64), p)
    with pytest.raises(ParameterError):
        staircase_oracle(S)


def test_minimal_gb_extract_examples():
    d = 4
    fib = [ann([[p - 1], [p - 1], [1]], d).scale(np.eye(1, d, i, dtype=np.int64)[0]) for i in range(d)]
    G = minimal_gb_extract(fib)
    assert G.leading_terms == [(0, 2), (4, 0)]
    assert G.d_opt == 1
    assert G.polys[0] == BiPoly.from_terms([(0, 2, 1), (0, 1, p - 1), (0, 0, p - 1)], p)
    G21 = minimal_gb_extract([ann([[p - 1], [], [1]], 2), ann([[0, p - 1], [0, 1]], 2)])
    assert G21.leading_terms == [(0, 2), (1, 1), (2, 0)] and G21.d_opt == 2
    one = minimal_gb_extract([ann([[1]], 3)])
    assert one.leading_terms == [(0, 0)] and one.d_opt == 0


def test_minimal_gb_extract_needs_generators():
    with pytest.raises(ContractError):
        minimal_gb_extract([])
    # nothing of leading coefficient valuation 0: alpha^0 row is uncovered
    with pytest.raises(ContractError):
        staircase_of([ann([[0, 1], [0, 1]], 2)])


def test_pade_check_matches_kernel(rng):
    S = example_sequence()
    assert pade_check(ann([[p - 1], [], [1]], 2), S)
    assert pade_check(ann([[0, p - 1], [0, 1]], 2), S)
    assert not pade_check(ann([[p - 1], [1]], 2), S)
    with pytest.raises(ParameterError):
        pade_check(ann([[1], [], [], [1]], 2), S)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_pade_equals_cancellation(seed):
    rng = np.random.default_rng(seed)
    G, S = lazard_instance(rng)
    eh = S.e // 2
    kernel = hankel_kernel_annihilator(S, eh)
    for P in kernel:
        assert pade_check(P, S)
    # combinations of kernel elements stay in the kernel; random noise almost never does
    combo = AnnPoly.zero(S.d, p)
    for P in kernel:
        combo = combo + P.scale(rng.integers(0, p, S.d))
    assert pade_check(combo, S) == cancels(combo, S)
    noise = AnnPoly(rng.integers(0, p, size=(eh + 1, S.d)), S.d, p)
    assert pade_check(noise, S) == cancels(noise, S)
