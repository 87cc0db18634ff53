import random
from fractions import Fraction as F

import pytest

from cluster_crystals.cartan import cartan_a, staircase_word
from cluster_crystals.crystal_x import (
    act_ex,
    act_ex_chart,
    epsilon_x,
    epsilon_x_expr,
    gamma_x,
    gamma_x_expr,
    phi_x,
    x_action_exprs,
)
from cluster_crystals.exact import DomainError, InvalidInputError, is_subtraction_free
from cluster_crystals.seeds import mutate_seed, seed_from_word
from cluster_crystals.tori import XPoint, mutate_x_point
from cluster_crystals.typea_oracle import (
    act_e_matrix,
    embed_x,
    eps_gamma_phi_matrix,
    proportional,
    random_fraction,
    random_reduced_word,
)


def _xp(seed, vals):
    return XPoint(seed, {k: F(v) for k, v in vals.items()})


def _random_xpoint(seed, rng):
    return XPoint(seed, {k: random_fraction(rng) for k in seed.index_list})


def test_a1_action():
    s = seed_from_word(cartan_a(1), (1,))
    X = _xp(s, {-1: 3, 1: F(5, 2)})
    c = F(7, 3)
    moved = act_ex(s, 1, c, X)
    assert moved[-1] == c * X[-1] and moved[1] == c * X[1]


def test_c_equal_one_is_identity():
    rng = random.Random(0)
    s = seed_from_word(cartan_a(3), (1, 2, 3, 1, 2, 1))
    for _ in range(5):
        X = _random_xpoint(s, rng)
        for j in (1, 2, 3):
            assert act_ex(s, j, 1, X).coords == X.coords


def test_a2_closed_forms():
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    X = _xp(s, {-2: 2, -1: 3, 1: 5, 2: 7, 3: 11})
    c = F(2)
    m = act_ex(s, 1, c, X)
    x1 = X[1]
    assert m[1] == c * x1
    assert m[3] == X[3] * c * (x1 + 1) / (c * x1 + 1)
    assert m[2] == X[2] * (c * x1 + 1) / (c * (x1 + 1))
    assert m[-1] == X[-1] * (c * x1 + 1) / (x1 + 1)
    assert m[-2] == X[-2] * (x1 + 1) / (c * x1 + 1)


def test_gamma_epsilon_examples():
    s1 = seed_from_word(cartan_a(1), (1,))
    X1 = _xp(s1, {-1: 3, 1: F(5, 2)})
    assert gamma_x(s1, 1, X1) == X1[-1] * X1[1]
    assert epsilon_x(s1, 1, X1) == 1 / X1[1]
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    X = _xp(s, {-2: 2, -1: 3, 1: 5, 2: 7, 3: 11})
    assert gamma_x(s, 2, X) == X[-2] * X[2]
    assert epsilon_x(s, 1, X) == 1 / (X[1] * X[3] + X[3])
    ones = _xp(s, {k: 1 for k in s.index_list})
    assert gamma_x(s, 1, ones) == 1
    assert epsilon_x(s, 1, ones) == F(1, 2)  # two occurrences of letter 1
    assert phi_x(s, 1, X) == gamma_x(s, 1, X) * epsilon_x(s, 1, X)


def test_covariance_and_group_law():
    rng = random.Random(1)
    for r, word in ((2, (1, 2, 1)), (3, (2, 1, 3, 2, 1, 3))):
        cd = cartan_a(r)
        s = seed_from_word(cd, word)
        for _ in range(10):
            X = _random_xpoint(s, rng)
            j = rng.choice(sorted(set(word)))
            c1, c2 = random_fraction(rng), random_fraction(rng)
            moved = act_ex(s, j, c1, X)
            for jp in range(1, r + 1):
                assert gamma_x(s, jp, moved) == c1 ** cd.entry(jp, j) * gamma_x(s, jp, X)
            assert epsilon_x(s, j, moved) == epsilon_x(s, j, X) / c1
            twice = act_ex(s, j, c2, moved)
            assert twice.coords == act_ex(s, j, c1 * c2, X).coords


def test_epsilon_invariant_for_orthogonal_letters():
    rng = random.Random(2)
    s = seed_from_word(cartan_a(3), (1, 2, 3, 1, 2, 1))
    for _ in range(10):
        X = _random_xpoint(s, rng)
        c = random_fraction(rng)
        assert epsilon_x(s, 3, act_ex(s, 1, c, X)) == epsilon_x(s, 3, X)
        assert epsilon_x(s, 1, act_ex(s, 3, c, X)) == epsilon_x(s, 1, X)


def test_matches_matrix_action():
    rng = random.Random(3)
    for r in (1, 2, 3):
        cd = cartan_a(r)
        words = [staircase_word(r)] + [random_reduced_word(cd, rng) for _ in range(2)]
        for word in words:
            s = seed_from_word(cd, word)
            for _ in range(4):
                X = _random_xpoint(s, rng)
                j = rng.choice(sorted(set(word)))
                c = random_fraction(rng)
                moved = act_ex(s, j, c, X)
                lhs = embed_x(word, moved.coords, r).entries
                rhs = act_e_matrix(j, c, embed_x(word, X.coords, r).entries)
                assert proportional(rhs, lhs) is not None
                eps_m, gam_m, phi_m = eps_gamma_phi_matrix(j, embed_x(word, X.coords, r).entries)
                assert gamma_x(s, j, X) == gam_m
                assert epsilon_x(s, j, X) == eps_m
                assert phi_x(s, j, X) == phi_m


def test_action_dags_subtraction_free():
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    for j in (1, 2):
        for e in x_action_exprs(s, j).values():
            assert is_subtraction_free(e)
        assert is_subtraction_free(gamma_x_expr(s, j))
        assert is_subtraction_free(epsilon_x_expr(s, j))


def test_action_errors():
    s = seed_from_word(cartan_a(2), (1,))
    X = _xp(s, {-2: 1, -1: 1, 1: 1})
    with pytest.raises(InvalidInputError):
        act_ex(s, 2, F(2), X)  # letter absent
    with pytest.raises(InvalidInputError):
        act_ex(s, 1, 0, X)
    s2 = seed_from_word(cartan_a(2), (1, 2, 1))
    bad = _xp(s2, {-2: 1, -1: 1, 1: -1, 2: 1, 3: 1})  # X1 = -1 kills the sums
    with pytest.raises(DomainError):
        act_ex(s2, 1, F(2), bad)
    mut = mutate_seed(s2, 1)
    with pytest.raises(InvalidInputError):
        act_ex(mut, 1, F(2), XPoint(mut, {k: F(1) for k in mut.index_list}))


def test_chart_aware_action_conjugates():
    rng = random.Random(4)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    mut = mutate_seed(s, 1)
    for _ in range(10):
        X = _random_xpoint(s, rng)
        c = random_fraction(rng)
        j = rng.choice((1, 2))
        direct = act_ex(s, j, c, X)
        on_chart = act_ex_chart(mutate_x_point(s, 1, X), j, c)
        assert on_chart.coords == mutate_x_point(s, 1, direct).coords
