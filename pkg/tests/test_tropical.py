import random
import re

import pytest

from cluster_crystals.cartan import cartan_a
from cluster_crystals.crystal_x import x_action_bundle
from cluster_crystals.exact import InvalidInputError, TROPICAL_INTEGERS, expr_eval, substitute
from cluster_crystals.seeds import mutate_seed, seed_from_word
from cluster_crystals.tori import x_mutation_exprs
from cluster_crystals.tropical import (
    TropPoint,
    box_points,
    box_sample,
    crystal_check,
    emit_dot,
    trop_act,
    trop_mutate,
    trop_point_from_json,
    trop_point_to_json,
    trop_wt_eps_phi,
)


def _tp(seed, vals):
    return TropPoint(seed, dict(vals))


def test_a1_operators():
    s = seed_from_word(cartan_a(1), (1,))
    b = _tp(s, {-1: 3, 1: -2})
    for n in (-2, -1, 0, 1, 5):
        x = trop_act("x", s, 1, n, b)
        assert x.coords == {-1: 3 + n, 1: -2 + n}
        a = trop_act("a", s, 1, n, b)
        assert a.coords == {-1: 3, 1: -2 + n}
    assert trop_act("x", s, 1, 0, b).coords == b.coords


def test_a1_wt_eps():
    s = seed_from_word(cartan_a(1), (1,))
    b = _tp(s, {-1: 3, 1: -2})
    wt, eps, phi = trop_wt_eps_phi("x", s, 1, b)
    assert (wt, eps) == (1, 2) and phi == eps + wt
    wt, eps, phi = trop_wt_eps_phi("a", s, 1, b)
    assert (wt, eps) == (-4, 5) and phi == 1


def test_string_function_drops_under_raising():
    rng = random.Random(0)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    for b in box_sample(s, 15, rng, 50):
        for st in ("a", "x"):
            for j in (1, 2):
                _, eps, _ = trop_wt_eps_phi(st, s, j, b)
                _, eps_up, _ = trop_wt_eps_phi(st, s, j, trop_act(st, s, j, 1, b))
                assert eps_up == eps - 1


def test_trop_mutate_formulas():
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    b = _tp(s, {-2: 4, -1: -1, 1: 2, 2: -3, 3: 5})
    mx = trop_mutate("x", s, 1, b)
    assert mx[1] == -b[1]
    # piecewise-linear X rule: b_i + max(B(i,1), 0)*b_1 - B(i,1)*max(b_1, 0)
    for i in s.index_list:
        if i == 1:
            continue
        e = int(s.b(i, 1))
        assert mx[i] == b[i] + max(e, 0) * b[1] - e * max(b[1], 0)
    ma = trop_mutate("a", s, 1, b)
    # tropical exchange: max over the two exchange monomials, minus the old value
    assert ma[1] == max(b[-2] + b[3], b[-1] + b[2]) - b[1]
    assert all(ma[k] == b[k] for k in s.index_list if k != 1)


def test_trop_mutate_involutive():
    rng = random.Random(1)
    s = seed_from_word(cartan_a(3), (1, 2, 3, 1, 2, 1))
    for st in ("a", "x"):
        for b in box_sample(s, 20, rng, 40):
            for k in s.unfrozen():
                fwd = trop_mutate(st, s, k, b)
                back = trop_mutate(st, fwd.seed, k, fwd)
                assert back.coords == b.coords


def test_trop_mutate_frozen_errors():
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    b = _tp(s, {k: 0 for k in s.index_list})
    with pytest.raises(InvalidInputError):
        trop_mutate("x", s, -1, b)


def test_crystal_axioms_small_boxes():
    rng = random.Random(2)
    s = seed_from_word(cartan_a(1), (1,))
    for st in ("a", "x"):
        report = crystal_check(st, s, box_sample(s, 20, rng, 300))
        assert report.passed, list(report.summary_lines())


def test_empty_sample_passes():
    s = seed_from_word(cartan_a(1), (1,))
    report = crystal_check("a", s, [])
    assert report.passed and report.sample_size == 0


def test_transported_operators_on_charts():
    rng = random.Random(3)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    chart = mutate_seed(s, 1)
    sample = [trop_mutate("x", s, 1, b) for b in box_sample(s, 12, rng, 60)]
    report = crystal_check("x", chart, sample)
    assert report.passed, list(report.summary_lines())


def test_glued_identification():
    rng = random.Random(4)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    chart = mutate_seed(s, 1)
    for st in ("a", "x"):
        for b in box_sample(s, 15, rng, 60):
            for j in (1, 2):
                for n in (1, -1):
                    lhs = trop_mutate(st, s, 1, trop_act(st, s, j, n, b))
                    rhs = trop_act(st, chart, j, n, trop_mutate(st, s, 1, b))
                    assert lhs.coords == rhs.coords
                # wt/eps transported through the identification
                moved = trop_mutate(st, s, 1, b)
                for j in (1, 2):
                    assert trop_wt_eps_phi(st, chart, j, moved) == trop_wt_eps_phi(st, s, j, b)


def test_tropicalization_is_functorial_on_composites():
    # evaluating the composed DAG equals composing the evaluations
    rng = random.Random(5)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    bundle = x_action_bundle(s, 1)
    mut = x_mutation_exprs(s, 1)
    composed = {k: substitute(e, bundle.exprs) for k, e in mut.items()}
    for _ in range(30):
        env = {k: rng.randint(-15, 15) for k in s.index_list}
        env[0] = rng.randint(-3, 3)
        step1 = {k: expr_eval(e, env, TROPICAL_INTEGERS) for k, e in bundle.exprs.items()}
        step1[0] = env[0]
        seq = {k: expr_eval(e, step1, TROPICAL_INTEGERS) for k, e in mut.items()}
        direct = {k: expr_eval(e, env, TROPICAL_INTEGERS) for k, e in composed.items()}
        assert seq == direct


def test_group_law_tropically():
    rng = random.Random(6)
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    for st in ("a", "x"):
        for b in box_sample(s, 10, rng, 30):
            for j in (1, 2):
                n, m = rng.randint(-4, 4), rng.randint(-4, 4)
                lhs = trop_act(st, s, j, n, trop_act(st, s, j, m, b))
                assert lhs.coords == trop_act(st, s, j, n + m, b).coords


DOT_EDGE = re.compile(r'^\s{2}"\(-?\d+(,-?\d+)*\)" -> "\(-?\d+(,-?\d+)*\)" \[label="\d+"\];$')
DOT_NODE = re.compile(r'^\s{2}"\(-?\d+(,-?\d+)*\)";$')


def test_emit_dot_a1():
    s = seed_from_word(cartan_a(1), (1,))
    text = emit_dot("a", s, 1)
    lines = text.strip().splitlines()
    assert lines[0] == "digraph crystal {" and lines[-1] == "}"
    nodes = [l for l in lines if DOT_NODE.match(l)]
    edges = [l for l in lines if DOT_EDGE.match(l)]
    assert len(nodes) == 9
    # lowering moves (a_-1, a_1) to (a_-1, a_1 - 1); 6 arrows stay in the box
    assert len(edges) == 6
    assert '"(0,1)" -> "(0,0)" [label="1"];' in text
    # every non-brace line is a node or an edge: the text is grammatical DOT
    assert all(DOT_NODE.match(l) or DOT_EDGE.match(l) for l in lines[1:-1])


def test_emit_dot_radius_zero():
    s = seed_from_word(cartan_a(1), (1,))
    text = emit_dot("a", s, 0)
    lines = text.strip().splitlines()
    assert len([l for l in lines if DOT_NODE.match(l)]) == 1
    assert not [l for l in lines if DOT_EDGE.match(l)]


def test_box_points_limit():
    s = seed_from_word(cartan_a(3), (1, 2, 3, 1, 2, 1))
    with pytest.raises(InvalidInputError):
        list(box_points(s, 20))


def test_trop_point_json_roundtrip():
    s = seed_from_word(cartan_a(2), (1, 2, 1))
    b = _tp(s, {-2: 0, -1: 2, 1: -5, 2: 3, 3: 1})
    back = trop_point_from_json(trop_point_to_json(b))
    assert back.coords == b.coords and back.seed == s
