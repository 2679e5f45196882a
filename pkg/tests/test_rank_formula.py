from fractions import Fraction

import pytest
from hypothesis import given

from stallings.coset_graph import (
    LazyCompletion,
    abelianization_graph,
    all_out_edges,
    ball,
    build_from_generators,
    core,
    core_radius,
    cyclomatic_rank,
    x_out_edges,
)
from stallings.errors import ParityError
from stallings.rank_formula import (
    ForestSelection,
    ball_expression,
    ball_expressions,
    ball_union_expression,
    exact_int,
    forest_expression,
    half,
    rank_estimate,
)
from stallings.transversal import level_counts, minimal_transversal, spanning_transversal

from conftest import random_complete_graph, subgroups
from oracles import grid_ball_sizes


def G(*gens):
    return build_from_generators(2, list(gens))


def test_half_and_parity():
    assert half(6) == 3 and isinstance(half(6), int)
    assert half(3) == Fraction(3, 2)
    assert exact_int(8) == 4
    with pytest.raises(ParityError):
        exact_int(3)


def test_forest_expression_whole_finite_index_tree(rng):
    for _ in range(10):
        g = random_complete_graph(rng, 2, rng.randint(1, 8))
        t = spanning_transversal(g)
        sel = ForestSelection.induced(t, t.labels)
        assert forest_expression(sel) == 1 + g.num_vertices


def test_forest_expression_on_grid_tree_balls():
    z = abelianization_graph(2)
    t = minimal_transversal(z, depth=8)
    for i in range(7):
        assert forest_expression(ForestSelection.tree_ball(t, i)) == 2 * i * i


def test_forest_expression_root_only_for_free_group():
    t = minimal_transversal(G("a", "b"))
    assert forest_expression(ForestSelection.induced(t, [0])) == 2


def test_ball_union_single_vertex_is_zero():
    t = minimal_transversal(G("a"))
    assert ball_union_expression(ForestSelection.induced(t, [0])) == 0
    z = minimal_transversal(abelianization_graph(2), depth=3)
    assert ball_union_expression(ForestSelection.induced(z, [(0, 0)])) == 0


def test_ball_expression_examples():
    z = minimal_transversal(abelianization_graph(2), depth=12)
    assert ball_expressions(z, 10) == [2 * i * i for i in range(11)]
    a = minimal_transversal(G("a"))
    assert ball_expressions(a, 6) == [1] * 7
    assert ball_expression(a, 3) == 1


def test_grid_counts_match_independent_bfs():
    z = minimal_transversal(abelianization_graph(2), depth=10)
    gamma = level_counts(z, 10)
    running = [sum(gamma[: i + 1]) for i in range(11)]
    assert running == grid_ball_sizes(10)


def test_rank_estimate_examples():
    est = rank_estimate(G("aa", "ab", "ba"), 8)
    assert est.values[0] == Fraction(3, 2)
    assert est.stabilized_at == 3
    z = rank_estimate(abelianization_graph(2), 6)
    assert z.values == [0, 2, 8, 18, 32, 50, 72]
    assert z.stabilized_at is None and "unbounded" in z.verdict
    f = rank_estimate(G("a", "b"), 4)
    assert f.values == [2] * 5 and f.stabilized_at == 2


@given(subgroups())
def test_stabilizes_at_rank_beyond_core_radius(g):
    c = core(g)
    R = core_radius(c)
    t = minimal_transversal(g)
    values = ball_expressions(t, R + 4)
    assert all(v == cyclomatic_rank(c) for v in values[R + 1:])


@given(subgroups())
def test_monotone_nonnegative_and_difference_identity(g):
    t = minimal_transversal(g)
    n = 2
    gamma = level_counts(t, 8)
    values = ball_expressions(t, 7)
    assert all(v >= 0 for v in values)
    assert all(a <= b for a, b in zip(values, values[1:]))
    for i in range(1, 7):
        assert 2 * (values[i] - values[i - 1]) == (2 * n - 1) * gamma[i] - gamma[i + 1]


@given(subgroups())
def test_supremum_form(g):
    t = minimal_transversal(g)
    rank = cyclomatic_rank(core(g))
    exprs = [forest_expression(ForestSelection.tree_ball(t, i)) for i in range(core_radius(core(g)) + 3)]
    assert max(exprs) <= rank
    assert exprs[-1] == rank


def test_out_edges_against_tree_boundary():
    # positively labelled out-edges vs half the outer tree boundary, per instance
    z = abelianization_graph(2)
    t = minimal_transversal(z, depth=6)
    gamma = level_counts(t, 5)
    assert [x_out_edges(ball(z, i)) for i in range(4)] == [2, 6, 10, 14]
    assert [gamma[i + 1] // 2 for i in range(4)] == [2, 4, 6, 8]
    lc = LazyCompletion(G("a"))
    t = minimal_transversal(G("a"))
    gamma = level_counts(t, 5)
    assert all(2 * x_out_edges(ball(lc, i)) == all_out_edges(ball(lc, i)) == gamma[i + 1] for i in range(4))
