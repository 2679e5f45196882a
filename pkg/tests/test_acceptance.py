"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints a
PASS/FAIL line per criterion.
"""

import random
import time

import networkx as nx
import pytest

from stallings.complexes import (
    bouquet_count_direct,
    bouquet_count_formula,
    graph_complex,
    icosahedron_boundary,
    is_n_regular,
    octahedron_boundary,
    regularity,
    simplex,
    simplex_boundary,
)
from stallings.coset_graph import (
    abelianization_graph,
    build_from_generators,
    core,
    core_radius,
    cyclomatic_rank,
    from_permutations,
)
from stallings.growth import (
    cogrowth,
    equivalence_probe,
    r_series,
    relation_checks,
    rho,
    growth_bound_check,
    transversal_series,
)
from stallings.intersection import (
    burns_audit,
    cogrowth_product_check,
    intersect,
    random_subgroup,
    random_word,
)
from stallings.membership import (
    GwpInstance,
    GwpSolver,
    contains,
    distance_to_transversal,
    rewrite,
)
from stallings.pathological import build_pathological, pathological_transversals
from stallings.rank_formula import rank_estimate
from stallings.transversal import (
    coset_map,
    minimal_transversal,
    schreier_basis,
    schreier_formula,
    spanning_transversal,
)
from stallings.words import Word, reduced_words

from conftest import SUITE, random_complete_graph, regular_graph_as_coset_graph
from oracles import all_reduced, compose, exponent_sums, grid_ball_sizes

criterion = pytest.mark.criterion


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


def suite_graph(name):
    n, gens = SUITE[name]
    return build_from_generators(n, gens)


def regular_action(gens):
    """Coset graph of the kernel of F -> <gens>, by closing the identity under right multiplication."""
    identity = tuple(range(len(gens[0])))
    elements, frontier = {identity}, [identity]
    while frontier:
        fresh = []
        for p in frontier:
            for g in gens:
                q = compose(p, g)
                if q not in elements:
                    elements.add(q)
                    fresh.append(q)
        frontier = fresh
    order = sorted(elements)
    index = {p: i for i, p in enumerate(order)}
    return from_permutations([[index[compose(p, g)] for p in order] for g in gens], index[identity])


@criterion(1, "Schreier formula exact on random finite-index subgroups")
def test_schreier_formula_exactness():
    rng = random.Random(1)
    with Clock(1.0):
        checked = 0
        while checked < 24:
            n, m = rng.choice([2, 3]), rng.randint(1, 8)
            g = random_complete_graph(rng, n, m)
            basis = schreier_basis(spanning_transversal(g, rng.choice(["shortlex-bfs", "dfs"])))
            assert g.is_complete()
            assert len(basis) == cyclomatic_rank(g) == 1 + (n - 1) * g.num_vertices
            assert len(basis) == schreier_formula(n, g.num_vertices)
            checked += 1


@criterion(2, "rank formula stabilizes at the core rank past the core radius")
def test_rank_stabilization():
    rng = random.Random(2)
    with Clock(5.0):
        for _ in range(25):
            g, _ = random_subgroup(rng, 2, 4, 8)
            c = core(g)
            radius = core_radius(c)
            est = rank_estimate(g, radius + 4)
            assert all(v == cyclomatic_rank(c) for v in est.values[radius + 1:])


@criterion(3, "commutator subgroup: Gamma(i) = 2i^2+2i+1 and r(i) = 2i^2 for i <= 30")
def test_commutator_series():
    with Clock(1.0):
        z = abelianization_graph(2)
        gamma = cogrowth(z, 30).values
        r = r_series(z, 30).values
    oracle = grid_ball_sizes(30)
    for i in range(1, 31):
        assert gamma[i] == 2 * i * i + 2 * i + 1 == oracle[i]
        assert r[i] == 2 * i * i


def brute_rank_growth(g, length):
    """Rank of the subgroup generated by all members of length <= length, by brute force."""
    members = [Word(t, 2) for t in all_reduced(2, length) if t and contains(g, Word(t, 2))]
    return cyclomatic_rank(core(build_from_generators(2, members))) if members else 0


@criterion(4, "rho(i) = rk(2i+1) on the test suite, i <= 3")
def test_ball_rank_equals_rank_growth():
    with Clock(30.0):
        for name in SUITE:
            g = suite_graph(name)
            for i in range(4):
                assert rho(g, i) == brute_rank_growth(g, 2 * i + 1), (name, i)


@criterion(5, "sandwich and difference identity exact; out-edge report reproduces the grid instance")
def test_relations():
    for name in SUITE:
        rep = relation_checks(suite_graph(name), 6)
        assert all(row.sandwich_ok for row in rep.rows), name
        assert all(row.difference_ok is not False for row in rep.rows), name
        assert sum(row.difference_ok is True for row in rep.rows) >= 6, name
        header = rep.table().splitlines()[0]
        assert "out_identity_all" in header and "out_identity_x" in header
    grid = relation_checks(abelianization_graph(2), 2).rows[1]
    assert (grid.all_out, grid.x_out) == (12, 6)
    assert grid.out_identity_all and not grid.out_identity_x


@criterion(6, "Gamma(i) <= m r(i+m) for kernels onto Z^2, Z/2, S3; i <= 15")
def test_growth_inequality():
    cases = [
        (abelianization_graph(2), "abAB"),
        (regular_action([(1, 0), (1, 0)]), "aa"),
        (regular_action([(1, 0, 2), (1, 2, 0)]), "aa"),
    ]
    for g, witness in cases:
        rep = growth_bound_check(g, Word.parse(witness, 2), 15, strategies=("shortlex-bfs", "dfs"))
        assert rep.holds
        assert {row[0] for row in rep.rows} == {"shortlex-bfs", "dfs"}
        assert all(row[4] for row in rep.rows)


@criterion(7, "pathological graph: linear tree grows like i+1, exponential tree dominates, degree <= 4")
def test_pathological():
    with Clock(5.0):
        pg = build_pathological(8, 6)
        t_lin, t_exp = pathological_transversals(pg)
        m = pg.graph.num_vertices
        _, lin_full = transversal_series(t_lin, m - 1)
        window = max(len(w) for w in t_exp.labels.values())
        _, exp = transversal_series(t_exp, window)
    assert lin_full.values == [i + 1 for i in range(m)]
    lin = lin_full.values[: window + 1]
    assert all(e > l for e, l in zip(exp.values[1:], lin[1:]))
    res = equivalence_probe(lin, exp.values, 4)
    assert res.verdict == "f⪯g" and res.c_forward == 1 and res.c_backward is None
    deg = {v: 0 for v in pg.graph.vertices}
    for u, _, v in pg.graph.edges:
        deg[u] += 1
        deg[v] += 1
    assert max(deg.values()) <= 4


@criterion(8, "intersection soundness, cogrowth product bound, both Burns bound forms")
def test_intersection():
    rng = random.Random(8)
    agreements = 0
    while agreements < 200:
        g1, gens1 = random_subgroup(rng)
        g2, _ = random_subgroup(rng)
        h = intersect(g1, g2)
        for _ in range(20):
            w = random_word(rng, 2, rng.randint(0, 10))
            assert contains(h, w) == (contains(g1, w) and contains(g2, w))
            agreements += 1
        # uniform words rarely land in a subgroup; also try members of the first factor
        for _ in range(5):
            w = rng.choice(gens1) * rng.choice(gens1)
            assert contains(h, w) == contains(g2, w)
    for _ in range(20):
        g1, _ = random_subgroup(rng)
        g2, _ = random_subgroup(rng)
        assert cogrowth_product_check(g1, g2, 10).holds
    a, b = build_from_generators(2, ["aa"]), build_from_generators(2, ["aaa"])
    audit = burns_audit(a, b, 8)
    table = audit.table()
    assert "literal_bound" in table and "reference_bound" in table
    assert audit.reference == 1 and audit.rank == 1 and audit.reference_holds
    literal = {row[0]: row[3] for row in audit.rows}
    assert all(literal[i] is False for i in range(6, 9))


@criterion(9, "growth-oracle word problem solver on Z^2, H = <a>")
def test_gwp():
    inst = GwpInstance(2, ("abAB",), ("a",), "Gamma", tuple(2 * i + 1 for i in range(7)))
    with Clock(60.0):
        solver = GwpSolver(inst)
        decided = 0
        for letters in reduced_words(2, 6):
            if not letters:
                continue
            assert solver.decide(Word(letters, 2)) == (exponent_sums(letters)[1] == 0)
            decided += 1
    assert decided == 1456
    assert solver.ball_counts == list(inst.oracle)


@criterion(10, "bouquet counts by both methods, dimension-one reduction, incidence identity")
def test_complexes():
    with Clock(5.0):
        regular = [simplex_boundary(2), octahedron_boundary(), icosahedron_boundary(), simplex(2)]
        for c in regular[:2]:
            d = c.without(c.principal()[:1])
            assert bouquet_count_direct(c, d) == bouquet_count_formula(c, d).limit == 1
        tri = simplex(2)
        assert bouquet_count_direct(tri, tri.whole()) == bouquet_count_formula(tri, tri.whole()).limit == 0
        rng = random.Random(10)
        for _ in range(20):
            g, coset = regular_graph_as_coset_graph(rng, rng.randint(5, 14))
            c = graph_complex(g.edges())
            regular.append(c)
            tree = nx.minimum_spanning_tree(g)
            d = c.sub([(v,) for v in g] + [tuple(sorted(e)) for e in tree.edges()])
            assert is_n_regular(c, 4)
            assert bouquet_count_formula(c, d).limit == bouquet_count_direct(c, d) == cyclomatic_rank(coset)
        for c in regular:
            n, top = regularity(c), c.dim
            assert n * c.count(top - 1) == (top + 1) * c.count(top)


REWRITE_SUBGROUPS = [["aa", "ab", "ba"], ["a"], ["aa", "bb"], ["abAB"], ["aab", "bbaB"], ["a", "b"]]


@criterion(11, "rewriting: exact reconstruction, k <= d(w,T) <= l(w), remainder is the coset representative")
def test_rewriting():
    rng = random.Random(11)
    with Clock(5.0):
        for gens in REWRITE_SUBGROUPS:
            g = build_from_generators(2, gens)
            t = minimal_transversal(g)
            basis = schreier_basis(t)
            for _ in range(500):
                w = random_word(rng, 2, rng.randint(0, 12))
                rw = rewrite(t, w, basis)
                assert rw.product() == w
                assert rw.k <= distance_to_transversal(t, w) <= len(w)
                assert rw.remainder == coset_map(t, w)
