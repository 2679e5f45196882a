import random

import networkx as nx
import pytest
from hypothesis import settings, strategies as st

from stallings.coset_graph import build_from_generators, from_permutations
from stallings.words import Word

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def reduced_letters(rank=2, max_size=12):
    letters = [s * k for k in range(1, rank + 1) for s in (1, -1)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(_reduce)


def _reduce(raw):
    out = []
    for x in raw:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def words(rank=2, max_size=12):
    return reduced_letters(rank, max_size).map(lambda t: Word(t, rank))


def subgroups(rank=2, max_gens=4, max_len=8):
    gen = reduced_letters(rank, max_len).filter(bool)
    return st.lists(gen, min_size=1, max_size=max_gens).map(lambda gs: build_from_generators(rank, [Word(g, rank) for g in gs]))


def random_complete_graph(rng, n, m):
    perms = []
    for _ in range(n):
        p = list(range(m))
        rng.shuffle(p)
        perms.append(p)
    return from_permutations(perms, 0)


def regular_graph_as_coset_graph(rng, m):
    """A random simple connected 4-regular graph, with its edges split into two permutations."""
    while True:
        g = nx.random_regular_graph(4, m, seed=rng.randrange(10**9))
        if nx.is_connected(g):
            break
    circuit = list(nx.eulerian_circuit(g))
    # every vertex has in- and out-degree 2; split the arcs into two perfect matchings
    b = nx.Graph()
    b.add_nodes_from((("out", v) for v in g), bipartite=0)
    b.add_nodes_from((("in", v) for v in g), bipartite=1)
    b.add_edges_from((("out", u), ("in", v)) for u, v in circuit)
    top = [("out", v) for v in g]
    first = nx.bipartite.hopcroft_karp_matching(b, top_nodes=top)
    perm_a = [first[("out", v)][1] for v in range(m)]
    used = {(v, perm_a[v]) for v in range(m)}
    perm_b = [next(w for x, w in circuit if x == v and (v, w) not in used) for v in range(m)]
    return g, from_permutations([perm_a, perm_b], 0)


# subgroups used across modules
SUITE = {
    "even": (2, ["aa", "ab", "ba"]),
    "cyclic_a": (2, ["a"]),
    "squares": (2, ["aa", "bb"]),
    "commutator": (2, ["abAB"]),
}


@pytest.fixture
def suite_graphs():
    return {name: build_from_generators(n, gens) for name, (n, gens) in SUITE.items()}


@pytest.fixture
def rng():
    return random.Random(20240611)


# --- acceptance reporting ---------------------------------------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        n, text = m.args
        previous = _criteria.get(n, ("passed", text))[0]
        _criteria[n] = (report.outcome if previous == "passed" else previous, text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcome, text = _criteria[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")
