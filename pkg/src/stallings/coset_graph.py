"""Folded base-pointed labeled graphs (Stallings automata) and views of them.

A :class:`CosetGraph` is a finite, connected, deterministic graph whose closed
reduced paths at the base vertex spell a subgroup H.  Only part of the coset
graph of H is stored: missing transitions mean the path leaves into a tree.
Two *completed views* give every vertex all 2n transitions:

* :class:`LazyCompletion` hangs free trees off the missing transitions of a
  finite graph.  Hanging vertices are named ``(v, w)``: the core exit vertex
  ``v`` and the reduced letter tuple ``w`` that leads there from it.
* :class:`ActionGraph` wraps an action of F on a set of hashable states, e.g.
  the Cayley graph of Z^n for the commutator subgroup.

Both views are pure: names are computed, never cached, so concurrent queries
need no locking.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import InvalidInput
from .words import (
    LETTERS,
    Word,
    check_rank,
    free_reduce,
    letter_str,
    parse_letters,
    signed_letters,
)


class CosetGraph:
    """Finite folded graph with base vertex 0.

    ``out[v]`` maps each signed letter to the target vertex.  Both ends of
    every edge are stored, so ``out[u][x] == v`` iff ``out[v][-x] == u``.
    """

    base = 0

    def __init__(self, rank: int, num_vertices: int, edges: Iterable[tuple[int, int, int]]):
        check_rank(rank)
        if num_vertices < 1:
            raise InvalidInput("a coset graph needs at least the base vertex")
        self.rank = rank
        out: list[dict[int, int]] = [dict() for _ in range(num_vertices)]
        for u, x, v in edges:
            if x < 0:
                u, x, v = v, -x, u
            if not (0 < x <= rank):
                raise InvalidInput(f"edge label {x} outside rank {rank}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise InvalidInput(f"edge ({u}, {v}) references a missing vertex")
            if x in out[u] or -x in out[v]:
                raise InvalidInput(f"graph is not folded at edge ({u}, {letter_str(x)}, {v})")
            out[u][x] = v
            out[v][-x] = u
        self.out = tuple(out)
        if len(_reachable(self.out, 0)) != num_vertices:
            raise InvalidInput("coset graph must be connected")

    @property
    def num_vertices(self) -> int:
        return len(self.out)

    @property
    def vertices(self) -> range:
        return range(len(self.out))

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        """Edges as ``(from, positive letter, to)`` ordered by (from, letter)."""
        return [(u, x, self.out[u][x]) for u in self.vertices for x in range(1, self.rank + 1) if x in self.out[u]]

    @property
    def num_edges(self) -> int:
        return sum(len(d) for d in self.out) // 2

    def step(self, v: int, x: int) -> Optional[int]:
        return self.out[v].get(x)

    def degree(self, v: int) -> int:
        return len(self.out[v])

    def missing_letters(self, v: int) -> list[int]:
        return [x for x in signed_letters(self.rank) if x not in self.out[v]]

    def trace(self, letters: Sequence[int], start: int = 0) -> Optional[int]:
        v = start
        for x in letters:
            v = self.out[v].get(x)
            if v is None:
                return None
        return v

    def is_complete(self) -> bool:
        return all(len(d) == 2 * self.rank for d in self.out)

    def canonical(self) -> "CosetGraph":
        """Relabel vertices in ShortLex BFS order from the base."""
        order = _reachable(self.out, 0, letters=signed_letters(self.rank))
        index = {v: i for i, v in enumerate(order)}
        return CosetGraph(self.rank, len(order), [(index[u], x, index[v]) for u, x, v in self.edges])

    def __eq__(self, other):
        return isinstance(other, CosetGraph) and self.rank == other.rank and self.out == other.out

    def __hash__(self):
        return hash((self.rank, tuple(tuple(sorted(d.items())) for d in self.out)))

    def __repr__(self):
        return f"CosetGraph(rank={self.rank}, vertices={self.num_vertices}, edges={self.num_edges})"


def _reachable(out, start, letters=None) -> list:
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        targets = out[v].values() if letters is None else (out[v][x] for x in letters if x in out[v])
        for w in targets:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def is_isomorphic(g: CosetGraph, h: CosetGraph) -> bool:
    """Base- and label-preserving isomorphism test."""
    return g.rank == h.rank and g.canonical() == h.canonical()


class Folder:
    """Mutable graph that folds itself after every edge insertion.

    Vertices are union-find ids; vertex 0 is the base.  ``marks`` is a set of
    root ids that survives merges (a merged root is marked if either part was).
    Not thread-safe: confine an instance to one thread.
    """

    def __init__(self, rank: int):
        self.rank = check_rank(rank)
        self.parent = [0]
        self.adj: list[dict[int, int]] = [{}]
        self.marks: set[int] = set()
        self.merges = 0

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        parent = self.parent
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    @property
    def base(self) -> int:
        return self.find(0)

    def step(self, v: int, x: int) -> Optional[int]:
        w = self.adj[self.find(v)].get(x)
        return None if w is None else self.find(w)

    def degree(self, v: int) -> int:
        return len(self.adj[self.find(v)])

    def add_edge(self, u: int, x: int, v: int) -> None:
        u, v = self.find(u), self.find(v)
        pending = []
        for a, label, b in ((u, x, v), (v, -x, u)):
            c = self.adj[a].get(label)
            if c is None:
                self.adj[a][label] = b
            else:
                pending.append((c, b))
        self._fold(pending)

    def identify(self, u: int, v: int) -> None:
        self._fold([(u, v)])

    def _fold(self, pending: list) -> None:
        adj = self.adj
        while pending:
            a, b = pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if len(adj[a]) < len(adj[b]):
                a, b = b, a
            self.parent[b] = a
            self.merges += 1
            if b in self.marks:
                self.marks.discard(b)
                self.marks.add(a)
            for label, c in adj[b].items():
                d = adj[a].get(label)
                if d is None:
                    adj[a][label] = c
                else:
                    pending.append((d, c))
            adj[b] = {}

    def add_path(self, start: int, letters: Sequence[int], end: Optional[int] = None) -> int:
        """Read ``letters`` from ``start``, creating vertices where needed.

        With ``end`` given the path is closed onto ``end`` and folded.
        Returns the (root of the) final vertex.
        """
        v = self.find(start)
        i, n = 0, len(letters)
        while i < n:
            w = self.step(v, letters[i])
            if w is None:
                break
            v, i = w, i + 1
        if end is None:
            for x in letters[i:]:
                w = self.new_vertex()
                self.add_edge(v, x, w)
                v = self.find(w)
            return v
        if i == n:
            self.identify(v, end)
            return self.find(end)
        for x in letters[i:-1]:
            w = self.new_vertex()
            self.add_edge(v, x, w)
            v = self.find(w)
        self.add_edge(v, letters[-1], end)
        return self.find(end)

    def add_loop(self, letters: Sequence[int], at: int = 0) -> None:
        if letters:
            self.add_path(at, letters, at)

    def bfs(self, limit: Optional[int] = None) -> dict[int, int]:
        """Root ids reachable from the base with their distances, in ShortLex order."""
        base = self.base
        dist = {base: 0}
        queue = deque([base])
        letters = signed_letters(self.rank)
        while queue:
            v = queue.popleft()
            d = dist[v]
            if limit is not None and d >= limit:
                continue
            adj = self.adj[v]
            for x in letters:
                w = adj.get(x)
                if w is None:
                    continue
                w = self.find(w)
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def graph(self) -> CosetGraph:
        """Canonically numbered snapshot of the base component."""
        order = list(self.bfs())
        index = {v: i for i, v in enumerate(order)}
        edges = []
        for v in order:
            for x, w in self.adj[v].items():
                if x > 0:
                    edges.append((index[v], x, index[self.find(w)]))
        return CosetGraph(self.rank, len(order), edges)


def _as_letters(w, rank: int) -> tuple[int, ...]:
    if isinstance(w, Word):
        if w.rank != rank:
            raise InvalidInput(f"alphabet mismatch: rank {w.rank} vs rank {rank}")
        return w.letters
    if isinstance(w, str):
        return free_reduce(parse_letters(w, rank))
    return Word(tuple(w), rank).letters


def build_from_generators(rank: int, generators: Iterable) -> CosetGraph:
    """Fold a wedge of loops spelling ``generators`` (Words or strings)."""
    folder = Folder(rank)
    for gen in generators:
        folder.add_loop(_as_letters(gen, rank))
    return folder.graph()


def core(g: CosetGraph) -> CosetGraph:
    """Strip non-base vertices of degree one until none remain."""
    degree = [len(d) for d in g.out]
    alive = [True] * g.num_vertices
    stack = [v for v in g.vertices if v != g.base and degree[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.out[v].values():
            if alive[w] and w != v:
                degree[w] -= 1
                if w != g.base and degree[w] <= 1:
                    stack.append(w)
    if all(alive):
        return g.canonical()
    index = {}
    for v in g.vertices:
        if alive[v]:
            index[v] = len(index)
    edges = [(index[u], x, index[v]) for u, x, v in g.edges if alive[u] and alive[v]]
    return CosetGraph(g.rank, len(index), edges).canonical()


def finite_index(g: CosetGraph) -> Optional[int]:
    return g.num_vertices if g.is_complete() else None


def core_radius(g: CosetGraph) -> int:
    """Eccentricity of the base inside ``g``."""
    return max(bfs_distances(g, None).values())


def diameter(g: CosetGraph) -> int:
    best = 0
    for v in g.vertices:
        seen = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in g.out[u].values():
                if w not in seen:
                    seen[w] = seen[u] + 1
                    queue.append(w)
        best = max(best, max(seen.values()))
    return best


def from_action(rank: int, base_state: Hashable, act: Callable[[Hashable, int], Hashable], max_vertices: int = 10**6) -> CosetGraph:
    """Schreier graph of a finite orbit: the coset graph of the stabilizer.

    ``act(state, x)`` must accept signed letters and be a right action.
    """
    check_rank(rank)
    index = {base_state: 0}
    states = [base_state]
    edges = []
    queue = deque([base_state])
    while queue:
        s = queue.popleft()
        for x in range(1, rank + 1):
            t = act(s, x)
            if act(t, -x) != s:
                raise InvalidInput("action is not invertible")
            if t not in index:
                if len(states) >= max_vertices:
                    raise InvalidInput(f"orbit has more than {max_vertices} points")
                index[t] = len(states)
                states.append(t)
                queue.append(t)
            edges.append((index[s], x, index[t]))
        for x in range(1, rank + 1):
            t = act(s, -x)
            if t not in index:
                if len(states) >= max_vertices:
                    raise InvalidInput(f"orbit has more than {max_vertices} points")
                index[t] = len(states)
                states.append(t)
                queue.append(t)
    return CosetGraph(rank, len(states), edges).canonical()


def from_permutations(perms: Sequence[Sequence[int]], base_point: int = 0) -> CosetGraph:
    """Coset graph of the stabilizer of ``base_point``; generator k acts by ``perms[k-1]``."""
    perms = [list(p) for p in perms]
    inverses = []
    for p in perms:
        if sorted(p) != list(range(len(p))):
            raise InvalidInput(f"{p} is not a permutation")
        inv = [0] * len(p)
        for i, j in enumerate(p):
            inv[j] = i
        inverses.append(inv)

    def act(s, x):
        return perms[x - 1][s] if x > 0 else inverses[-x - 1][s]

    return from_action(len(perms), base_point, act)


# --- completed views --------------------------------------------------------


class LazyCompletion:
    """The full coset graph of a finitely generated subgroup.

    Vertices are ints (vertices of ``graph``) or ``(v, w)`` pairs for hanging
    tree vertices.  The view holds no mutable state.
    """

    def __init__(self, graph: CosetGraph):
        self.graph = graph
        self.rank = graph.rank
        self.base = graph.base

    def step(self, v, x: int):
        if isinstance(v, tuple):
            exit_vertex, w = v
            if w[-1] == -x:
                return exit_vertex if len(w) == 1 else (exit_vertex, w[:-1])
            return (exit_vertex, w + (x,))
        target = self.graph.out[v].get(x)
        if target is None:
            return (v, (x,))
        return target

    def in_graph(self, v) -> bool:
        return not isinstance(v, tuple)

    def vertex_name(self, v) -> str:
        if isinstance(v, tuple):
            return f"{v[0]}:{''.join(letter_str(x) for x in v[1])}"
        return str(v)

    def __repr__(self):
        return f"LazyCompletion({self.graph!r})"


class ActionGraph:
    """Coset graph of the stabilizer of ``base`` under a (possibly infinite) action."""

    def __init__(self, rank: int, base: Hashable, act: Callable[[Hashable, int], Hashable], name: str = "action"):
        self.rank = check_rank(rank)
        self.base = base
        self._act = act
        self.name = name

    def step(self, v, x: int):
        return self._act(v, x)

    def in_graph(self, v) -> bool:
        return True

    def vertex_name(self, v) -> str:
        return str(v)

    def __repr__(self):
        return f"ActionGraph({self.name}, rank={self.rank})"


def abelianization_graph(rank: int) -> ActionGraph:
    """Cayley graph of Z^n: the coset graph of the commutator subgroup [F, F]."""
    check_rank(rank)

    def act(v, x):
        k = abs(x) - 1
        return v[:k] + (v[k] + (1 if x > 0 else -1),) + v[k + 1 :]

    return ActionGraph(rank, (0,) * rank, act, name=f"Z^{rank}")


def completed(g) -> "LazyCompletion | ActionGraph":
    """Completed view of a graph; views pass through unchanged."""
    if isinstance(g, CosetGraph):
        return LazyCompletion(g)
    if isinstance(g, (LazyCompletion, ActionGraph)):
        return g
    raise InvalidInput(f"cannot complete {g!r}")


def contains_letters(view, letters: Sequence[int]) -> bool:
    """Trace through a graph or view; member iff the trace closes at the base."""
    if isinstance(view, CosetGraph):
        return view.trace(letters) == view.base
    v = view.base
    for x in letters:
        v = view.step(v, x)
    return v == view.base


# --- subgraphs --------------------------------------------------------------


def edge_key(u, x: int, v) -> tuple:
    """Canonical name of an edge: its positively labeled orientation."""
    return (u, x, v) if x > 0 else (v, -x, u)


@dataclass(frozen=True)
class Subgraph:
    """Vertices and edges of an owner graph or view.

    ``collection`` marks vertex/edge collections that need not be closed
    under taking endpoints (differences of subgraphs).
    """

    owner: object
    vertices: frozenset
    edges: frozenset = field(default_factory=frozenset)
    collection: bool = False

    def difference(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.owner, self.vertices - other.vertices, self.edges - other.edges, collection=True)


def induced(owner, vertices: Iterable) -> Subgraph:
    vs = frozenset(vertices)
    edges = set()
    for u in vs:
        for x in range(1, owner.rank + 1):
            v = owner.step(u, x)
            if v is not None and v in vs:
                edges.add((u, x, v))
    return Subgraph(owner, vs, frozenset(edges))


def generated(owner, vertices: Iterable = (), edges: Iterable = ()) -> Subgraph:
    """Smallest subgraph containing the given vertices and edges."""
    es = frozenset(edge_key(*e) for e in edges)
    vs = set(vertices)
    for u, _, v in es:
        vs.add(u)
        vs.add(v)
    return Subgraph(owner, frozenset(vs), es)


def bfs_distances(view, radius: Optional[int]) -> dict:
    """Vertices within ``radius`` of the base, in ShortLex BFS order."""
    letters = signed_letters(view.rank)
    dist = {view.base: 0}
    queue = deque([view.base])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if radius is not None and d >= radius:
            continue
        for x in letters:
            w = view.step(v, x)
            if w is not None and w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def ball(view, radius: int) -> Subgraph:
    """Induced subgraph on the vertices at distance at most ``radius``."""
    if radius < 0:
        raise InvalidInput("radius must be non-negative")
    return induced(view, bfs_distances(view, radius))


def components(s: Subgraph) -> list[frozenset]:
    parent = {v: v for v in s.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, _, v in s.edges:
        if u in parent and v in parent:
            a, b = find(u), find(v)
            if a != b:
                parent[b] = a
    groups: dict = {}
    for v in s.vertices:
        groups.setdefault(find(v), set()).add(v)
    return [frozenset(g) for g in groups.values()]


def cyclomatic_rank(s) -> int:
    """|E| - |V| + number of components; the rank of the fundamental group."""
    if isinstance(s, CosetGraph):
        return s.num_edges - s.num_vertices + 1
    if s.collection:
        raise InvalidInput("cyclomatic rank needs a subgraph, not a collection")
    return len(s.edges) - len(s.vertices) + len(components(s))


def _incidences(s: Subgraph):
    """(vertex, letter, neighbour, edge) for every edge-end at a vertex of s."""
    owner = s.owner
    for u in s.vertices:
        for x in signed_letters(owner.rank):
            v = owner.step(u, x)
            if v is not None:
                yield u, x, v, edge_key(u, x, v)


def x_out_edges(s: Subgraph) -> int:
    """Edges outside s whose initial vertex in the positive direction lies in s."""
    return sum(1 for u, x, v, e in _incidences(s) if x > 0 and e not in s.edges)


def all_out_edges(s: Subgraph) -> int:
    """Edge-ends at vertices of s that belong to edges outside s.

    For an induced subgraph every outside edge meets s at most once, so this
    is the number of edges leaving s.
    """
    return sum(1 for u, x, v, e in _incidences(s) if e not in s.edges)


def boundary(s: Subgraph) -> frozenset:
    return frozenset(u for u, x, v, e in _incidences(s) if e not in s.edges)


def interior(s: Subgraph) -> frozenset:
    return s.vertices - boundary(s)


def outer_boundary(s: Subgraph) -> frozenset:
    return frozenset(v for u, x, v, e in _incidences(s) if v not in s.vertices)


# --- serialization ----------------------------------------------------------


def to_json(g: CosetGraph) -> dict:
    return {
        "rank": g.rank,
        "base": g.base,
        "vertices": list(g.vertices),
        "edges": [{"from": u, "label": LETTERS[x - 1], "to": v} for u, x, v in g.edges],
    }


def from_json(data: dict) -> CosetGraph:
    try:
        rank = int(data["rank"])
        vertices = list(data["vertices"])
        base = data.get("base", 0)
        raw_edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed graph JSON: {exc}")
    if vertices != list(range(len(vertices))) or base != 0:
        raise InvalidInput("graph JSON needs dense vertex ids 0..m-1 with base 0")
    edges = []
    for e in raw_edges:
        letters = parse_letters(e["label"], rank)
        if len(letters) != 1:
            raise InvalidInput(f"bad edge label {e['label']!r}")
        edges.append((int(e["from"]), letters[0], int(e["to"])))
    return CosetGraph(rank, len(vertices), edges)


def to_dot(g: CosetGraph, name: str = "coset_graph") -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];", f"  {g.base} [shape=doublecircle];"]
    for v in g.vertices:
        if v != g.base:
            lines.append(f"  {v};")
    for u, x, v in g.edges:
        lines.append(f'  {u} -> {v} [label="{LETTERS[x - 1]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
