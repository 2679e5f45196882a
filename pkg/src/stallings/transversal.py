"""Schreier transversals (spanning trees), the coset map and Schreier bases."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .coset_graph import ActionGraph, CosetGraph, LazyCompletion, bfs_distances, edge_key
from .errors import InvalidInput
from .words import Word, free_reduce, shortlex_key, signed_letters

STRATEGIES = ("shortlex-bfs", "dfs", "edge-list")


@dataclass(frozen=True)
class Transversal:
    """A spanning tree of (a finite region of) a coset graph.

    ``parent`` maps every non-root vertex of the explicit region to
    ``(parent, letter)``; ``labels`` holds the tree-path words.  When the owner
    is a :class:`LazyCompletion` the tree spans ``owner.graph`` explicitly and
    extends through the hanging trees, where every edge is a tree edge.
    ``depth`` bounds the label lengths known to be complete (``None``: all).
    """

    owner: object
    parent: dict
    labels: dict
    minimal: bool
    strategy: str
    depth: Optional[int] = None
    children: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.children:
            kids: dict = {v: [] for v in self.labels}
            for v, (p, x) in self.parent.items():
                kids[p].append((x, v))
            for v in kids:
                kids[v].sort(key=lambda item: shortlex_key((item[0],)))
            object.__setattr__(self, "children", kids)

    @property
    def rank(self) -> int:
        return self.owner.rank

    @property
    def root(self):
        return self.owner.base

    def _hanging(self, v) -> bool:
        return isinstance(self.owner, LazyCompletion) and isinstance(v, tuple)

    def label_letters(self, v) -> tuple[int, ...]:
        if self._hanging(v):
            return self.labels[v[0]] + v[1]
        return self.labels[v]

    def label(self, v) -> Word:
        return Word(self.label_letters(v), self.rank)

    def words(self) -> list[Word]:
        """Labels of the explicit region in ShortLex order."""
        return sorted(Word(w, self.rank) for w in self.labels.values())

    @property
    def tree_edges(self) -> frozenset:
        return frozenset(edge_key(p, x, v) for v, (p, x) in self.parent.items())

    def is_tree_edge(self, u, x: int, v) -> bool:
        if self._hanging(u) or self._hanging(v):
            return True
        return self.parent.get(v) == (u, x) or self.parent.get(u) == (v, -x)

    def tree_parent(self, v):
        if self._hanging(v):
            exit_vertex, w = v
            return exit_vertex if len(w) == 1 else (exit_vertex, w[:-1])
        p = self.parent.get(v)
        return None if p is None else p[0]

    def tree_children(self, v) -> list:
        if self._hanging(v):
            exit_vertex, w = v
            return [(exit_vertex, w + (x,)) for x in signed_letters(self.rank) if x != -w[-1]]
        kids = [c for _, c in self.children.get(v, ())]
        if isinstance(self.owner, LazyCompletion):
            kids += [(v, (x,)) for x in self.owner.graph.missing_letters(v)]
        return kids

    def tree_neighbors(self, v) -> list:
        p = self.tree_parent(v)
        return ([] if p is None else [p]) + self.tree_children(v)

    def walk(self, letters: Sequence[int]) -> tuple[int, object]:
        """Follow ``letters`` down the tree as far as possible.

        Returns the length of the longest prefix lying in the transversal and
        the vertex it labels.
        """
        v = self.root
        for i, x in enumerate(letters):
            w = self.owner.step(v, x)
            if w is None:
                return i, v
            if self._hanging(w):
                down = self.tree_parent(w) == v
            else:
                # parallel edges: the letter must match too
                down = self.parent.get(w) == (v, x)
            if not down:
                return i, v
            v = w
        return len(letters), v

    def contains(self, w: Word) -> bool:
        return self.walk(w.letters)[0] == len(w)


def _region(view, radius: Optional[int]):
    """Finite vertex set and step function the tree is built on."""
    if isinstance(view, CosetGraph):
        return set(view.vertices), view, view
    if isinstance(view, LazyCompletion):
        return set(view.graph.vertices), view.graph, view
    if isinstance(view, ActionGraph):
        if radius is None:
            raise InvalidInput("a transversal of an action graph needs a radius")
        return set(bfs_distances(view, radius)), view, view
    raise InvalidInput(f"cannot build a transversal on {view!r}")


def _labels_from_parent(root, parent: dict) -> dict:
    kids: dict = {}
    for v, (p, x) in parent.items():
        kids.setdefault(p, []).append((x, v))
    labels = {root: ()}
    stack = [root]
    while stack:
        v = stack.pop()
        for x, c in kids.get(v, ()):
            labels[c] = labels[v] + (x,)
            stack.append(c)
    return labels


def spanning_transversal(view, strategy: str = "shortlex-bfs", edges: Optional[Iterable] = None, radius: Optional[int] = None) -> Transversal:
    """Spanning tree of a finite graph, a completion's graph, or an action-graph ball.

    ``shortlex-bfs`` gives the minimal transversal (ShortLex-least labels);
    ``dfs`` explores letters depth first; ``edge-list`` validates ``edges``.
    """
    if strategy not in STRATEGIES:
        raise InvalidInput(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    region, graph, owner = _region(view, radius)
    root = owner.base
    letters = signed_letters(owner.rank)

    def nbrs(v):
        for x in letters:
            w = graph.step(v, x)
            if w is not None and w in region:
                yield x, w

    parent: dict = {}
    if strategy == "shortlex-bfs":
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for x, w in nbrs(v):
                if w not in seen:
                    seen.add(w)
                    parent[w] = (v, x)
                    queue.append(w)
    elif strategy == "dfs":
        seen = {root}
        stack = [nbrs(root)]
        path = [root]
        while stack:
            for x, w in stack[-1]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (path[-1], x)
                    path.append(w)
                    stack.append(nbrs(w))
                    break
            else:
                stack.pop()
                path.pop()
    else:
        if edges is None:
            raise InvalidInput("edge-list strategy needs an explicit edge set")
        adjacency: dict = {v: [] for v in region}
        count = 0
        for u, x, v in edges:
            if u not in region or graph.step(u, x) != v:
                raise InvalidInput(f"({u}, {x}, {v}) is not an edge of the graph")
            adjacency[u].append((x, v))
            adjacency[v].append((-x, u))
            count += 1
        if count != len(region) - 1:
            raise InvalidInput(f"a spanning tree on {len(region)} vertices needs {len(region) - 1} edges, got {count}")
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for x, w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = (v, x)
                    queue.append(w)

    if len(parent) != len(region) - 1:
        raise InvalidInput("graph is disconnected; no spanning tree exists")
    labels = _labels_from_parent(root, parent)
    depth = radius if isinstance(owner, ActionGraph) else None
    if strategy == "dfs" and isinstance(owner, ActionGraph):
        # labels are at least as long as distances, so those <= radius are all present
        depth = radius
    return Transversal(owner, parent, labels, minimal=strategy == "shortlex-bfs", strategy=strategy, depth=depth)


def minimal_transversal(view, depth: Optional[int] = None) -> Transversal:
    if isinstance(view, CosetGraph):
        view = LazyCompletion(view)
    return spanning_transversal(view, "shortlex-bfs", radius=depth)


def trace(view, letters: Sequence[int]):
    v = view.base
    for x in letters:
        v = view.step(v, x)
        if v is None:
            raise InvalidInput("word leaves the finite graph; use a completed view")
    return v


def coset_map(t: Transversal, w: Word) -> Word:
    """The transversal element representing the coset Hw."""
    end = trace(t.owner, w.letters)
    try:
        return t.label(end)
    except KeyError:
        if t.minimal and isinstance(t.owner, ActionGraph):
            return minimal_transversal(t.owner, max(len(w), t.depth or 0)).label(end)
        raise InvalidInput(f"coset of {w} lies outside the transversal's region")


@dataclass(frozen=True)
class BasisElement:
    t: Word
    x: int
    word: Word
    edge: tuple

    def to_json(self) -> dict:
        from .words import letter_str

        return {"t": str(self.t), "x": letter_str(self.x), "basis": str(self.word)}


@dataclass(frozen=True)
class SchreierBasis:
    elements: tuple
    truncated: bool = False

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def words(self) -> set[str]:
        return {str(b.word) for b in self.elements}

    def by_edge(self) -> dict:
        return {b.edge: b for b in self.elements}


def schreier_basis(t: Transversal) -> SchreierBasis:
    """One basis element t.x.phi(tx)^-1 per non-tree edge of the explicit region."""
    rank = t.rank
    graph = t.owner.graph if isinstance(t.owner, LazyCompletion) else t.owner
    elements = []
    for u in sorted(t.labels, key=lambda v: shortlex_key(t.labels[v])):
        for x in range(1, rank + 1):
            v = graph.step(u, x)
            if v is None or v not in t.labels or t.is_tree_edge(u, x, v):
                continue
            word = free_reduce(t.labels[u] + (x,) + tuple(-y for y in reversed(t.labels[v])))
            elements.append(BasisElement(Word(t.labels[u], rank), x, Word(word, rank), (u, x, v)))
    return SchreierBasis(tuple(elements), truncated=isinstance(t.owner, ActionGraph))


def schreier_formula(n: int, m: int) -> int:
    if n < 1 or m < 1:
        raise InvalidInput("rank and index must be positive")
    return 1 + (n - 1) * m


def verify_schreier_property(words: Iterable) -> bool:
    """True iff the set contains the identity and is closed under prefixes."""
    keys = {w.letters if isinstance(w, Word) else tuple(w) for w in words}
    if () not in keys:
        return False
    return all(w[:-1] in keys for w in keys if w)


def schreier_length_property(t: Transversal, b: Word) -> bool:
    """l(u) + l(v) = l(b) - 1 for the longest prefixes u of b and v of b^-1 in t."""
    u = t.walk(b.letters)[0]
    v = t.walk((~b).letters)[0]
    return u + v == len(b) - 1


def level_counts(t: Transversal, max_level: int) -> list[int]:
    """gamma[i] = number of transversal elements of length i, for i <= max_level.

    Hanging trees of a lazy completion are counted in closed form: an exit
    vertex with k missing letters contributes k(2n-1)^(j-1) elements at
    depth j below its label.
    """
    if t.depth is not None and max_level > t.depth:
        raise InvalidInput(f"transversal is only complete up to length {t.depth}, asked for {max_level}")
    gamma = [0] * (max_level + 1)
    for w in t.labels.values():
        if len(w) <= max_level:
            gamma[len(w)] += 1
    if isinstance(t.owner, LazyCompletion):
        branching = 2 * t.rank - 1
        graph = t.owner.graph
        for v, w in t.labels.items():
            k = 2 * t.rank - graph.degree(v)
            if not k:
                continue
            size = k
            for j in range(len(w) + 1, max_level + 1):
                gamma[j] += size
                size *= branching
    return gamma
