"""A finite coset graph with a linear-growth and an exponential-growth spanning tree.

The graph is built in rank 2.  It starts from a simple circuit of length
``c`` through the base.  Step k >= 2 adds a path of length 2kc with fresh
interior vertices.  The path starts at the next-to-last vertex of the
previous path and ends at the vertex of degree < 4 closest to the base, ties
going to the older vertex.

Deleting the last edge of every path leaves a Hamiltonian path from the base,
so that tree grows like i + 1.  Deleting the middle edge of every path leaves
a tree whose halves all hang off vertices near the base.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .coset_graph import CosetGraph
from .errors import InvalidInput
from .transversal import Transversal, spanning_transversal
from .words import signed_letters

RANK = 2
MAX_DEGREE = 2 * RANK


@dataclass(frozen=True)
class PathologicalGraph:
    graph: CosetGraph
    c: int
    steps: int
    paths: tuple  # vertex lists, one per step; the first is closed (ends at the base)
    letters: tuple  # edge letters along each path

    def path_edges(self, k: int) -> list[tuple[int, int, int]]:
        """Edges (u, x, v) of the k-th path (1-based), in order."""
        vs, xs = self.paths[k - 1], self.letters[k - 1]
        return [(vs[j], xs[j], vs[j + 1]) for j in range(len(xs))]


class _Builder:
    def __init__(self):
        self.out: list[dict[int, int]] = []
        self.edges: list[tuple[int, int, int]] = []

    def vertex(self) -> int:
        self.out.append({})
        return len(self.out) - 1

    def free(self, v: int, x: int) -> bool:
        return x not in self.out[v]

    def connect(self, u: int, x: int, v: int) -> None:
        self.out[u][x] = v
        self.out[v][-x] = u
        self.edges.append((u, x, v))

    def distances(self) -> list[int]:
        dist = [-1] * len(self.out)
        dist[0] = 0
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.out[v].values():
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def terminal(self) -> int:
        dist = self.distances()
        open_vertices = [v for v in range(len(self.out)) if len(self.out[v]) < MAX_DEGREE]
        if not open_vertices:
            raise InvalidInput("no vertex of degree < 4 is left to attach to")
        return min(open_vertices, key=lambda v: (dist[v], v))

    def lay_path(self, start: int, end: int, length: int) -> tuple[list[int], list[int]]:
        """Add a path of ``length`` edges from start to end with fresh interior vertices.

        Letters are the ShortLex-least ones keeping the graph folded; the last
        two edges are chosen jointly so the path can close at ``end``.
        """
        letters = signed_letters(RANK)
        verts = [start] + [self.vertex() for _ in range(length - 1)] + [end]
        chosen: list[int] = []

        def ok_at_start(j: int, x: int) -> bool:
            if j == 0:
                return self.free(start, x)
            return x != -chosen[j - 1]

        for j in range(length - 2):
            x = next((x for x in letters if ok_at_start(j, x)), None)
            if x is None:
                raise InvalidInput(f"no free letter at vertex {start}")
            chosen.append(x)
        for x in letters:
            if not ok_at_start(length - 2, x):
                continue
            y = next((y for y in letters if y != -x and self.free(end, -y)), None)
            if y is not None and (length > 1 or start != end):
                chosen += [x, y]
                break
        else:
            raise InvalidInput(f"cannot close a path at vertex {end} without folding")
        for j, x in enumerate(chosen):
            self.connect(verts[j], x, verts[j + 1])
        return verts, chosen


def build_pathological(c: int = 8, steps: int = 6) -> PathologicalGraph:
    if c < 4:
        raise InvalidInput("circuit length c must be at least 4")
    if steps < 1:
        raise InvalidInput("need at least one step")
    b = _Builder()
    root = b.vertex()
    paths, letters = [], []
    vs, xs = b.lay_path(root, root, c)
    paths.append(tuple(vs))
    letters.append(tuple(xs))
    for k in range(2, steps + 1):
        start = paths[-1][-2]
        end = b.terminal()
        vs, xs = b.lay_path(start, end, 2 * k * c)
        paths.append(tuple(vs))
        letters.append(tuple(xs))
    graph = CosetGraph(RANK, len(b.out), b.edges)
    return PathologicalGraph(graph, c, steps, tuple(paths), tuple(letters))


def pathological_transversals(pg: PathologicalGraph) -> tuple[Transversal, Transversal]:
    """(T_linear, T_exp): delete the last edge, resp. the middle edge, of every path.

    For a path of even length L the middle edge is the (L/2)-th, counting from 1.
    """
    linear, exp = [], []
    for k in range(1, pg.steps + 1):
        edges = pg.path_edges(k)
        mid = len(edges) // 2 - 1
        linear += edges[:-1]
        exp += edges[:mid] + edges[mid + 1:]
    t_lin = spanning_transversal(pg.graph, "edge-list", edges=linear)
    t_exp = spanning_transversal(pg.graph, "edge-list", edges=exp)
    return t_lin, t_exp
