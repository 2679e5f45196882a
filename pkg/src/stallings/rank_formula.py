"""The generalized Schreier rank formula evaluated on finite pieces of a transversal tree.

Half-integers are carried as doubled integers and returned exactly: an ``int``
when the value is integral, otherwise a :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .coset_graph import ActionGraph, CosetGraph, LazyCompletion, completed, core_radius, diameter
from .errors import InvalidInput, ParityError
from .transversal import Transversal, level_counts, minimal_transversal


def half(doubled: int):
    """``doubled / 2`` as an int when even, else as an exact Fraction."""
    if doubled % 2 == 0:
        return doubled // 2
    return Fraction(doubled, 2)


def exact_int(doubled: int) -> int:
    """``doubled / 2`` where evenness is structurally guaranteed."""
    if doubled % 2:
        raise ParityError(f"expected an even doubled value, got {doubled}")
    return doubled // 2


@dataclass(frozen=True)
class ForestSelection:
    """Finite subforest of a transversal tree."""

    transversal: Transversal
    vertices: frozenset
    edges: frozenset  # (parent, child) tree edges

    def __post_init__(self):
        t = self.transversal
        for p, c in self.edges:
            if p not in self.vertices or c not in self.vertices:
                raise InvalidInput(f"edge ({p}, {c}) has an unselected endpoint")
            if t.tree_parent(c) != p:
                raise InvalidInput(f"({p}, {c}) is not an edge of the transversal tree")

    @classmethod
    def induced(cls, t: Transversal, vertices: Iterable) -> "ForestSelection":
        vs = frozenset(vertices)
        edges = frozenset((t.tree_parent(v), v) for v in vs if t.tree_parent(v) in vs)
        return cls(t, vs, edges)

    @classmethod
    def tree_ball(cls, t: Transversal, radius: int, center=None) -> "ForestSelection":
        """Tree vertices within tree distance ``radius`` of ``center`` (default: the root)."""
        center = t.root if center is None else center
        seen = {center}
        frontier = [center]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in t.tree_neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return cls.induced(t, seen)

    def components(self) -> list[frozenset]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for p, c in self.edges:
            a, b = find(p), find(c)
            if a != b:
                parent[b] = a
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return [frozenset(g) for g in groups.values()]


def _outer_boundary(t: Transversal, comp: frozenset) -> set:
    return {w for v in comp for w in t.tree_neighbors(v) if w not in comp}


def forest_expression(sel: ForestSelection):
    """alpha + (n-1)|V| - 1/2 sum_j |outer boundary of component j|, boundaries taken in the tree."""
    t = sel.transversal
    comps = sel.components()
    outer = sum(len(_outer_boundary(t, comp)) for comp in comps)
    return half(2 * len(comps) + 2 * (t.rank - 1) * len(sel.vertices) - outer)


def ball_union_expression(sel: ForestSelection):
    """alpha - delta/2 + (n-1)|V| - (2n-1)/2 |boundary|, for selections made of tree balls.

    ``delta`` counts single-vertex components; the boundary is the set of
    selected vertices incident to a tree edge outside the selection.
    """
    t = sel.transversal
    n = t.rank
    comps = sel.components()
    delta = sum(1 for c in comps if len(c) == 1)
    if len(t.labels) == 1 and not isinstance(t.owner, (LazyCompletion, ActionGraph)):
        delta = 0
    boundary = 0
    for comp in comps:
        for v in comp:
            if any(w not in comp for w in t.tree_neighbors(v)):
                boundary += 1
    return half(2 * len(comps) - delta + 2 * (n - 1) * len(sel.vertices) - (2 * n - 1) * boundary)


def ball_expression(t: Transversal, i: int):
    """r_T(i) = 1 + (n-1) Gamma_T(i) - gamma_T(i+1) / 2."""
    if i < 0:
        raise InvalidInput("radius must be non-negative")
    gamma = level_counts(t, i + 1)
    return half(2 + 2 * (t.rank - 1) * sum(gamma[: i + 1]) - gamma[i + 1])


def ball_expressions(t: Transversal, horizon: int) -> list:
    gamma = level_counts(t, horizon + 1)
    out = []
    total = 0
    for i in range(horizon + 1):
        total += gamma[i]
        out.append(half(2 + 2 * (t.rank - 1) * total - gamma[i + 1]))
    return out


@dataclass(frozen=True)
class RankEstimate:
    values: list
    verdict: str
    stabilized_at: Optional[int]
    window: int


def rank_estimate(subgroup, horizon: int, transversal: Optional[Transversal] = None) -> RankEstimate:
    """Concentric tree-ball expressions for i = 0..horizon and a stabilization verdict.

    The verdict is a heuristic: the values must be constant over the last
    max(3, core diameter) radii.  The underlying statement is a limit.
    """
    if horizon < 1:
        raise InvalidInput("horizon must be at least 1")
    view = completed(subgroup)
    t = transversal or minimal_transversal(view, horizon + 1 if isinstance(view, ActionGraph) else None)
    values = ball_expressions(t, horizon)
    window = 3
    if isinstance(view, LazyCompletion):
        window = max(3, diameter(view.graph))
    tail = values[-window:]
    if len(values) >= window and len(set(tail)) == 1:
        return RankEstimate(values, f"stabilized at {tail[0]}", tail[0], window)
    return RankEstimate(values, "nondecreasing, unbounded at horizon", None, window)
