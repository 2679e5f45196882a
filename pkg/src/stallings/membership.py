"""Membership, distance to a transversal, Schreier rewriting, and a growth-oracle
solver for the generalized word problem in a finitely presented group."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .coset_graph import CosetGraph, Folder, _as_letters, contains_letters, edge_key
from .errors import BudgetExceeded, InvalidInput
from .transversal import SchreierBasis, Transversal, coset_map, schreier_basis
from .words import Word, free_reduce, signed_letters


def contains(graph, w) -> bool:
    """Trace ``w`` from the base; a member iff every transition exists and the trace closes."""
    rank = graph.rank
    return contains_letters(graph, _as_letters(w, rank))


def distance_to_transversal(t: Transversal, w: Word) -> int:
    """l(w) minus the length of the longest prefix of w lying in t."""
    return len(w) - t.walk(w.letters)[0]


# --- rewriting --------------------------------------------------------------


@dataclass(frozen=True)
class Rewrite:
    word: Word
    factors: tuple  # (BasisElement, +1 or -1)
    remainder: Word

    @property
    def k(self) -> int:
        return len(self.factors)

    def product(self) -> Word:
        """The factors multiplied out, followed by the remainder."""
        out = Word.identity(self.word.rank)
        for b, e in self.factors:
            out = out * (b.word if e > 0 else ~b.word)
        return out * self.remainder

    def to_json(self) -> dict:
        return {
            "word": str(self.word),
            "factors": [{"basis": str(b.word), "exponent": e} for b, e in self.factors],
            "remainder": str(self.remainder),
            "k": self.k,
        }


def rewrite(t: Transversal, w: Word, basis: Optional[SchreierBasis] = None) -> Rewrite:
    """Write w = b_1^e_1 ... b_k^e_k . phi(w) with Schreier basis elements b_j.

    At each step split off the longest prefix s of the current word lying in
    the transversal, say word = s.x.rest.  The edge leaving s by x is not a
    tree edge, so s.x.phi(sx)^-1 is a basis element or the inverse of one,
    and the process continues with phi(sx).rest.
    """
    if basis is None:
        basis = schreier_basis(t)
    by_edge = basis.by_edge()
    owner = t.owner
    rank = t.rank
    current = w.letters
    factors = []
    while True:
        n, v = t.walk(current)
        if n == len(current):
            return Rewrite(w, tuple(factors), Word(current, rank))
        x = current[n]
        u = owner.step(v, x)
        key = edge_key(v, x, u)
        if key not in by_edge:
            raise InvalidInput(f"edge {key} has no basis element; is the basis built from this transversal?")
        factors.append((by_edge[key], 1 if x > 0 else -1))
        current = free_reduce(t.label_letters(u) + current[n + 1:])


# --- generalized word problem -----------------------------------------------


class Decision(enum.Enum):
    INCONCLUSIVE = "inconclusive"

    def __str__(self):
        return self.value


INCONCLUSIVE = Decision.INCONCLUSIVE
ORACLE_KINDS = ("Gamma", "r", "rk")
DEFAULT_GWP_BUDGET = 10**5


@dataclass(frozen=True)
class GwpInstance:
    """G = <X | R>, the subgroup of G generated by S, and a growth table of A = <<R>>S."""

    rank: int
    relators: tuple
    subgroup: tuple
    oracle_kind: str
    oracle: tuple

    def __post_init__(self):
        if self.oracle_kind not in ORACLE_KINDS:
            raise InvalidInput(f"oracle kind must be one of {ORACLE_KINDS}")
        if not self.oracle:
            raise InvalidInput("empty oracle table")
        if self.oracle_kind in ("Gamma", "rk") and any(a > b for a, b in zip(self.oracle, self.oracle[1:])):
            raise InvalidInput(f"{self.oracle_kind} oracle must be non-decreasing")
        object.__setattr__(self, "relators", tuple(_as_letters(r, self.rank) for r in self.relators))
        object.__setattr__(self, "subgroup", tuple(_as_letters(s, self.rank) for s in self.subgroup))

    @classmethod
    def from_json(cls, data: dict, rank: Optional[int] = None) -> "GwpInstance":
        try:
            words = list(data["relators"]) + list(data["subgroup"])
            rank = rank or data.get("rank") or _infer_rank(words)
            return cls(rank, tuple(data["relators"]), tuple(data["subgroup"]),
                       data["oracle"]["kind"], tuple(data["oracle"]["values"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed instance: {exc}") from exc

    def gamma_table(self) -> Optional[list[int]]:
        """Ball sizes of the coset graph of A; an r table is converted exactly."""
        if self.oracle_kind == "Gamma":
            return list(self.oracle)
        if self.oracle_kind == "r":
            n = self.rank
            out = [1]
            for r in self.oracle:
                nxt = (2 * n - 1) * out[-1] + 2 - 2 * r
                if nxt != int(nxt):
                    raise InvalidInput("r oracle is not half-integral in the required way")
                out.append(int(nxt))
            return out
        return None


def _infer_rank(words) -> int:
    rank = 1
    for w in words:
        for ch in str(w):
            if ch.isalpha():
                rank = max(rank, ord(ch.lower()) - ord("a") + 1)
    return rank


class GwpSolver:
    """Builds the coset graph of A ball by ball until it matches the oracle.

    The graph always maps onto the true coset graph of A (only elements of A
    are ever folded in), so ball sizes can only be too large.  When the
    ball of radius L of the completed graph has exactly the oracle's size,
    the quotient map is injective on it and membership of words of length
    <= L is read off by tracing.
    """

    def __init__(self, inst: GwpInstance, budget: int = DEFAULT_GWP_BUDGET):
        self.inst = inst
        self.budget = budget
        self.folder = Folder(inst.rank)
        for s in inst.subgroup:
            self.folder.add_loop(s)
        self.certified = 0
        self.ball_counts = [1]
        self.exhausted = False
        self.unverified_rule = inst.oracle_kind == "rk"
        self._gamma = inst.gamma_table()

    def max_length(self) -> int:
        if self._gamma is not None:
            return len(self._gamma) - 1
        return (len(self.inst.oracle) - 2) // 2

    def ball_count(self, j: int) -> int:
        """Size of the radius-j ball of the completed current graph."""
        n2 = 2 * self.inst.rank
        dist = self.folder.bfs(j)
        total = len(dist)
        for v, d in dist.items():
            k = n2 - self.folder.degree(v)
            if k and d < j:
                total += k * sum((n2 - 1) ** s for s in range(j - d))
        return total

    def ball_rank(self, j: int) -> int:
        dist = self.folder.bfs(j)
        edges = 0
        for v in dist:
            for x, w in self.folder.adj[v].items():
                if x > 0 and self.folder.find(w) in dist:
                    edges += 1
        return edges - len(dist) + 1

    def _process_next(self) -> None:
        f = self.folder
        v = next((u for u in f.bfs() if u not in f.marks), None)
        if v is None:
            # a finite, relator-closed graph that is still too big
            raise InvalidInput("oracle is inconsistent: the coset graph is finite and larger than the table")
        for x in signed_letters(self.inst.rank):
            if f.step(v, x) is None:
                f.add_edge(v, x, f.new_vertex())
                v = f.find(v)
        for r in self.inst.relators:
            f.add_loop(r, at=f.find(v))
        f.marks.add(f.find(v))

    def _settled(self, j: int) -> bool:
        if self._gamma is not None:
            count = self.ball_count(j)
            if count < self._gamma[j]:
                raise InvalidInput(f"oracle is inconsistent: ball of radius {j} has {count} < {self._gamma[j]} vertices")
            return count == self._gamma[j]
        want = self.inst.oracle[2 * j + 1]
        got = self.ball_rank(j)
        if got > want:
            raise InvalidInput(f"oracle is inconsistent: ball of radius {j} has rank {got} > {want}")
        return got == want

    def certify(self, length: int) -> bool:
        """Certify balls up to ``length``; False when the budget runs out."""
        if length > self.max_length():
            raise InvalidInput(f"oracle table covers lengths <= {self.max_length()}, word has length {length}")
        while self.certified < length:
            if self.exhausted:
                return False
            j = self.certified + 1
            steps = 0
            while not self._settled(j):
                if not self.inst.relators:
                    # nothing can ever be identified
                    raise InvalidInput(f"oracle is inconsistent at radius {j}")
                if steps >= self.budget:
                    self.exhausted = True
                    return False
                self._process_next()
                steps += max(1, len(self.inst.relators))
            self.certified = j
            self.ball_counts.append(self.ball_count(j))
        return True

    def decide(self, w) -> "bool | Decision":
        letters = _as_letters(w, self.inst.rank)
        if not self.certify(len(letters)):
            return INCONCLUSIVE
        f = self.folder
        v = f.base
        for x in letters:
            v = f.step(v, x)
            if v is None:
                # a reduced path into a hanging tree never comes back
                return False
        return v == f.base


def gwp_decide(inst: GwpInstance, w, budget: int = DEFAULT_GWP_BUDGET) -> "bool | Decision":
    return GwpSolver(inst, budget).decide(w)


# --- normal closures --------------------------------------------------------


@dataclass
class ClosureResult:
    graph: CosetGraph
    exact: bool
    radius: int
    notes: list = field(default_factory=list)


def normal_closure_graph(rank: int, relators: Sequence, subgroup: Sequence = (), radius: int = 8,
                         max_vertices: int = 200_000) -> ClosureResult:
    """Coset graph of <<R>>S, approximated by completing every vertex within
    ``radius`` of the base and attaching every relator there, repeatedly,
    with folding.

    The result is exact when the graph comes out complete and every relator
    closes at every vertex (a finite quotient has been reached).  Otherwise it
    still maps onto the true graph, injectively on balls of radius well
    inside ``radius``.
    """
    rels = [_as_letters(r, rank) for r in relators]
    letters = signed_letters(rank)
    f = Folder(rank)
    for s in subgroup:
        f.add_loop(_as_letters(s, rank))
    while True:
        todo = [v for v in f.bfs(radius) if v not in f.marks]
        if not todo:
            break
        for v in todo:
            if f.find(v) in f.marks:
                continue
            for x in letters:
                if f.step(v, x) is None:
                    f.add_edge(v, x, f.new_vertex())
            for r in rels:
                f.add_loop(r, at=f.find(v))
            f.marks.add(f.find(v))
        if len(f.parent) - f.merges > max_vertices:
            raise BudgetExceeded(f"normal closure grew beyond {max_vertices} vertices")
    g = f.graph()
    exact = g.is_complete() and all(g.trace(r, v) == v for v in g.vertices for r in rels)
    notes = [] if exact else [f"approximation: attached relators only within radius {radius}"]
    return ClosureResult(g, exact, radius, notes)
