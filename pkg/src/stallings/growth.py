"""Growth, cogrowth and rank-growth series of subgroups, and the relations between them.

A *subgroup* argument is anything :func:`~stallings.coset_graph.completed`
accepts: a folded :class:`CosetGraph` (completed lazily) or a completed view
such as the Z^n action graph of the commutator subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .coset_graph import (
    ActionGraph,
    Folder,
    LazyCompletion,
    all_out_edges,
    ball,
    bfs_distances,
    completed,
    cyclomatic_rank,
    induced,
    x_out_edges,
)
from .errors import BudgetExceeded, InvalidInput, default_budget
from .rank_formula import ball_expressions, half
from .transversal import Transversal, level_counts, spanning_transversal
from .words import Word, ball_size, signed_letters

KINDS = ("gamma", "Gamma", "r", "rho", "rk", "subgroup-count")


@dataclass(frozen=True)
class GrowthSeries:
    kind: str
    values: list
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown series kind {self.kind!r}")
        if not self.provenance:
            object.__setattr__(self, "provenance", ["formula"] * len(self.values))

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def horizon(self) -> int:
        return len(self.values) - 1


def free_ball_size(n: int, i: int) -> int:
    """Gamma_F(i) = 1 + n((2n-1)^i - 1)/(n-1); equals 2i+1 when n = 1."""
    if n == 1:
        return 2 * i + 1
    return 1 + n * ((2 * n - 1) ** i - 1) // (n - 1)


def _transversal_for(view, depth: int, strategy: str = "shortlex-bfs") -> Transversal:
    if isinstance(view, ActionGraph):
        return spanning_transversal(view, strategy, radius=depth)
    return spanning_transversal(view, strategy)


def transversal_series(t: Transversal, horizon: int) -> tuple[GrowthSeries, GrowthSeries]:
    """(gamma_T, Gamma_T) for i = 0..horizon."""
    gamma = level_counts(t, horizon)
    source = "bfs" if t.minimal else t.strategy
    running, total = [], 0
    for g in gamma:
        total += g
        running.append(total)
    prov = [source] * (horizon + 1)
    return GrowthSeries("gamma", gamma, prov), GrowthSeries("Gamma", running, list(prov))


def cogrowth(subgroup, horizon: int) -> GrowthSeries:
    """Gamma of the minimal (ShortLex BFS) transversal: ball volumes in the coset graph."""
    view = completed(subgroup)
    return transversal_series(_transversal_for(view, horizon), horizon)[1]


def r_series(source, horizon: int) -> GrowthSeries:
    """r_T(i) = 1 + (n-1)Gamma_T(i) - gamma_T(i+1)/2; a subgroup gives the minimal transversal."""
    if isinstance(source, Transversal):
        t = source
    else:
        t = _transversal_for(completed(source), horizon + 1)
    return GrowthSeries("r", ball_expressions(t, horizon))


# --- brute-force enumeration ------------------------------------------------


def _check_budget(rank: int, i: int, budget: Optional[int]) -> None:
    budget = default_budget() if budget is None else budget
    needed = ball_size(rank, i)
    if needed > budget:
        raise BudgetExceeded(f"enumerating words of length <= {i} traces {needed} words, budget is {budget}")


def members(subgroup, max_length: int, budget: Optional[int] = None) -> list[tuple[int, ...]]:
    """All reduced words of length <= max_length lying in the subgroup, in DFS order.

    Words are traced letter by letter.  In a lazy completion a reduced path
    that enters a hanging tree never returns, so such prefixes are cut.
    """
    view = completed(subgroup)
    _check_budget(view.rank, max_length, budget)
    letters = signed_letters(view.rank)
    base = view.base
    out = [()] if max_length >= 0 else []
    hanging = isinstance(view, LazyCompletion)
    step = view.step
    stack = [((), base)]
    while stack:
        word, v = stack.pop()
        if len(word) == max_length:
            continue
        last = word[-1] if word else 0
        for x in letters:
            if x == -last:
                continue
            w = step(v, x)
            if hanging and isinstance(w, tuple):
                continue
            nxt = word + (x,)
            if w == base:
                out.append(nxt)
            stack.append((nxt, w))
    return out


def subgroup_element_count(subgroup, i: int, budget: Optional[int] = None) -> int:
    """|{h in H : l(h) <= i}|."""
    return len(members(subgroup, i, budget))


def rank_growth(subgroup, i: int, budget: Optional[int] = None) -> int:
    """rk_H(i): rank of the subgroup generated by elements of length <= i.

    Definitional route: enumerate the members, fold them into a fresh graph
    and take its cyclomatic rank.
    """
    if i < 0:
        raise InvalidInput("length must be non-negative")
    view = completed(subgroup)
    folder = Folder(view.rank)
    for w in members(view, i, budget):
        folder.add_loop(w)
    return cyclomatic_rank(folder.graph())


def rho(subgroup, i: int) -> int:
    """Cyclomatic rank of the ball of radius i about the base.

    Hanging trees of a lazy completion meet the ball in trees attached at a
    single vertex, so for those the ball is restricted to the finite graph.
    """
    view = completed(subgroup)
    if isinstance(view, LazyCompletion):
        g = view.graph
        return cyclomatic_rank(induced(g, bfs_distances(g, i)))
    return cyclomatic_rank(ball(view, i))


# --- relations --------------------------------------------------------------


@dataclass
class RelationRow:
    i: int
    rho: int
    rho_next: int
    r: object
    gamma_next: int
    rk: Optional[int]
    all_out: int
    x_out: int
    ball_rank_ok: Optional[bool]
    sandwich_ok: bool
    difference_ok: Optional[bool]
    out_identity_all: bool
    out_identity_x: bool


@dataclass
class RelationReport:
    rows: list
    partial: bool

    def table(self) -> str:
        head = "i,rho,r,rho(i+1),rk(2i+1),all_out,x_out,ball_rank_ok,sandwich_ok,difference_ok,out_identity_all,out_identity_x"
        lines = [head]
        for row in self.rows:
            cells = [row.i, row.rho, row.r, row.rho_next, "" if row.rk is None else row.rk, row.all_out, row.x_out,
                     _flag(row.ball_rank_ok), _flag(row.sandwich_ok), _flag(row.difference_ok), _flag(row.out_identity_all), _flag(row.out_identity_x)]
            lines.append(",".join(str(c) for c in cells))
        return "\n".join(lines) + "\n"


def _flag(value: Optional[bool]) -> str:
    return "" if value is None else ("pass" if value else "fail")


def relation_checks(subgroup, horizon: int, budget: Optional[int] = None) -> RelationReport:
    """Check, per radius: rho(i) = rk(2i+1); rho(i) <= r(i) <= rho(i+1); the
    difference identity for r; and r(i) = rho(i) + (out(B_i) - gamma(i+1))/2
    with both out-edge counters.  rk is skipped (and the report marked
    partial) where the enumeration budget does not reach 2i+1.
    """
    view = completed(subgroup)
    n = view.rank
    t = _transversal_for(view, horizon + 2)
    gamma = level_counts(t, horizon + 2)
    r = ball_expressions(t, horizon + 1)
    rhos = [rho(view, i) for i in range(horizon + 2)]
    budget = default_budget() if budget is None else budget
    rows, partial = [], False
    for i in range(horizon + 1):
        b = ball(view, i)
        all_out, x_out = all_out_edges(b), x_out_edges(b)
        rk = None
        if ball_size(n, 2 * i + 1) <= budget:
            rk = rank_growth(view, 2 * i + 1, budget)
        else:
            partial = True
        difference_ok = None
        if i >= 1:
            difference_ok = 2 * (r[i] - r[i - 1]) == (2 * n - 1) * gamma[i] - gamma[i + 1]
        rows.append(RelationRow(
            i=i, rho=rhos[i], rho_next=rhos[i + 1], r=r[i], gamma_next=gamma[i + 1], rk=rk,
            all_out=all_out, x_out=x_out,
            ball_rank_ok=None if rk is None else rhos[i] == rk,
            sandwich_ok=rhos[i] <= r[i] <= rhos[i + 1],
            difference_ok=difference_ok,
            out_identity_all=r[i] == rhos[i] + half(all_out - gamma[i + 1]),
            out_identity_x=r[i] == rhos[i] + half(x_out - gamma[i + 1]),
        ))
    return RelationReport(rows, partial)


# --- supnormal inequality ---------------------------------------------------


@dataclass
class GrowthBoundReport:
    witness: str
    m: int
    rows: list  # (strategy, i, Gamma_T(i), m * r_T(i+m), holds)

    @property
    def holds(self) -> bool:
        return all(row[-1] for row in self.rows)


def _tidy(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def _closes_everywhere(view, letters, radius: int) -> bool:
    if isinstance(view, LazyCompletion):
        verts = list(view.graph.vertices) if view.graph.is_complete() else None
        if verts is None:
            # a nontrivial normal subgroup forces finite index once the graph is finite
            return False
    else:
        verts = list(bfs_distances(view, radius))
    for v in verts:
        u = v
        for x in letters:
            u = view.step(u, x)
        if u != v:
            return False
    return True


def growth_bound_check(subgroup, witness: Word, horizon: int, strategies: Sequence[str] = ("shortlex-bfs", "dfs")) -> GrowthBoundReport:
    """Gamma_T(i) <= m r_T(i+m) for i <= horizon, with m the length of a nontrivial
    element of a normal subgroup contained in H.

    ``witness`` must close at every vertex checked (the whole graph when it is
    finite, the ball of radius horizon + m for an action graph).
    """
    view = completed(subgroup)
    m = len(witness)
    if m == 0:
        raise InvalidInput("witness must be nontrivial")
    if not _closes_everywhere(view, witness.letters, horizon + m):
        raise InvalidInput(f"{witness} does not lie in a normal subgroup contained in H")
    rows = []
    for strategy in strategies:
        t = _transversal_for(view, horizon + m + 1, strategy)
        Gamma = transversal_series(t, horizon)[1].values
        r = ball_expressions(t, horizon + m)
        for i in range(horizon + 1):
            bound = _tidy(m * r[i + m])
            rows.append((strategy, i, Gamma[i], bound, Gamma[i] <= bound))
    return GrowthBoundReport(str(witness), m, rows)


# --- finite-horizon comparison of growth functions --------------------------


@dataclass(frozen=True)
class ProbeResult:
    c_forward: Optional[int]  # least c with f(i) <= c g(ci)
    c_backward: Optional[int]  # least c with g(i) <= c f(ci)
    verdict: str
    horizon: int
    note: str = "finite-horizon probe, not a decision"


def _least_c(f, g, c_max: int, horizon: int, start: int) -> Optional[int]:
    for c in range(1, c_max + 1):
        if all(f[i] <= c * g[min(c * i, horizon)] for i in range(start, horizon + 1)):
            return c
    return None


def equivalence_probe(f, g, c_max: int, start: int = 1) -> ProbeResult:
    """Search c <= c_max with f(i) <= c g(ci) over the shared window, both ways.

    Arguments past the window are clamped to the horizon.  The comparison
    runs over i >= ``start``; at i = 0 the scaled argument is 0 for every c,
    so a series vanishing there could never bound anything.
    """
    f = list(f.values if isinstance(f, GrowthSeries) else f)
    g = list(g.values if isinstance(g, GrowthSeries) else g)
    horizon = min(len(f), len(g)) - 1
    if horizon < start:
        raise InvalidInput("series are shorter than the comparison window")
    fwd = _least_c(f, g, c_max, horizon, start)
    bwd = _least_c(g, f, c_max, horizon, start)
    if fwd and bwd:
        verdict = "equivalent"
    elif fwd:
        verdict = "f⪯g"
    elif bwd:
        verdict = "g⪯f"
    else:
        verdict = "incomparable-at-horizon"
    return ProbeResult(fwd, bwd, verdict, horizon)
