"""Intersections of finitely generated subgroups via the product of their graphs."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .coset_graph import CosetGraph, build_from_generators, core, cyclomatic_rank
from .errors import BudgetExceeded, InvalidInput
from .growth import cogrowth, rank_growth
from .words import Word, signed_letters


@dataclass(frozen=True)
class FiberProduct:
    graph: CosetGraph  # base component of the product, before core reduction
    provenance: dict  # product vertex -> (vertex of g1, vertex of g2)


def fiber_product(g1: CosetGraph, g2: CosetGraph) -> FiberProduct:
    if g1.rank != g2.rank:
        raise InvalidInput(f"alphabet mismatch: rank {g1.rank} vs rank {g2.rank}")
    start = (g1.base, g2.base)
    index = {start: 0}
    order = [start]
    edges = []
    queue = deque([start])
    letters = signed_letters(g1.rank)
    while queue:
        pair = queue.popleft()
        u1, u2 = pair
        for x in letters:
            v1, v2 = g1.step(u1, x), g2.step(u2, x)
            if v1 is None or v2 is None:
                continue
            target = (v1, v2)
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            if x > 0:
                edges.append((index[pair], x, index[target]))
    graph = CosetGraph(g1.rank, len(order), edges)
    return FiberProduct(graph, dict(enumerate(order)))


def intersect(g1: CosetGraph, g2: CosetGraph) -> CosetGraph:
    """Core graph of H1 ∩ H2."""
    return core(fiber_product(g1, g2).graph)


def random_subgroup(rng: random.Random, rank: int = 2, max_gens: int = 4, max_length: int = 8) -> tuple[CosetGraph, list[Word]]:
    """Fold 1..max_gens uniformly random nontrivial reduced words of length <= max_length."""
    gens = [random_word(rng, rank, rng.randint(1, max_length)) for _ in range(rng.randint(1, max_gens))]
    return build_from_generators(rank, gens), gens


def random_word(rng: random.Random, rank: int, length: int) -> Word:
    letters = signed_letters(rank)
    out: list[int] = []
    while len(out) < length:
        x = rng.choice(letters)
        if not out or out[-1] != -x:
            out.append(x)
    return Word(tuple(out), rank)


@dataclass
class ProductCheck:
    rows: list  # (i, Gamma_H(i), Gamma_1(i) * Gamma_2(i), holds)

    @property
    def holds(self) -> bool:
        return all(row[-1] for row in self.rows)


def cogrowth_product_check(g1: CosetGraph, g2: CosetGraph, horizon: int) -> ProductCheck:
    """Gamma of H1 ∩ H2 against the product of the two cogrowths."""
    h = intersect(g1, g2)
    a, b, c = cogrowth(h, horizon), cogrowth(g1, horizon), cogrowth(g2, horizon)
    rows = [(i, a[i], b[i] * c[i], a[i] <= b[i] * c[i]) for i in range(horizon + 1)]
    return ProductCheck(rows)


def literal_bound(rk1: int, rk2: int) -> int:
    return 1 + 2 * (rk1 - 1) * (rk2 - 1) - min(rk1, rk2)


def reference_bound(h: int, k: int) -> int:
    return 1 + 2 * (h - 1) * (k - 1) - min(h - 1, k - 1)


@dataclass
class BurnsAudit:
    rank1: int
    rank2: int
    rank: int  # of the intersection
    reference: Optional[int]  # None when a factor is trivial
    rows: list  # (i, rk_H(i), literal bound, literal holds, reference holds)
    partial: bool

    @property
    def reference_holds(self) -> bool:
        return self.reference is None or self.rank <= self.reference

    def table(self) -> str:
        lines = ["i,rk_H,literal_bound,reference_bound,literal,reference"]
        ref = "" if self.reference is None else self.reference
        for i, rk, lit, lit_ok, ref_ok in self.rows:
            lines.append(f"{i},{rk},{lit},{ref},{_word(lit_ok)},{_word(ref_ok)}")
        return "\n".join(lines) + "\n"


def _word(ok: Optional[bool]) -> str:
    return "" if ok is None else ("pass" if ok else "fail")


def burns_audit(g1: CosetGraph, g2: CosetGraph, horizon: int, budget: Optional[int] = None) -> BurnsAudit:
    """Compare rank growth of H1 ∩ H2 with two rank bounds.

    The literal bound uses min(rk1, rk2) on the rank-growth values at each
    radius; the reference bound is 1 + 2(h-1)(k-1) - min(h-1, k-1) in the full
    ranks h, k >= 1.  Neither is asserted: each row just records pass/fail.
    """
    h = intersect(g1, g2)
    r1, r2, r = cyclomatic_rank(g1), cyclomatic_rank(g2), cyclomatic_rank(h)
    ref = reference_bound(r1, r2) if r1 >= 1 and r2 >= 1 else None
    rows, partial = [], False
    for i in range(horizon + 1):
        try:
            a, b, c = rank_growth(h, i, budget), rank_growth(g1, i, budget), rank_growth(g2, i, budget)
        except BudgetExceeded:
            partial = True
            break
        lit = literal_bound(b, c)
        rows.append((i, a, lit, a <= lit, None if ref is None else a <= ref))
    return BurnsAudit(r1, r2, r, ref, rows, partial)
