"""Finite simplicial complexes, spanning subcomplexes and bouquet counts.

Simplices are sorted tuples of integer vertex ids.  A complex is given by its
principal simplices and closed under taking faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from .errors import InvalidInput


def _closure(simplices: Iterable[Sequence[int]]) -> frozenset:
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        if len(set(s)) != len(s) or not s:
            raise InvalidInput(f"bad simplex {s}")
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return frozenset(out)


class _Cells:
    """Shared queries over a face-closed set of simplices."""

    simplices: frozenset

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def faces(self, k: int) -> list[tuple]:
        return sorted(s for s in self.simplices if len(s) == k + 1)

    def count(self, k: int) -> int:
        return sum(1 for s in self.simplices if len(s) == k + 1)

    def principal(self) -> list[tuple]:
        """Simplices that are not a proper face of another simplex."""
        covered = set()
        for s in self.simplices:
            if len(s) > 1:
                covered.update(combinations(s, len(s) - 1))
        return sorted((s for s in self.simplices if s not in covered), key=lambda s: (len(s), s))

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.simplices


@dataclass(frozen=True)
class SimplicialComplex(_Cells):
    simplices: frozenset

    @classmethod
    def from_principal(cls, simplices: Iterable[Sequence[int]]) -> "SimplicialComplex":
        return cls(_closure(simplices))

    @classmethod
    def from_json(cls, data) -> "SimplicialComplex":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            c = cls.from_principal(data["principal"])
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed complex: {exc}") from exc
        if "dim" in data and data["dim"] != c.dim:
            raise InvalidInput(f"declared dimension {data['dim']} but principal simplices give {c.dim}")
        return c

    def to_json(self) -> dict:
        return {"dim": self.dim, "principal": [list(s) for s in self.principal()]}

    def sub(self, simplices: Iterable[Sequence[int]]) -> "SubcomplexRef":
        """Subcomplex generated by the given simplices."""
        return SubcomplexRef(self, _closure(simplices))

    def whole(self) -> "SubcomplexRef":
        return SubcomplexRef(self, self.simplices)

    def without(self, removed: Iterable[Sequence[int]]) -> "SubcomplexRef":
        """Drop the given simplices (and nothing else); they must not be proper faces of kept ones."""
        gone = {tuple(sorted(s)) for s in removed}
        return SubcomplexRef(self, self.simplices - gone)


@dataclass(frozen=True)
class SubcomplexRef(_Cells):
    owner: SimplicialComplex
    simplices: frozenset

    def __post_init__(self):
        if not self.simplices <= self.owner.simplices:
            raise InvalidInput("subcomplex contains simplices outside its owner")
        for s in self.simplices:
            if len(s) > 1 and any(f not in self.simplices for f in combinations(s, len(s) - 1)):
                raise InvalidInput(f"subcomplex is not closed under faces at {s}")

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.simplices)

    def boundary_faces(self, k: int) -> list[tuple]:
        """k-simplices of D that are faces of owner simplices outside D."""
        out = set()
        for s in self.owner.simplices - self.simplices:
            for f in combinations(s, k + 1):
                if f in self.simplices:
                    out.add(f)
        return sorted(out)


@dataclass(frozen=True)
class Filtration:
    steps: tuple  # SubcomplexRefs of a common owner

    def liminf(self) -> SubcomplexRef:
        """Simplices eventually in every later step."""
        if not self.steps:
            raise InvalidInput("empty filtration")
        owner = self.steps[0].owner
        out = set()
        for i in range(len(self.steps)):
            common = set(self.steps[i].simplices)
            for later in self.steps[i + 1:]:
                common &= later.simplices
            out |= common
        return SubcomplexRef(owner, frozenset(out))


def degree(c: _Cells, sigma: Sequence[int]) -> int:
    """Number of top-dimensional simplices of c containing the codimension-one simplex sigma."""
    sigma = tuple(sorted(sigma))
    if sigma not in c.simplices:
        raise InvalidInput(f"{sigma} is not a simplex of the complex")
    d = c.dim
    if len(sigma) != d:
        raise InvalidInput(f"{sigma} is not a ({d - 1})-simplex")
    s = set(sigma)
    return sum(1 for t in c.simplices if len(t) == d + 1 and s <= set(t))


def _degrees(c: _Cells, d: int) -> dict[tuple, int]:
    deg = {f: 0 for f in c.simplices if len(f) == d}
    for t in c.simplices:
        if len(t) == d + 1:
            for f in combinations(t, d):
                deg[f] += 1
    return deg


def is_n_regular(c: _Cells, n: int) -> bool:
    return all(v == n for v in _degrees(c, c.dim).values())


def regularity(c: _Cells) -> Optional[int]:
    """The common degree of all codimension-one simplices, or None."""
    values = set(_degrees(c, c.dim).values())
    return values.pop() if len(values) == 1 else None


def is_spanning_subcomplex(d: SubcomplexRef, c: Optional[SimplicialComplex] = None) -> bool:
    """(i) D contains the codimension-one skeleton of C; (ii) every principal simplex of D is principal in C."""
    c = d.owner if c is None else c
    top = c.dim
    if any(s not in d.simplices for s in c.simplices if len(s) <= top):
        return False
    principal = set(c.principal())
    return all(s in principal for s in d.principal())


# --- homology and collapses -------------------------------------------------


def _boundary_matrix(c: _Cells, k: int) -> Matrix:
    rows = {s: i for i, s in enumerate(c.faces(k - 1))}
    cols = c.faces(k)
    m = Matrix.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        for i in range(len(s)):
            m[rows[s[:i] + s[i + 1:]], j] = (-1) ** i
    return m


def reduced_homology(c: _Cells) -> list[tuple[int, list[int]]]:
    """(free rank, torsion coefficients) of the reduced integral homology in each dimension."""
    top = c.dim
    ranks, torsion = {}, {}
    for k in range(0, top + 2):
        if k == 0:
            # reduced: augmentation map to Z
            m = Matrix.ones(1, c.count(0)) if c.count(0) else Matrix.zeros(1, 0)
        else:
            m = _boundary_matrix(c, k)
        if 0 in m.shape:
            ranks[k], torsion[k] = 0, []
            continue
        factors = [abs(int(f)) for f in invariant_factors(m, domain=ZZ) if f != 0]
        ranks[k] = len(factors)
        torsion[k] = [f for f in factors if f != 1]
    out = []
    for k in range(0, top + 1):
        free = c.count(k) - ranks[k] - ranks[k + 1]
        out.append((free, torsion[k + 1]))
    return out


def collapse(c: _Cells) -> frozenset:
    """Greedy elementary collapses, lowest-dimensional free face first; returns what is left."""
    cells = set(c.simplices)
    while True:
        cofaces: dict[tuple, list[tuple]] = {}
        for s in cells:
            if len(s) > 1:
                for f in combinations(s, len(s) - 1):
                    cofaces.setdefault(f, []).append(s)
        free = sorted((f for f, cf in cofaces.items() if len(cf) == 1 and f in cells),
                      key=lambda f: (len(f), f))
        if not free:
            return frozenset(cells)
        f = free[0]
        cells.discard(f)
        cells.discard(cofaces[f][0])


COLLAPSIBLE = "collapsible"
INCONCLUSIVE = "homology-trivial-but-uncollapsed"
NOT_CONTRACTIBLE = "not-contractible"


@dataclass(frozen=True)
class Certificate:
    verdict: str
    remaining: int  # simplices left after greedy collapsing
    homology: Optional[tuple]  # skipped for collapsible input unless asked for


def contractibility_certificate(d: _Cells, with_homology: bool = False) -> Certificate:
    left = collapse(d)
    homology = None
    if len(left) != 1 or with_homology:
        homology = tuple(reduced_homology(d))
    if len(left) == 1:
        verdict = COLLAPSIBLE
    elif all(free == 0 and not tors for free, tors in homology):
        verdict = INCONCLUSIVE
    else:
        verdict = NOT_CONTRACTIBLE
    return Certificate(verdict, len(left), homology)


# --- bouquet counts ---------------------------------------------------------


def _check_bouquet_input(c: SimplicialComplex, d: SubcomplexRef) -> None:
    if not is_spanning_subcomplex(d, c):
        raise InvalidInput("D is not a spanning subcomplex of C")
    if contractibility_certificate(d).verdict == NOT_CONTRACTIBLE:
        raise InvalidInput("D is not contractible")


def bouquet_count_direct(c: SimplicialComplex, d: SubcomplexRef) -> int:
    """Top-dimensional simplices of C missing from D."""
    _check_bouquet_input(c, d)
    top = c.dim
    return c.count(top) - d.count(top)


@dataclass(frozen=True)
class FormulaResult:
    values: tuple  # one exact value per filtration step
    limit: object
    integral: bool


def bouquet_count_formula(c: SimplicialComplex, d: SubcomplexRef, filtration: Optional[Filtration] = None) -> FormulaResult:
    """(n b_{d-1}(D_i) - deg_{<D - D_i>} F^{d-1}(dD_i)) / (d+1) - b_d(D_i) along a filtration of D."""
    n = regularity(c)
    if n is None:
        raise InvalidInput("C is not regular")
    _check_bouquet_input(c, d)
    top = c.dim
    steps = filtration.steps if filtration else (d,)
    values = []
    for di in steps:
        extra = d.simplices - di.simplices
        rest_deg = _degrees(SubcomplexRef(c, _closure(extra)), top) if extra else {}
        # faces of D_i not on its frontier have degree 0 in <D - D_i>
        correction = sum(rest_deg.get(f, 0) for f in di.faces(top - 1))
        values.append(Fraction(n * di.count(top - 1) - correction, top + 1) - di.count(top))
    limit = values[-1]
    integral = limit.denominator == 1
    if not integral:
        raise InvalidInput(f"formula stabilized at the non-integer {limit}")
    return FormulaResult(tuple(_tidy(v) for v in values), int(limit), integral)


def _tidy(v: Fraction):
    return int(v) if v.denominator == 1 else v


def euler_characteristic(x: _Cells, up_to: Optional[int] = None) -> int:
    top = x.dim if up_to is None else up_to
    return sum((-1) ** k * x.count(k) for k in range(top + 1))


# --- standard examples ------------------------------------------------------


def simplex(d: int) -> SimplicialComplex:
    return SimplicialComplex.from_principal([tuple(range(d + 1))])


def simplex_boundary(d: int) -> SimplicialComplex:
    return SimplicialComplex.from_principal(combinations(range(d + 2), d + 1))


def octahedron_boundary() -> SimplicialComplex:
    return SimplicialComplex.from_principal(
        (x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)
    )


def icosahedron_boundary() -> SimplicialComplex:
    top, bottom = 0, 11
    upper, lower = [1, 2, 3, 4, 5], [6, 7, 8, 9, 10]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces += [(top, upper[i], upper[j]), (bottom, lower[i], lower[j]),
                  (upper[i], upper[j], lower[i]), (lower[i], lower[j], upper[j])]
    return SimplicialComplex.from_principal(faces)


def graph_complex(edges: Iterable[tuple[int, int]]) -> SimplicialComplex:
    return SimplicialComplex.from_principal(edges)
