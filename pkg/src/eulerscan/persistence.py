"""Sublevel-set persistence of directional height functions.

Diagrams are computed from the lower-star filtration by the standard
boundary-matrix reduction over the two-element field; orientation never
enters.  The bottleneck distance is solved exactly by binary search over
candidate radii with bipartite feasibility tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complexes import Simplex, SimplicialComplex, _checked_heights
from .curves import EulerCurve


@dataclass(frozen=True)
class DiagramPoint:
    birth: float
    death: float  # math.inf for essential classes
    degree: int
    multiplicity: int = 1


@dataclass(frozen=True)
class PersistenceDiagram:
    """Finite multiset of (birth, death, degree) points with multiplicities."""

    points: tuple[DiagramPoint, ...]

    @classmethod
    def from_triples(cls, triples) -> "PersistenceDiagram":
        counts: dict[tuple[float, float, int], int] = {}
        for b, d, k in triples:
            key = (float(b), float(d), int(k))
            counts[key] = counts.get(key, 0) + 1
        pts = tuple(
            DiagramPoint(b, d, k, m)
            for (b, d, k), m in sorted(counts.items(), key=lambda kv: kv[0])
        )
        return cls(pts)

    def in_degree(self, degree: int) -> "PersistenceDiagram":
        return PersistenceDiagram(
            tuple(p for p in self.points if p.degree == degree)
        )

    def expanded(self) -> list[tuple[float, float, int]]:
        """Multiplicity-expanded list of (birth, death, degree)."""
        out = []
        for p in self.points:
            out.extend([(p.birth, p.death, p.degree)] * p.multiplicity)
        return out

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({p.degree for p in self.points}))

    def total_points(self) -> int:
        return sum(p.multiplicity for p in self.points)


@dataclass(frozen=True)
class Filtration:
    """Simplices with entry heights, faces before cofaces.

    Under the lower-star rule a simplex enters at the height of its maximal
    vertex, so every face precedes (or ties with) its cofaces; ties are
    broken by dimension and then lexicographically for reproducibility.
    """

    dimension_ambient: int
    entries: tuple[tuple[Simplex, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @cached_property
    def index_of(self) -> dict[Simplex, int]:
        return {s: i for i, (s, _) in enumerate(self.entries)}


def lower_star_filtration(
    complex: SimplicialComplex, direction, tie_tol: float | None = None
) -> Filtration:
    """Order the simplices of ``complex`` by their maximal vertex height."""
    h = _checked_heights(complex, direction, tie_tol)
    entries = sorted(
        ((s, float(max(h[i] for i in s))) for s in complex.simplices),
        key=lambda e: (e[1], len(e[0]), e[0]),
    )
    return Filtration(complex.dimension_ambient, tuple(entries))


def persistence_diagrams(filtration: Filtration) -> list[PersistenceDiagram]:
    """Persistence diagrams of a filtration in degrees 0..d-1.

    A pair (i, j) of the reduced boundary matrix gives a feature of degree
    dim(simplex i) born at entry(i) and dying at entry(j); unpaired positive
    simplices give essential classes with infinite death.  Points born and
    dying at the same height are pruned (entry heights of one lower star
    share the exact same float, so the equality test is exact).
    """
    entries = filtration.entries
    index_of = filtration.index_of
    columns: dict[int, set[int]] = {}
    low_to_col: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    positive: set[int] = set()

    for j, (s, _) in enumerate(entries):
        if len(s) == 1:
            chain: set[int] = set()
        else:
            chain = {index_of[f] for f in itertools.combinations(s, len(s) - 1)}
        while chain:
            i = max(chain)
            k = low_to_col.get(i)
            if k is None:
                break
            chain ^= columns[k]
        if chain:
            i = max(chain)
            low_to_col[i] = j
            columns[j] = chain
            pairs.append((i, j))
        else:
            positive.add(j)

    triples = []
    for i, j in pairs:
        birth, death = entries[i][1], entries[j][1]
        if birth != death:
            triples.append((birth, death, len(entries[i][0]) - 1))
    for i in positive:
        if i not in low_to_col:
            triples.append((entries[i][1], math.inf, len(entries[i][0]) - 1))

    max_degree = max(
        filtration.dimension_ambient - 1,
        max((k for _, _, k in triples), default=0),
    )
    full = PersistenceDiagram.from_triples(triples)
    return [full.in_degree(k) for k in range(max_degree + 1)]


def betti_curve(diagram: PersistenceDiagram, degree: int) -> EulerCurve:
    """Step function t -> number of degree-``degree`` points with birth <= t < death."""
    jumps: list[tuple[float, int]] = []
    for p in diagram.points:
        if p.degree != degree:
            continue
        jumps.append((p.birth, p.multiplicity))
        if math.isfinite(p.death):
            jumps.append((p.death, -p.multiplicity))
    return EulerCurve.from_jumps(jumps)


def _linf(p: tuple[float, float], q: tuple[float, float]) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _diag_cost(p: tuple[float, float]) -> float:
    return (p[1] - p[0]) / 2.0


def _feasible(
    A: list[tuple[float, float]], B: list[tuple[float, float]], delta: float
) -> bool:
    """Is there a delta-matching between the finite parts A and B?

    Standard reduction: augment each side with diagonal slots for the other
    side's points; diagonal-to-diagonal edges are free.  A perfect matching
    in the threshold graph is exactly a delta-matching.
    """
    n, m = len(A), len(B)
    size = n + m
    rows: list[int] = []
    cols: list[int] = []
    for i, p in enumerate(A):
        for j, q in enumerate(B):
            if _linf(p, q) <= delta:
                rows.append(i)
                cols.append(j)
        if _diag_cost(p) <= delta:
            for j in range(m, size):
                rows.append(i)
                cols.append(j)
    for i in range(n, size):
        q = B[i - n]
        if _diag_cost(q) <= delta:
            for j in range(m):
                rows.append(i)
                cols.append(j)
        for j in range(m, size):
            rows.append(i)
            cols.append(j)
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size)
    )
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool((match >= 0).all())


def _bottleneck_one_degree(
    A: list[tuple[float, float]], B: list[tuple[float, float]]
) -> float:
    inf_a = sorted(b for b, d in A if math.isinf(d))
    inf_b = sorted(b for b, d in B if math.isinf(d))
    if len(inf_a) != len(inf_b):
        return math.inf
    # Sorted pairing is optimal for the bottleneck cost on the line.
    base = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)
    fin_a = [(b, d) for b, d in A if math.isfinite(d)]
    fin_b = [(b, d) for b, d in B if math.isfinite(d)]
    if not fin_a and not fin_b:
        return base
    candidates = {base}
    candidates.update(_linf(p, q) for p in fin_a for q in fin_b)
    candidates.update(_diag_cost(p) for p in fin_a)
    candidates.update(_diag_cost(q) for q in fin_b)
    values = sorted(c for c in candidates if c >= base)
    lo, hi = 0, len(values) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(fin_a, fin_b, values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


def bottleneck_distance(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Exact bottleneck distance between two diagrams.

    Points of different degrees never match; the result is the maximum of
    the per-degree distances.  Infinite-death points must pair with
    infinite-death points, otherwise the distance is +inf.
    """
    degrees = set(a.degrees) | set(b.degrees)
    best = 0.0
    for k in degrees:
        pa = [(p[0], p[1]) for p in a.in_degree(k).expanded()]
        pb = [(p[0], p[1]) for p in b.in_degree(k).expanded()]
        best = max(best, _bottleneck_one_degree(pa, pb))
    return best
