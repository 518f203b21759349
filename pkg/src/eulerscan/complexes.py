"""Embedded geometric simplicial complexes and lower-star machinery.

A complex is a finite set of simplices, stored as strictly sorted tuples of
vertex indices into an (n, d) coordinate array.  Everything in this module is
a pure function of immutable inputs and is safe to call concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import TieError
from .validation import as_direction, as_vertex_array

Simplex = tuple[int, ...]
SimplexSet = tuple[Simplex, ...]

# Height-tie comparison tolerance, relative to the complex diameter.
TIE_RTOL = 1e-10
# Affine-independence threshold on the smallest singular value of the edge
# matrix, relative to the complex diameter.
INDEPENDENCE_RTOL = 1e-9


def close_faces(simplices: Iterable[Iterable[int]]) -> tuple[Simplex, ...]:
    """Downward closure: every nonempty subset of every simplex."""
    closed: set[Simplex] = set()
    for s in simplices:
        s = tuple(sorted(int(i) for i in s))
        for k in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, k))
    return tuple(sorted(closed, key=lambda t: (len(t), t)))


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """A finite geometric simplicial complex embedded in R^d."""

    dimension_ambient: int
    vertices: np.ndarray
    simplices: tuple[Simplex, ...]

    @classmethod
    def from_data(cls, dimension_ambient, vertices, simplices, close=False):
        """Build a complex from raw data.

        Vertex indices within each simplex are sorted; a repeated index
        inside one simplex is rejected outright.  With ``close=True`` the
        simplex list is replaced by its downward closure.  Structural
        invariants beyond that are checked by :func:`validate`, which
        reports rather than raises.
        """
        d = int(dimension_ambient)
        verts = as_vertex_array(vertices, d)
        verts.setflags(write=False)
        normalized: list[Simplex] = []
        for s in simplices:
            tup = tuple(sorted(int(i) for i in s))
            if len(set(tup)) != len(tup):
                raise ValueError(f"simplex {tuple(s)} repeats a vertex index")
            normalized.append(tup)
        if close:
            simps = close_faces(normalized)
        else:
            simps = tuple(sorted(normalized, key=lambda t: (len(t), t)))
        return cls(d, verts, simps)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @cached_property
    def diameter(self) -> float:
        if self.n_vertices <= 1:
            return 0.0
        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2)).max())

    @cached_property
    def max_vertex_norm(self) -> float:
        if self.n_vertices == 0:
            return 0.0
        return float(np.linalg.norm(self.vertices, axis=1).max())

    def star(self, vertex_index: int) -> SimplexSet:
        """All simplices containing the given vertex."""
        i = int(vertex_index)
        return tuple(s for s in self.simplices if i in s)

    def transformed(self, matrix) -> "SimplicialComplex":
        """New complex with vertices mapped through a linear map."""
        m = np.asarray(matrix, dtype=float)
        return SimplicialComplex.from_data(
            m.shape[0], self.vertices @ m.T, self.simplices
        )

    def translated(self, shift) -> "SimplicialComplex":
        shift = np.asarray(shift, dtype=float)
        return SimplicialComplex.from_data(
            self.dimension_ambient, self.vertices + shift, self.simplices
        )

    def scaled(self, factor: float) -> "SimplicialComplex":
        return SimplicialComplex.from_data(
            self.dimension_ambient, self.vertices * float(factor), self.simplices
        )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


def validate(complex: SimplicialComplex) -> ValidationReport:
    """Check the structural invariants of a complex, reporting violations.

    Checks face closure, index ranges, presence of every vertex as a
    0-simplex, duplicate simplices and duplicate vertex coordinates, and
    affine independence of the vertices of each simplex.  The geometric
    intersection condition (simplices meeting in common faces) is the
    caller's responsibility and is not verified here.
    """
    violations: list[str] = []
    n = complex.n_vertices
    simps = complex.simplices

    seen: set[Simplex] = set()
    for s in simps:
        if s in seen:
            violations.append(f"duplicate simplex {s}")
        seen.add(s)
        if any(i < 0 or i >= n for i in s):
            violations.append(f"simplex {s} references out-of-range vertex")

    for i in range(n):
        if (i,) not in seen:
            violations.append(f"vertex {i} missing as a 0-simplex")

    for s in simps:
        if len(s) < 2 or any(i < 0 or i >= n for i in s):
            continue
        for k in range(1, len(s)):
            for face in itertools.combinations(s, k):
                if face not in seen:
                    violations.append(f"missing face {face} of simplex {s}")

    if n > 1:
        diffs = complex.vertices[:, None, :] - complex.vertices[None, :, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        dup = np.argwhere(np.triu(dist == 0.0, k=1))
        for i, j in dup:
            violations.append(f"duplicate vertex coordinates at {int(i)} and {int(j)}")

    scale = max(complex.diameter, 1e-300)
    for s in simps:
        if len(s) < 2 or any(i < 0 or i >= n for i in s):
            continue
        pts = complex.vertices[list(s)]
        edges = pts[1:] - pts[0]
        smin = np.linalg.svd(edges, compute_uv=False).min()
        if smin <= INDEPENDENCE_RTOL * scale:
            violations.append(f"affinely dependent simplex {s}")

    # De-duplicate while preserving order.
    uniq = tuple(dict.fromkeys(violations))
    return ValidationReport(ok=not uniq, violations=uniq)


def heights(complex: SimplicialComplex, direction) -> np.ndarray:
    """Per-vertex heights <v, x_i>, exactly as computed in double precision."""
    v = as_direction(direction, complex.dimension_ambient)
    return complex.vertices @ v


def tie_tolerance(complex: SimplicialComplex, tie_tol: float | None = None) -> float:
    return TIE_RTOL * complex.diameter if tie_tol is None else float(tie_tol)


def find_tie(h: np.ndarray, tol: float) -> tuple[tuple[int, int], float] | None:
    """Return an offending vertex pair if two heights are within ``tol``."""
    if h.shape[0] < 2:
        return None
    order = np.argsort(h, kind="stable")
    hs = h[order]
    gaps = np.diff(hs)
    bad = np.nonzero(gaps <= tol)[0]
    if bad.size:
        i, j = int(order[bad[0]]), int(order[bad[0] + 1])
        return (min(i, j), max(i, j)), float(h[i])
    return None


def _checked_heights(complex, direction, tie_tol):
    h = heights(complex, direction)
    tie = find_tie(h, tie_tolerance(complex, tie_tol))
    if tie is not None:
        raise TieError(*tie)
    return h


def lower_star(
    complex: SimplicialComplex,
    vertex_index: int,
    direction,
    tie_tol: float | None = None,
) -> SimplexSet:
    """Simplices containing the vertex whose maximum-height vertex it is.

    Requires a generic direction: raises :class:`TieError` (naming the
    offending pair) when two vertices share a height.
    """
    h = _checked_heights(complex, direction, tie_tol)
    i = int(vertex_index)
    return tuple(
        s for s in complex.simplices if i in s and max(s, key=h.__getitem__) == i
    )


def lower_star_partition(
    complex: SimplicialComplex, direction, tie_tol: float | None = None
) -> dict[int, SimplexSet]:
    """Partition the simplex list by the owning (maximum-height) vertex."""
    h = _checked_heights(complex, direction, tie_tol)
    owned: dict[int, list[Simplex]] = {}
    for s in complex.simplices:
        owned.setdefault(max(s, key=h.__getitem__), []).append(s)
    return {x: tuple(ss) for x, ss in owned.items()}


def euler_char(simplices: Iterable[Simplex]) -> int:
    """Alternating simplex count; the empty set contributes the empty sum 0."""
    return sum((-1) ** (len(s) - 1) for s in simplices)
