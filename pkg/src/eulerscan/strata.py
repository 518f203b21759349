"""Hyperplane division of the direction sphere and within-stratum transfer.

Every unordered pair of distinct vertices contributes the wall
{v : v . (x_i - x_j) = 0}.  Off the walls, the sign vector of the pair
differences identifies the height order of the vertices, which is all that
is needed to carry an Euler curve or persistence diagram from one direction
of a stratum to another by relabeling thresholds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._geometry import random_tangent, uniform_directions
from .curves import EulerCurve
from .errors import (
    BadRadius,
    DuplicateVertex,
    ModeError,
    StratumError,
    UnmatchedJump,
    WallError,
)
from .persistence import PersistenceDiagram
from .validation import as_direction, as_vertex_array

StratumLabel = tuple[int, ...]

WALL_RTOL = 1e-9  # wall detection, relative to the vertex-set diameter
MATCH_RTOL = 1e-7  # jump-to-vertex matching, relative to the diameter


@dataclass(frozen=True, eq=False)
class HyperplaneArrangement:
    """Walls of the direction sphere induced by a finite vertex set."""

    points: np.ndarray
    pairs: tuple[tuple[int, int], ...]
    normals: np.ndarray  # unit normals, one per pair, direction of x_i - x_j

    @cached_property
    def differences(self) -> np.ndarray:
        if not self.pairs:
            return np.zeros((0, self.points.shape[1]))
        return np.array([self.points[i] - self.points[j] for i, j in self.pairs])

    @cached_property
    def diameter(self) -> float:
        if self.points.shape[0] <= 1:
            return 0.0
        diffs = self.points[:, None, :] - self.points[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=2)).max())

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def wall_tolerance(self, wall_tol: float | None = None) -> float:
        return WALL_RTOL * self.diameter if wall_tol is None else float(wall_tol)

    def match_tolerance(self, match_tol: float | None = None) -> float:
        return MATCH_RTOL * self.diameter if match_tol is None else float(match_tol)


@dataclass(frozen=True, eq=False)
class DirectionNet:
    """Directions covering the sphere with multiplicity.

    Every ball of radius ``radius`` contains at least ``multiplicity`` of
    the directions.  ``groups``, when present, records the index tuples of
    the constituent-net copies of each base point (the natural cap groups
    used by vertex detection).
    """

    directions: np.ndarray
    radius: float
    multiplicity: int
    groups: tuple[tuple[int, ...], ...] | None = None

    def __len__(self) -> int:
        return self.directions.shape[0]


def arrangement(X) -> HyperplaneArrangement:
    """Build the wall arrangement of a vertex set (one wall per pair)."""
    pts = as_vertex_array(X)
    n = pts.shape[0]
    pairs: list[tuple[int, int]] = []
    normals: list[np.ndarray] = []
    for i, j in itertools.combinations(range(n), 2):
        diff = pts[i] - pts[j]
        norm = float(np.linalg.norm(diff))
        if norm == 0.0:
            raise DuplicateVertex(f"vertices {i} and {j} coincide")
        pairs.append((i, j))
        normals.append(diff / norm)
    normal_arr = np.array(normals) if normals else np.zeros((0, pts.shape[1]))
    pts = pts.copy()
    pts.setflags(write=False)
    return HyperplaneArrangement(pts, tuple(pairs), normal_arr)


def stratum_label(
    arr: HyperplaneArrangement, direction, wall_tol: float | None = None
) -> StratumLabel:
    """Sign vector of v against every pair difference; 0 marks wall incidence."""
    v = as_direction(direction, arr.dimension)
    tol = arr.wall_tolerance(wall_tol)
    if not arr.pairs:
        return ()
    dots = arr.differences @ v
    return tuple(0 if abs(x) <= tol else (1 if x > 0 else -1) for x in dots)


def same_stratum(
    arr: HyperplaneArrangement, v, w, wall_tol: float | None = None
) -> bool:
    """Equal nonzero sign vectors certify an identical vertex height order."""
    lv = stratum_label(arr, v, wall_tol)
    lw = stratum_label(arr, w, wall_tol)
    if 0 in lv or 0 in lw:
        raise WallError("direction lies on a wall; stratum membership undefined")
    return lv == lw


def _match_thresholds(
    thresholds, vertex_heights: np.ndarray, tol: float
) -> list[int]:
    """Match each jump threshold to the unique vertex at that height."""
    matched = []
    for t in thresholds:
        gaps = np.abs(vertex_heights - t)
        hits = np.nonzero(gaps <= tol)[0]
        if hits.size == 0:
            raise UnmatchedJump(f"jump at {t!r} matches no vertex height")
        if hits.size > 1:
            raise UnmatchedJump(f"jump at {t!r} matches several vertex heights")
        matched.append(int(hits[0]))
    return matched


def transfer_curve(
    curve_v: EulerCurve,
    v,
    w,
    arr: HyperplaneArrangement,
    match_tol: float | None = None,
    wall_tol: float | None = None,
) -> EulerCurve:
    """Deduce the Euler curve at w from the curve at v within one stratum.

    Same-stratum directions see the vertices in the same height order, so
    the curve at w is the curve at v with each jump threshold v . x
    relabeled to w . x; the deltas are untouched.
    """
    if not same_stratum(arr, v, w, wall_tol):
        raise StratumError("directions lie in different strata")
    v = as_direction(v, arr.dimension)
    w = as_direction(w, arr.dimension)
    tol = arr.match_tolerance(match_tol)
    matched = _match_thresholds(curve_v.thresholds, arr.points @ v, tol)
    new_heights = arr.points @ w
    return EulerCurve.from_jumps(
        (float(new_heights[i]), delta)
        for i, delta in zip(matched, curve_v.deltas)
    )


def transfer_diagram(
    diagram_v: PersistenceDiagram,
    v,
    w,
    arr: HyperplaneArrangement,
    match_tol: float | None = None,
    wall_tol: float | None = None,
) -> PersistenceDiagram:
    """Transfer a persistence diagram within a stratum.

    Births and deaths are relabeled coordinatewise through the vertex-height
    correspondence; infinite deaths stay infinite.
    """
    if not same_stratum(arr, v, w, wall_tol):
        raise StratumError("directions lie in different strata")
    v = as_direction(v, arr.dimension)
    w = as_direction(w, arr.dimension)
    tol = arr.match_tolerance(match_tol)
    old_heights = arr.points @ v
    new_heights = arr.points @ w

    def remap(value: float) -> float:
        if math.isinf(value):
            return value
        (i,) = _match_thresholds([value], old_heights, tol)
        return float(new_heights[i])

    triples = [
        (remap(b), remap(d), k) for b, d, k in diagram_v.expanded()
    ]
    return PersistenceDiagram.from_triples(triples)


def _wall_angles_2d(arr: HyperplaneArrangement, merge_tol: float = 1e-12):
    angles: list[float] = []
    for n in arr.normals:
        base = math.atan2(n[1], n[0])
        for offset in (math.pi / 2, 3 * math.pi / 2):
            angles.append((base + offset) % (2 * math.pi))
    angles.sort()
    merged: list[float] = []
    for a in angles:
        if not merged or a - merged[-1] > merge_tol:
            merged.append(a)
    if len(merged) > 1 and (merged[0] + 2 * math.pi) - merged[-1] <= merge_tol:
        merged.pop()
    return merged


def strata_arcs_2d(
    arr: HyperplaneArrangement,
) -> list[tuple[float, float]]:
    """Open angular arcs of the complement of the walls on the circle."""
    if arr.dimension != 2:
        raise ModeError("arc enumeration requires ambient dimension 2")
    angles = _wall_angles_2d(arr)
    if not angles:
        return [(0.0, 2 * math.pi)]
    arcs = list(zip(angles, angles[1:]))
    arcs.append((angles[-1], angles[0] + 2 * math.pi))
    return arcs


def strata_representatives(
    arr: HyperplaneArrangement,
    mode: str = "exact2d",
    seed: int = 0,
    m_stall: int | None = None,
    wall_tol: float | None = None,
) -> list[tuple[StratumLabel, np.ndarray]]:
    """One labeled direction per top-dimensional stratum.

    ``exact2d`` sorts the wall angles on the circle and returns arc
    midpoints, which is complete by construction (d = 2 only).  ``sampled``
    draws uniform directions, de-duplicates by label, and stops after a
    stall of consecutive non-new labels (any d; complete only with high
    probability).
    """
    if mode == "exact2d":
        if arr.dimension != 2:
            raise ModeError("exact2d enumeration requires ambient dimension 2")
        if not arr.pairs:
            return [((), np.array([1.0, 0.0]))]
        reps = []
        for lo, hi in strata_arcs_2d(arr):
            # Midpoint first; fall back to quarter points if a merged
            # near-duplicate wall leaves the midpoint within wall tolerance.
            for frac in (0.5, 0.25, 0.75):
                theta = lo + frac * (hi - lo)
                v = np.array([math.cos(theta), math.sin(theta)])
                label = stratum_label(arr, v, wall_tol)
                if 0 not in label:
                    reps.append((label, v))
                    break
            else:
                raise ModeError(f"arc ({lo}, {hi}) has no wall-free interior point")
        return reps
    if mode == "sampled":
        rng = np.random.default_rng(seed)
        if not arr.pairs:
            return [((), uniform_directions(1, arr.dimension, rng)[0])]
        seen: dict[StratumLabel, np.ndarray] = {}
        stall = 0
        while True:
            limit = m_stall if m_stall is not None else 50 * max(1, len(seen))
            if stall >= limit:
                break
            v = uniform_directions(1, arr.dimension, rng)[0]
            label = stratum_label(arr, v, wall_tol)
            if 0 in label:
                continue
            if label in seen:
                stall += 1
            else:
                seen[label] = v
                stall = 0
        return list(seen.items())
    raise ModeError(f"unknown representative mode {mode!r}")


def _coverage_repair(
    points: list[np.ndarray],
    radius: float,
    dim: int,
    rng: np.random.Generator,
    batch: int = 4096,
) -> list[np.ndarray]:
    """Add sampled directions until two clean Monte Carlo batches pass."""
    cos_r = math.cos(radius)
    clean = 0
    while clean < 2:
        samples = uniform_directions(batch, dim, rng)
        net = np.array(points)
        maxdot = (samples @ net.T).max(axis=1)
        uncovered = np.nonzero(maxdot < cos_r)[0]
        if uncovered.size == 0:
            clean += 1
            continue
        clean = 0
        order = uncovered[np.argsort(maxdot[uncovered])]
        for idx in order:
            candidate = samples[idx]
            if max(float(candidate @ p) for p in points) < cos_r:
                points.append(candidate)
    return points


def _base_net(dim: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """A radius-net of the sphere; construction varies with dimension."""
    if dim == 2:
        m = math.ceil(2 * math.pi / radius)
        angles = 2 * math.pi * np.arange(m) / m
        return np.column_stack([np.cos(angles), np.sin(angles)])
    if dim == 3:
        n = max(8, math.ceil((3.0 / radius) ** 2))
        k = np.arange(n)
        z = 1.0 - 2.0 * (k + 0.5) / n
        r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        golden = math.pi * (3.0 - math.sqrt(5.0))
        theta = golden * k
        pts = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
        return np.array(_coverage_repair(list(pts), radius, dim, rng))
    seeds = list(np.vstack([np.eye(dim), -np.eye(dim)]))
    return np.array(_coverage_repair(seeds, radius, dim, rng))


def delta_net(d: int, delta: float) -> DirectionNet:
    """Directions whose delta-balls cover S^{d-1}.

    Built at the tighter radius 2*delta/3, so membership in every
    delta-ball holds with slack; the construction is deterministic for a
    given (d, delta).
    """
    if not 0 < delta < math.pi / 2:
        raise BadRadius(f"net radius must lie in (0, pi/2), got {delta!r}")
    if d < 2:
        raise BadRadius("the direction sphere requires ambient dimension >= 2")
    inner = 2.0 * delta / 3.0
    rng = np.random.default_rng(hash((int(d), round(delta * 1e12))) % 2**32)
    pts = _base_net(d, inner, rng)
    return DirectionNet(pts, float(delta), 1)


def delta_C_net(d: int, delta: float, C: int, seed: int = 0) -> DirectionNet:
    """Union of C independently jittered copies of a delta-net.

    Each copy is rotated by a random angle in [delta/20, delta/10], small
    enough to preserve coverage and large enough to keep the copies of one
    base point well separated; the jitter also puts the directions into
    general position.  Every delta-ball then meets the union in at least C
    points.
    """
    if C < 1:
        raise BadRadius("multiplicity C must be at least 1")
    base = delta_net(d, delta)
    rng = np.random.default_rng(seed)
    copies = []
    for _ in range(C):
        jittered = np.empty_like(base.directions)
        for i, p in enumerate(base.directions):
            t = random_tangent(p, rng)
            theta = rng.uniform(delta / 20.0, delta / 10.0)
            jittered[i] = math.cos(theta) * p + math.sin(theta) * t
        copies.append(jittered)
    directions = np.vstack(copies)
    n_base = base.directions.shape[0]
    groups = tuple(
        tuple(c * n_base + k for c in range(C)) for k in range(n_base)
    )
    return DirectionNet(directions, float(delta), int(C), groups)
