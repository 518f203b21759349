"""Euler curves and the directional Euler characteristic transform.

An Euler curve is the right-continuous integer step function
t -> chi(K intersect {x . v <= t}), stored exactly as a sorted jump list.
The direct computation groups simplices into per-vertex lower stars; the
brute-force path recounts the whole sublevel complex at every candidate
threshold and serves as an independent oracle.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .complexes import (
    SimplicialComplex,
    _checked_heights,
    euler_char,
    lower_star_partition,
    tie_tolerance,
)
from .errors import NonGenericSlice
from .validation import check_window


@dataclass(frozen=True)
class EulerCurve:
    """Integer step function as a sorted list of (threshold, delta) jumps.

    ``value(t)`` is the sum of deltas at thresholds <= t (right-continuous);
    the value below all thresholds is 0 and the terminal value equals the
    sum of all deltas.
    """

    thresholds: tuple[float, ...]
    deltas: tuple[int, ...]

    def __post_init__(self):
        if len(self.thresholds) != len(self.deltas):
            raise ValueError("thresholds and deltas must have equal length")
        if any(d == 0 for d in self.deltas):
            raise ValueError("zero deltas must be pruned")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")

    @classmethod
    def from_jumps(cls, jumps: Iterable[tuple[float, int]]) -> "EulerCurve":
        """Merge jumps at exactly-equal thresholds and prune zero deltas."""
        acc: dict[float, int] = {}
        for t, delta in jumps:
            t = float(t)
            acc[t] = acc.get(t, 0) + int(delta)
        pairs = sorted((t, d) for t, d in acc.items() if d != 0)
        return cls(tuple(t for t, _ in pairs), tuple(d for _, d in pairs))

    @cached_property
    def _cumulative(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.deltas, initial=0))

    @property
    def terminal_value(self) -> int:
        return self._cumulative[-1]

    @property
    def n_jumps(self) -> int:
        return len(self.thresholds)

    def value(self, t: float) -> int:
        return self._cumulative[bisect_right(self.thresholds, t)]

    def jumps(self) -> tuple[tuple[float, int], ...]:
        return tuple(zip(self.thresholds, self.deltas))


@dataclass(frozen=True)
class EctSample:
    """Directions paired with their Euler curves.

    ``provenance`` records how the curves were produced: ``"direct"``
    (computed from a known complex), ``"oracle"`` (answers of a query
    oracle) or ``"transferred"`` (deduced by stratum transfer).
    """

    directions: np.ndarray
    curves: tuple[EulerCurve, ...]
    provenance: str = "direct"

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim != 2 or dirs.shape[0] != len(self.curves):
            raise ValueError("one direction per curve is required")
        if len({tuple(row) for row in dirs}) != dirs.shape[0]:
            raise ValueError("directions must be pairwise distinct")
        object.__setattr__(self, "directions", dirs)

    def __len__(self) -> int:
        return len(self.curves)


def ect_curve(
    complex: SimplicialComplex, direction, tie_tol: float | None = None
) -> EulerCurve:
    """Euler curve via per-vertex lower stars.

    Each vertex x contributes a jump of chi(lower star of x) at its height;
    zero contributions are not stored.  Raises :class:`TieError` for
    non-generic directions.
    """
    h = _checked_heights(complex, direction, tie_tol)
    part = lower_star_partition(complex, direction, tie_tol)
    return EulerCurve.from_jumps(
        (float(h[x]), euler_char(owned)) for x, owned in part.items()
    )


def brute_force_curve(
    complex: SimplicialComplex, direction, tie_tol: float | None = None
) -> EulerCurve:
    """Independent oracle for :func:`ect_curve`.

    Recounts chi of the maximal subcomplex {s : max vertex height of s <= t}
    at every vertex height and checks constancy at interleaved midpoints; no
    per-vertex grouping is involved.
    """
    h = _checked_heights(complex, direction, tie_tol)
    signs = np.array([(-1) ** (len(s) - 1) for s in complex.simplices], dtype=int)
    simplex_max = np.array(
        [max(h[i] for i in s) for s in complex.simplices], dtype=float
    )

    def chi_at(t: float) -> int:
        if signs.size == 0:
            return 0
        return int(signs[simplex_max <= t].sum())

    thresholds = np.sort(h)
    if chi_at(thresholds[0] - 1.0 - abs(thresholds[0])) != 0:
        raise AssertionError("sublevel complex below all heights is nonempty")
    values = [chi_at(t) for t in thresholds]
    for i in range(len(thresholds) - 1):
        mid = 0.5 * (thresholds[i] + thresholds[i + 1])
        if chi_at(mid) != values[i]:
            raise AssertionError("sublevel count changed away from a vertex height")
    jumps = []
    previous = 0
    for t, val in zip(thresholds, values):
        jumps.append((float(t), val - previous))
        previous = val
    return EulerCurve.from_jumps(jumps)


def curve_value(curve: EulerCurve, t: float) -> int:
    """Value of the step function at t (jumps at t included)."""
    return curve.value(t)


def slice_euler_char(
    complex: SimplicialComplex, direction, t: float, tie_tol: float | None = None
) -> int:
    """Euler characteristic of the hyperplane slice K intersect {x . v = t}.

    Combinatorial evaluation: every simplex whose vertex heights strictly
    straddle t meets the hyperplane in an open cell of one dimension less,
    contributing (-1)^(dim - 1).  Requires a generic level: raises
    :class:`NonGenericSlice` when t collides with a vertex height.  (The
    inclusion-exclusion identity evaluated from two opposite Euler curves
    works for every t and is checked against this path in the tests.)
    """
    from .complexes import heights

    h = heights(complex, direction)
    tol = tie_tolerance(complex, tie_tol)
    if h.size and np.min(np.abs(h - t)) <= tol:
        offender = int(np.argmin(np.abs(h - t)))
        raise NonGenericSlice(f"slice level {t!r} hits vertex {offender}")
    total = 0
    for s in complex.simplices:
        hs = [h[i] for i in s]
        if min(hs) < t < max(hs):
            total += (-1) ** (len(s) - 2)
    return total


def lp_distance(
    a: EulerCurve,
    b: EulerCurve,
    p: float = 1.0,
    window: tuple[float, float] | None = None,
) -> float:
    """L^p distance between two curves over a bounded window.

    The integrand is piecewise constant on the merged jump grid, so the
    integral is computed exactly.  The default window is [-R, R] with R one
    more than the largest threshold magnitude of either curve.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if window is None:
        bound = max((abs(t) for t in a.thresholds + b.thresholds), default=0.0)
        window = (-bound - 1.0, bound + 1.0)
    lo, hi = check_window(window)
    grid = [lo]
    grid.extend(t for t in sorted(set(a.thresholds) | set(b.thresholds)) if lo < t < hi)
    grid.append(hi)
    total = 0.0
    for s, s_next in zip(grid, grid[1:]):
        diff = abs(a.value(s) - b.value(s))
        if diff:
            total += float(diff) ** p * (s_next - s)
    return total ** (1.0 / p)


def curves_equal(
    a: EulerCurve, b: EulerCurve, threshold_tol: float = 0.0
) -> bool:
    """Jump-list equality: exact deltas, thresholds within ``threshold_tol``."""
    if a.deltas != b.deltas:
        return False
    return all(
        abs(s - t) <= threshold_tol for s, t in zip(a.thresholds, b.thresholds)
    )
