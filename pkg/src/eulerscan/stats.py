"""Alignment-free shape comparison through distributions of Euler curves.

Uniform directions push the sphere's measure forward to a distribution on
curve space; that distribution is invariant under simultaneous rotation or
reflection of the shape, so two congruent shapes in different poses produce
statistically indistinguishable curve samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._geometry import uniform_directions
from .complexes import SimplicialComplex
from .curves import EulerCurve, ect_curve, lp_distance
from .errors import CostCapExceeded, SizeMismatch, TieError

ASSIGNMENT_SIZE_CAP = 512


@dataclass(frozen=True)
class CurveSample:
    """Euler curves at i.i.d. uniform directions."""

    curves: tuple[EulerCurve, ...]
    n: int
    seed: int

    def __post_init__(self):
        if self.n != len(self.curves) or self.n < 1:
            raise ValueError("sample size must match the number of curves")


def sample_pushforward(
    complex: SimplicialComplex, n: int, seed: int
) -> CurveSample:
    """Draw ``n`` curves at uniform directions; tie directions are redrawn."""
    if n < 1:
        raise ValueError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    curves: list[EulerCurve] = []
    while len(curves) < n:
        v = uniform_directions(1, complex.dimension_ambient, rng)[0]
        try:
            curves.append(ect_curve(complex, v))
        except TieError:
            continue
    return CurveSample(tuple(curves), int(n), int(seed))


def empirical_distance(
    a: CurveSample,
    b: CurveSample,
    p: float = 1.0,
    window: tuple[float, float] | None = None,
) -> float:
    """Empirical 1-Wasserstein distance between two curve samples.

    Ground metric: L^p curve distance over ``window``.  The exact optimal
    assignment is solved on the full n x n cost matrix, so sample sizes are
    capped at 512.  The default window is [-R, R] with R one more than the
    largest threshold magnitude across both samples.
    """
    if a.n != b.n:
        raise SizeMismatch(f"sample sizes differ: {a.n} vs {b.n}")
    if a.n > ASSIGNMENT_SIZE_CAP:
        raise CostCapExceeded(
            f"sample size {a.n} exceeds the assignment cap {ASSIGNMENT_SIZE_CAP}"
        )
    if window is None:
        bound = max(
            (
                abs(t)
                for curve in a.curves + b.curves
                for t in curve.thresholds
            ),
            default=0.0,
        )
        window = (-bound - 1.0, bound + 1.0)
    cost = np.array(
        [[lp_distance(ca, cb, p, window) for cb in b.curves] for ca in a.curves]
    )
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum() / a.n)


@dataclass(frozen=True)
class InvarianceReport:
    statistic: float
    null_quantiles: dict[str, float]
    consistent: bool
    decision: str
    n: int
    trials: int


def invariance_test(
    K1: SimplicialComplex,
    K2: SimplicialComplex,
    n: int,
    seed: int,
    trials: int = 20,
) -> InvarianceReport:
    """Test whether two shapes could be rotations/reflections of each other.

    The statistic is the empirical distance between the two pushforward
    samples; the null distribution is built from ``trials`` self-distances
    of the first shape.  The pair is called consistent when the statistic
    does not exceed the null's 95th percentile.  This tests the falsifiable
    direction only: congruent shapes have equal pushforward distributions,
    so a large statistic is evidence against congruence.
    """
    if K1.dimension_ambient != K2.dimension_ambient:
        raise ValueError("shapes must share an ambient dimension")
    radius = max(K1.max_vertex_norm, K2.max_vertex_norm) + 1.0
    window = (-radius, radius)
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2**31, size=2 + 2 * trials)
    statistic = empirical_distance(
        sample_pushforward(K1, n, int(seeds[0])),
        sample_pushforward(K2, n, int(seeds[1])),
        1.0,
        window,
    )
    null = np.array(
        [
            empirical_distance(
                sample_pushforward(K1, n, int(seeds[2 + 2 * i])),
                sample_pushforward(K1, n, int(seeds[3 + 2 * i])),
                1.0,
                window,
            )
            for i in range(trials)
        ]
    )
    q05, q50, q95 = np.quantile(null, [0.05, 0.5, 0.95])
    consistent = bool(statistic <= q95)
    decision = (
        "consistent with O(d)-equivalence"
        if consistent
        else "not consistent with O(d)-equivalence"
    )
    return InvarianceReport(
        statistic=float(statistic),
        null_quantiles={"q05": float(q05), "q50": float(q50), "q95": float(q95)},
        consistent=consistent,
        decision=decision,
        n=int(n),
        trials=int(trials),
    )
