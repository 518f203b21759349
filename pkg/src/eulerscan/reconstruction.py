"""Reconstruction of a hidden shape from finitely many Euler-curve queries.

The pipeline queries an oracle on a (delta, C)-net, pins down the vertex set
by hyperplane incidence counting (a pigeonhole argument makes C = (d-1) k + 1
incidences conclusive), enumerates the strata of the resulting wall
arrangement, asks one more question per stratum, and assembles a transform
that answers any further direction by within-stratum transfer.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._geometry import cap_directions, rotated_slightly, uniform_directions
from .complexes import SimplicialComplex, euler_char, lower_star_partition
from .curves import EctSample, EulerCurve, ect_curve, lp_distance
from .errors import (
    CostExceeded,
    NetTooSparse,
    ReconstructionFailed,
    TieError,
)
from .strata import (
    HyperplaneArrangement,
    StratumLabel,
    arrangement,
    delta_C_net,
    stratum_label,
    strata_representatives,
    transfer_curve,
    _match_thresholds,
)
from .validation import as_direction


@dataclass(frozen=True)
class ShapeClassParams:
    """A priori assumptions on the hidden shape.

    ``delta`` is the observability radius (great-circle radians): every
    vertex must produce an Euler-curve jump on some full delta-ball of
    directions.  ``k_delta`` bounds the number of vertices that are critical
    anywhere within any single delta-ball.
    """

    d: int
    delta: float
    k_delta: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("ambient dimension must be at least 2")
        if not 0 < self.delta < math.pi / 2:
            raise ValueError("delta must lie in (0, pi/2)")
        if self.k_delta < 1:
            raise ValueError("k_delta must be at least 1")


def required_C(params: ShapeClassParams) -> int:
    """Net multiplicity that makes incidence counting conclusive."""
    return (params.d - 1) * params.k_delta + 1


def vertex_count_bound(params: ShapeClassParams) -> int:
    """Upper bound on the vertex count of any in-class shape."""
    return math.floor(
        params.d * params.k_delta / math.sin(params.delta / 2) ** (params.d - 1)
    )


def direction_budget(
    params: ShapeClassParams, n_vertices_bound: int
) -> tuple[int, int]:
    """(net-phase bound, strata-count bound) on the number of queries.

    The first term covers the (delta, C)-net; the second bounds the number
    of top-dimensional strata cut out of the sphere by the walls of at most
    ``n_vertices_bound`` vertices, computed exactly as a binomial sum.
    """
    first = math.ceil(
        required_C(params) * (1.0 + 3.0 / params.delta) ** params.d
    )
    walls = math.comb(int(n_vertices_bound), 2)
    strata = sum(math.comb(walls, j) for j in range(params.d + 1))
    return first, strata


class EctOracle:
    """Query interface: direction in, Euler curve out, with a query counter.

    Subclasses implement ``_answer``.  Answers must be deterministic; the
    counter (the only mutable state) is updated atomically, so concurrent
    queries are safe.
    """

    def __init__(self):
        self._count = 0
        self._lock = threading.Lock()
        self._log: list[tuple[tuple[float, ...], EulerCurve]] = []

    def _answer(self, v: np.ndarray) -> EulerCurve:
        raise NotImplementedError

    def query(self, direction) -> EulerCurve:
        v = as_direction(direction)
        curve = self._answer(v)
        with self._lock:
            self._count += 1
            self._log.append((tuple(float(x) for x in v), curve))
        return curve

    @property
    def n_queries(self) -> int:
        return self._count

    @property
    def transcript(self) -> tuple[tuple[tuple[float, ...], EulerCurve], ...]:
        return tuple(self._log)


class ComplexOracle(EctOracle):
    """In-process oracle wrapping a hidden complex."""

    def __init__(self, complex: SimplicialComplex, tie_tol: float | None = None):
        super().__init__()
        self._complex = complex
        self._tie_tol = tie_tol

    @property
    def dimension(self) -> int:
        return self._complex.dimension_ambient

    def _answer(self, v: np.ndarray) -> EulerCurve:
        return ect_curve(self._complex, v, self._tie_tol)


class ReplayOracle(EctOracle):
    """Oracle replaying a recorded (direction, curve) transcript."""

    def __init__(self, transcript):
        super().__init__()
        self._table = {tuple(map(float, v)): c for v, c in transcript}

    def _answer(self, v: np.ndarray) -> EulerCurve:
        key = tuple(float(x) for x in v)
        if key not in self._table:
            raise LookupError(f"direction {key} was not recorded")
        return self._table[key]


@dataclass(frozen=True)
class ObservabilityResult:
    observable: bool
    witness: np.ndarray | None


def _critical_vertices(complex: SimplicialComplex, v, tie_tol=None) -> set[int]:
    part = lower_star_partition(complex, v, tie_tol)
    return {x for x, owned in part.items() if euler_char(owned) != 0}


def is_delta_observable(
    complex: SimplicialComplex,
    vertex_index: int,
    delta: float,
    samples: int,
    seed: int = 0,
    centers: int | None = None,
) -> ObservabilityResult:
    """Monte Carlo search for a delta-ball of directions observing a vertex.

    Tries ``centers`` candidate ball centers (default: 8x ``samples``, since
    a bad center is rejected after few draws); a center is a witness when
    all ``samples`` directions drawn from its ball make the vertex's lower
    star Euler characteristic nonzero.  The check is one-sided: True is
    certified up to sampling, False means "not found".
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    n_centers = 8 * samples if centers is None else int(centers)
    x = int(vertex_index)
    for c in uniform_directions(n_centers, complex.dimension_ambient, rng):
        hit = True
        for v in cap_directions(c, delta, samples, rng):
            try:
                if x not in _critical_vertices(complex, v):
                    hit = False
                    break
            except TieError:
                hit = False
                break
        if hit:
            return ObservabilityResult(True, c)
    return ObservabilityResult(False, None)


@dataclass(frozen=True)
class ClassCheckReport:
    in_class: bool
    violations: tuple[str, ...]


def class_check(
    complex: SimplicialComplex,
    params: ShapeClassParams,
    samples: int,
    seed: int = 0,
) -> ClassCheckReport:
    """Monte Carlo membership check for the shape class.

    Every vertex must be delta-observable, and for sampled ball centers the
    number of vertices Euler-critical anywhere in the ball must stay within
    ``k_delta``.
    """
    violations: list[str] = []
    rng = np.random.default_rng(seed)
    for x in range(complex.n_vertices):
        res = is_delta_observable(
            complex, x, params.delta, samples, seed=int(rng.integers(2**31))
        )
        if not res.observable:
            violations.append(f"vertex {x}: no observing {params.delta}-ball found")
    for _ in range(samples):
        center = uniform_directions(1, complex.dimension_ambient, rng)[0]
        seen: set[int] = set()
        for v in cap_directions(center, params.delta, samples, rng):
            try:
                seen |= _critical_vertices(complex, v)
            except TieError:
                continue
        if len(seen) > params.k_delta:
            violations.append(
                f"ball at {np.round(center, 4).tolist()} observes "
                f"{len(seen)} critical vertices > k_delta={params.k_delta}"
            )
    return ClassCheckReport(in_class=not violations, violations=tuple(violations))


def _geometric_groups(directions: np.ndarray, delta: float) -> list[np.ndarray]:
    """Greedy cover of the sample directions by delta-balls around samples."""
    covered = np.zeros(directions.shape[0], dtype=bool)
    cos_d = math.cos(delta)
    groups = []
    for i in range(directions.shape[0]):
        if covered[i]:
            continue
        members = np.nonzero(directions @ directions[i] >= cos_d)[0]
        groups.append(members)
        covered[members] = True
    return groups


def detect_vertices(
    sample: EctSample,
    params: ShapeClassParams,
    groups: Sequence[Sequence[int]] | None = None,
    eps_inc: float | None = None,
    eps_pt: float | None = None,
    max_systems: int = 5_000_000,
) -> np.ndarray:
    """Locate the hidden vertex set from sampled Euler curves.

    Within each cap group, every d-subset of (direction, critical value)
    pairs is solved as a d x d linear system for a candidate point; a
    candidate incident (within ``eps_inc``) to some critical value of at
    least C = (d-1) k + 1 group directions must be a true vertex.  Declared
    points are clustered within ``eps_pt`` and returned as centroids.

    The enumeration costs O(C(group, d) * jumps^d) systems per group; the
    total is pre-counted and capped by ``max_systems``.  Numerically rank
    deficient subsets are skipped.
    """
    d = params.d
    C = required_C(params)
    dirs = sample.directions
    curves = sample.curves
    if dirs.shape[1] != d:
        raise ValueError("sample dimension does not match the class parameters")

    scale = max(
        (abs(t) for curve in curves for t in curve.thresholds), default=0.0
    )
    if eps_inc is None:
        eps_inc = 1e-7 * scale + 1e-12
    if eps_pt is None:
        eps_pt = 1e-5 * scale + 1e-9

    if groups is None:
        groups = _geometric_groups(dirs, params.delta)
    group_arrays = [np.asarray(g, dtype=int) for g in groups]
    for g in group_arrays:
        if g.size < C:
            raise NetTooSparse(
                f"a cap group has only {g.size} directions, fewer than C={C}"
            )

    thresholds = [np.array(c.thresholds, dtype=float) for c in curves]
    total = 0
    for g in group_arrays:
        for subset in itertools.combinations(g.tolist(), d):
            n_combos = 1
            for idx in subset:
                n_combos *= max(1, thresholds[idx].size)
            total += n_combos
    if total > max_systems:
        raise CostExceeded(
            f"candidate enumeration needs {total} linear systems "
            f"(cap {max_systems})"
        )

    confirmed: list[np.ndarray] = []
    for g in group_arrays:
        group_dirs = dirs[g]
        group_thresholds = [thresholds[idx] for idx in g.tolist()]
        if any(t.size == 0 for t in group_thresholds):
            continue
        for subset in itertools.combinations(range(g.size), d):
            M = group_dirs[list(subset)]
            svals = np.linalg.svd(M, compute_uv=False)
            if svals[-1] <= 1e-9 * svals[0]:
                continue  # rank-deficient subset: skip rather than solve
            combos = np.array(
                list(itertools.product(*(group_thresholds[i] for i in subset)))
            )
            candidates = np.linalg.solve(M, combos.T)  # (d, n_combos)
            heights = group_dirs @ candidates  # (g, n_combos)
            counts = np.zeros(candidates.shape[1], dtype=int)
            for m in range(g.size):
                gaps = np.abs(heights[m][None, :] - group_thresholds[m][:, None])
                counts += (gaps.min(axis=0) <= eps_inc).astype(int)
            for col in np.nonzero(counts >= C)[0]:
                confirmed.append(candidates[:, col])

    clusters: list[list[np.ndarray]] = []
    for y in confirmed:
        for members in clusters:
            if np.linalg.norm(y - members[0]) <= eps_pt:
                members.append(y)
                break
        else:
            clusters.append([y])
    centroids = [np.mean(members, axis=0) for members in clusters]
    centroids.sort(key=lambda p: tuple(p))
    return np.array(centroids) if centroids else np.zeros((0, d))


@dataclass(frozen=True)
class StratumRecord:
    label: StratumLabel
    direction: np.ndarray
    curve: EulerCurve


class ReconstructedEct:
    """Queryable transform assembled from per-stratum representative curves."""

    def __init__(
        self,
        vertices: np.ndarray,
        arr: HyperplaneArrangement,
        records: Sequence[StratumRecord],
    ):
        self.vertices = vertices
        self.arrangement = arr
        self._by_label = {rec.label: rec for rec in records}

    @property
    def records(self) -> tuple[StratumRecord, ...]:
        return tuple(self._by_label.values())

    def curve(self, direction) -> EulerCurve:
        """Euler curve at any direction, deduced from the stored answers.

        Off the walls this is a within-stratum transfer from the stratum's
        representative.  On a wall the curve is evaluated from an adjacent
        stratum by continuity, with jump deltas summed over the heights that
        coincide there.
        """
        w = as_direction(direction, self.arrangement.dimension)
        label = stratum_label(self.arrangement, w)
        if 0 not in label:
            rec = self._by_label.get(label)
            if rec is None:
                raise ReconstructionFailed(
                    "no representative answer for the stratum of this direction"
                )
            return transfer_curve(rec.curve, rec.direction, w, self.arrangement)
        rec = self._adjacent(label)
        tol = self.arrangement.match_tolerance()
        matched = _match_thresholds(
            rec.curve.thresholds, self.arrangement.points @ rec.direction, tol
        )
        heights = self.arrangement.points @ w
        jumps = sorted(
            (float(heights[i]), delta)
            for i, delta in zip(matched, rec.curve.deltas)
        )
        merged: list[tuple[float, int]] = []
        for t, delta in jumps:
            if merged and t - merged[-1][0] <= tol:
                merged[-1] = (merged[-1][0], merged[-1][1] + delta)
            else:
                merged.append((t, delta))
        return EulerCurve.from_jumps(merged)

    def _adjacent(self, label: StratumLabel) -> StratumRecord:
        for rec in self._by_label.values():
            if all(a == b for a, b in zip(label, rec.label) if a != 0):
                return rec
        raise ReconstructionFailed("no representative adjacent to this wall")


@dataclass(frozen=True)
class ReconstructionReport:
    vertices: np.ndarray
    strata: tuple[StratumRecord, ...]
    n_queries: int
    budget_net: int
    budget_strata: int
    held_out_max_l1: float | None
    held_out_evaluated: int
    held_out_skipped: int
    transcript: tuple[tuple[tuple[float, ...], EulerCurve], ...]
    ect: ReconstructedEct = field(repr=False)

    @property
    def budget_total(self) -> int:
        return self.budget_net + self.budget_strata


def _query_generic(oracle: EctOracle, v: np.ndarray, attempts: int = 5):
    """Query the oracle, nudging the direction off a wall if it ties."""
    w = v
    for attempt in range(attempts):
        try:
            return w, oracle.query(w)
        except TieError:
            w = rotated_slightly(v, attempt)
    raise ReconstructionFailed("persistent height ties on net directions")


def reconstruct(
    oracle: EctOracle,
    params: ShapeClassParams,
    seed: int = 0,
    strata_mode: str | None = None,
    holdout: int = 0,
    max_systems: int = 5_000_000,
) -> ReconstructionReport:
    """Run the full interrogation pipeline against an Euler-curve oracle.

    Queries the oracle on a general-position (delta, C)-net, detects the
    vertex set, enumerates the strata of its wall arrangement (exactly for
    d = 2, by sampling otherwise), asks one question per stratum, and
    assembles a queryable transform.  ``holdout`` extra directions, if
    requested, are queried afterwards purely for validation and are not
    part of the reconstruction query count.
    """
    d = params.d
    net = delta_C_net(d, params.delta, required_C(params), seed=seed)
    queried = np.empty_like(net.directions)
    answers: list[EulerCurve] = []
    for i, v in enumerate(net.directions):
        w, curve = _query_generic(oracle, v)
        queried[i] = w
        answers.append(curve)
    sample = EctSample(queried, tuple(answers), provenance="oracle")

    vertices = detect_vertices(
        sample, params, groups=net.groups, max_systems=max_systems
    )
    if vertices.shape[0] == 0:
        raise ReconstructionFailed("no vertices detected from the net answers")

    arr = arrangement(vertices)
    mode = strata_mode or ("exact2d" if d == 2 else "sampled")
    reps = strata_representatives(arr, mode=mode, seed=seed + 1)
    records = []
    for label, u in reps:
        _, curve = _query_generic(oracle, u)
        records.append(StratumRecord(label, u, curve))
    n_queries = oracle.n_queries
    ect = ReconstructedEct(vertices, arr, records)

    held_out_max = None
    evaluated = skipped = 0
    if holdout > 0:
        rng = np.random.default_rng(seed + 9999)
        held_out_max = 0.0
        for w in uniform_directions(holdout, d, rng):
            try:
                predicted = ect.curve(w)
                truth = oracle.query(w)
            except (ReconstructionFailed, TieError):
                skipped += 1
                continue
            held_out_max = max(held_out_max, lp_distance(predicted, truth, 1.0))
            evaluated += 1

    budget_net, budget_strata = direction_budget(params, vertex_count_bound(params))
    return ReconstructionReport(
        vertices=vertices,
        strata=tuple(records),
        n_queries=n_queries,
        budget_net=budget_net,
        budget_strata=budget_strata,
        held_out_max_l1=held_out_max,
        held_out_evaluated=evaluated,
        held_out_skipped=skipped,
        transcript=oracle.transcript,
        ect=ect,
    )
