"""Input validation helpers used at the public API boundaries."""

from __future__ import annotations

import numpy as np

UNIT_NORM_TOL = 1e-12


def as_direction(v, dim: int | None = None) -> np.ndarray:
    """Coerce ``v`` to a unit direction vector.

    Nonzero vectors are normalized; the result has unit Euclidean norm up
    to 1e-12.  Raises ``ValueError`` for zero, non-finite, or wrongly
    shaped input.
    """
    arr = np.asarray(v, dtype=float).reshape(-1)
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected a direction in R^{dim}, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("direction must have at least one component")
    if not np.all(np.isfinite(arr)):
        raise ValueError("direction has non-finite components")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        arr = arr / norm
    return arr


def as_directions(V, dim: int | None = None) -> np.ndarray:
    """Coerce an array-like of vectors to an (m, d) array of unit directions."""
    arr = np.asarray(V, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2d array of directions, got shape {arr.shape}")
    return np.vstack([as_direction(row, dim) for row in arr]) if arr.size else arr


def as_vertex_array(vertices, dim: int | None = None) -> np.ndarray:
    """Coerce vertex coordinates to a float (n, d) array."""
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"expected an (n, d) coordinate array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected coordinates in R^{dim}, got R^{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vertex coordinates must be finite")
    return arr


def check_window(window) -> tuple[float, float]:
    """Validate an integration window, returning ``(lo, hi)`` with lo < hi."""
    from .errors import WindowError

    lo, hi = (float(window[0]), float(window[1]))
    if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
        raise WindowError(f"degenerate window [{lo}, {hi}]")
    return lo, hi


def check_seed(seed) -> int:
    if seed is None:
        raise ValueError("a seed is required for randomized modes")
    return int(seed)
