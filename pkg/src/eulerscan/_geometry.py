"""Sphere sampling utilities shared by the strata, reconstruction and stats modules."""

from __future__ import annotations

import numpy as np


def uniform_directions(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. uniform directions on S^{dim-1} (normalized Gaussians)."""
    out = np.empty((n, dim))
    k = 0
    while k < n:
        g = rng.normal(size=(n - k, dim))
        norms = np.linalg.norm(g, axis=1)
        good = norms > 1e-12
        m = int(good.sum())
        out[k : k + m] = g[good] / norms[good, None]
        k += m
    return out


def angular_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Great-circle distance between two unit vectors."""
    return float(np.arccos(np.clip(np.dot(u, v), -1.0, 1.0)))


def random_tangent(center: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Unit vector orthogonal to ``center``, uniformly distributed."""
    while True:
        g = rng.normal(size=center.shape[0])
        t = g - np.dot(g, center) * center
        norm = np.linalg.norm(t)
        if norm > 1e-12:
            return t / norm


def cap_directions(
    center: np.ndarray, radius: float, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` directions uniformly from the open cap B(center, radius).

    The polar angle is drawn with density proportional to sin(theta)^(d-2)
    by rejection, which is exact for every ambient dimension d >= 2.
    """
    d = center.shape[0]
    out = np.empty((n, d))
    sin_cap = max(np.sin(min(radius, np.pi / 2)), 1e-300)
    for i in range(n):
        while True:
            theta = rng.uniform(0.0, radius)
            if d == 2 or rng.uniform() <= (np.sin(theta) / sin_cap) ** (d - 2):
                break
        t = random_tangent(center, rng)
        out[i] = np.cos(theta) * center + np.sin(theta) * t
    return out


def rotated_slightly(v: np.ndarray, attempt: int) -> np.ndarray:
    """Deterministic tiny rotation of ``v``, used to escape height ties."""
    rng = np.random.default_rng(7_654_321 + attempt)
    t = random_tangent(v, rng)
    theta = 1e-9 * (attempt + 1)
    return np.cos(theta) * v + np.sin(theta) * t
