"""Shared fixtures: named shapes, random complexes, direction helpers."""

from __future__ import annotations

import itertools

import numpy as np
from scipy.spatial import Delaunay

from eulerscan import SimplicialComplex, close_faces, validate
from eulerscan.complexes import find_tie, tie_tolerance
from eulerscan.reconstruction import ShapeClassParams

# ---------------------------------------------------------------------------
# named shapes

TRI = [(0.0, 0.0), (1.0, 0.1), (0.3, 0.9)]


def make_complex(d, vertices, simplices, close=True):
    K = SimplicialComplex.from_data(d, vertices, simplices, close=close)
    report = validate(K)
    assert report.ok, report.violations
    return K


def point2(at=(0.0, 0.0)):
    return make_complex(2, [at], [[0]])


def segment2():
    return make_complex(2, [(-0.4, -0.1), (0.7, 0.35)], [[0, 1]])


def filled_triangle():
    return make_complex(2, TRI, [[0, 1, 2]])


def hollow_triangle():
    return make_complex(2, TRI, [[0, 1], [0, 2], [1, 2]])


def polygon_vertices(m, seed=0, radius=1.0):
    """Slightly perturbed regular m-gon, convex and free of parallel pairs."""
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(m) / m + rng.uniform(-0.05, 0.05, m)
    radii = radius * (1.0 + rng.uniform(-0.04, 0.04, m))
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def hollow_polygon(m, seed=0):
    verts = polygon_vertices(m, seed)
    edges = [[i, (i + 1) % m] for i in range(m)]
    return make_complex(2, verts, edges)


def filled_polygon(m, seed=0):
    verts = polygon_vertices(m, seed)
    triangles = [[0, i, i + 1] for i in range(1, m - 1)]
    return make_complex(2, verts, triangles)


def two_segments():
    return make_complex(
        2,
        [(-0.8, -0.1), (-0.2, 0.25), (0.3, -0.3), (0.9, 0.2)],
        [[0, 1], [2, 3]],
    )


def point3(at=(0.0, 0.0, 0.0)):
    return make_complex(3, [at], [[0]])


def segment3():
    return make_complex(3, [(0.0, 0.0, 0.0), (0.8, 0.3, 0.5)], [[0, 1]])


def triangle3():
    return make_complex(
        3, [(0.0, 0.0, 0.1), (1.0, 0.1, 0.0), (0.4, 0.9, -0.05)], [[0, 1, 2]]
    )


TETRA_VERTS = [
    (0.0, 0.0, 0.0),
    (1.0, 0.05, 0.1),
    (0.45, 0.95, 0.0),
    (0.5, 0.35, 0.9),
]


def tetra_boundary():
    return make_complex(3, TETRA_VERTS, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])


def tetra_filled():
    return make_complex(3, TETRA_VERTS, [[0, 1, 2, 3]])


def octahedron_boundary():
    rng = np.random.default_rng(5)
    verts = np.array(
        [
            (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1),
        ],
        dtype=float,
    )
    verts += rng.uniform(-0.05, 0.05, verts.shape)
    faces = [
        [0, 2, 4], [0, 2, 5], [0, 3, 4], [0, 3, 5],
        [1, 2, 4], [1, 2, 5], [1, 3, 4], [1, 3, 5],
    ]
    return make_complex(3, verts, faces)


def segments3d():
    return make_complex(
        3,
        [(-0.7, -0.1, 0.2), (-0.1, 0.3, -0.2), (0.3, -0.4, 0.1), (0.8, 0.2, 0.5)],
        [[0, 1], [2, 3]],
    )


# ---------------------------------------------------------------------------
# random complexes (Delaunay subcomplexes, so all homology is embeddable)


def random_complex(rng, d=2, max_vertices=12, max_simplices=None):
    lo = d + 2
    hi = max(lo + 1, max_vertices + 1)
    for _ in range(200):
        n = int(rng.integers(lo, hi))
        pts = rng.uniform(-1.0, 1.0, (n, d))
        try:
            tri = Delaunay(pts)
        except Exception:
            continue
        top = {tuple(sorted(map(int, s))) for s in tri.simplices}
        kept = [s for s in top if rng.random() < 0.6]
        faces = set()
        for s in top:
            for k in range(2, d + 1):
                faces.update(itertools.combinations(s, k))
        kept.extend(f for f in faces if rng.random() < 0.4)
        simplices = set(close_faces(kept)) | {(i,) for i in range(n)}
        if max_simplices is not None and len(simplices) > max_simplices:
            continue
        K = SimplicialComplex.from_data(d, pts, sorted(simplices, key=lambda s: (len(s), s)))
        if validate(K).ok:
            return K
    raise RuntimeError("failed to generate a valid random complex")


# ---------------------------------------------------------------------------
# direction helpers


def uniform_direction(rng, d):
    while True:
        g = rng.normal(size=d)
        norm = np.linalg.norm(g)
        if norm > 1e-12:
            return g / norm


def generic_direction(K, rng):
    """Uniform direction with pairwise distinct vertex heights."""
    tol = tie_tolerance(K)
    while True:
        v = uniform_direction(rng, K.dimension_ambient)
        if find_tie(K.vertices @ v, tol) is None:
            return v


def random_orthogonal(rng, d, special=False):
    g = rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    if special and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


# ---------------------------------------------------------------------------
# reconstruction fixture catalog: (name, complex, class params)
#
# delta respects the radius convention: a vertex whose observing cone has
# angular width W is delta-observable for delta <= W/2, so every delta below
# sits safely under half the narrowest cone width of its shape.  k_delta
# bounds the critical vertices seen by any single delta-ball.


def in_class_fixtures_2d():
    return [
        ("point-origin", point2(), ShapeClassParams(2, 0.8, 1)),
        ("point-offset", point2((0.3, 0.7)), ShapeClassParams(2, 0.8, 1)),
        ("segment", segment2(), ShapeClassParams(2, 0.7, 2)),
        ("filled-triangle", filled_triangle(), ShapeClassParams(2, 0.5, 2)),
        ("hollow-triangle", hollow_triangle(), ShapeClassParams(2, 0.5, 4)),
        ("filled-square", filled_polygon(4, seed=1), ShapeClassParams(2, 0.6, 2)),
        ("hollow-square", hollow_polygon(4, seed=2), ShapeClassParams(2, 0.6, 4)),
        ("hollow-pentagon", hollow_polygon(5, seed=3), ShapeClassParams(2, 0.5, 4)),
        ("hollow-hexagon", hollow_polygon(6, seed=4), ShapeClassParams(2, 0.45, 4)),
        ("hollow-octagon", hollow_polygon(8, seed=6), ShapeClassParams(2, 0.3, 4)),
        ("two-segments", two_segments(), ShapeClassParams(2, 0.7, 4)),
    ]


def in_class_fixtures_3d():
    return [
        ("point3", point3(), ShapeClassParams(3, 0.8, 1)),
        ("segment3", segment3(), ShapeClassParams(3, 0.7, 2)),
        ("triangle3", triangle3(), ShapeClassParams(3, 0.6, 3)),
        ("tetra-boundary", tetra_boundary(), ShapeClassParams(3, 0.3, 5)),
    ]


def generic_fixtures_2d():
    return [
        ("segment", segment2()),
        ("hollow-triangle", hollow_triangle()),
        ("hollow-square", hollow_polygon(4, seed=2)),
        ("filled-triangle", filled_triangle()),
        ("two-segments", two_segments()),
    ]


def generic_fixtures_3d():
    return [
        ("tetra-boundary", tetra_boundary()),
        ("octahedron", octahedron_boundary()),
        ("segments3d", segments3d()),
    ]
