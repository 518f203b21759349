"""scikit-learn estimators wrapping the transforms.

These make shapes usable inside ordinary pipelines: the transformers turn a
collection of simplicial complexes into fixed-width feature matrices by
sampling directional curves on a grid, and the reconstructor is a
fit/predict interface over the interrogation pipeline.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._geometry import rotated_slightly, uniform_directions
from .complexes import SimplicialComplex
from .curves import ect_curve
from .errors import TieError
from .persistence import betti_curve, lower_star_filtration, persistence_diagrams
from .reconstruction import (
    ComplexOracle,
    EctOracle,
    ShapeClassParams,
    reconstruct,
)
from .validation import as_directions


def _as_shapes(X) -> list[SimplicialComplex]:
    if isinstance(X, SimplicialComplex):
        X = [X]
    shapes = list(X)
    if not shapes:
        raise ValueError("at least one shape is required")
    if not all(isinstance(s, SimplicialComplex) for s in shapes):
        raise TypeError("inputs must be SimplicialComplex instances")
    dims = {s.dimension_ambient for s in shapes}
    if len(dims) != 1:
        raise ValueError(f"shapes mix ambient dimensions {sorted(dims)}")
    return shapes


def _curve_at(complex, v, attempts=8):
    # Wall directions have measure zero but do occur for axis-aligned
    # shapes; nudge deterministically rather than fail feature extraction.
    w = v
    for attempt in range(attempts):
        try:
            return ect_curve(complex, w)
        except TieError:
            w = rotated_slightly(v, attempt)
    raise TieError((0, 0), 0.0)


class EulerCharacteristicTransform(TransformerMixin, BaseEstimator):
    """Vectorize shapes by their Euler curves on a direction/threshold grid.

    Parameters
    ----------
    n_directions : int, default=32
        Number of uniform directions sampled once at fit time.
    n_thresholds : int, default=32
        Number of evenly spaced curve evaluation points.
    window : tuple of (float, float) or None, default=None
        Evaluation range; derived from the fitted shapes when None.
    seed : int, default=0
        Seed for the direction sample.

    Attributes
    ----------
    directions_ : ndarray of shape (n_directions, d)
    thresholds_ : ndarray of shape (n_thresholds,)
    """

    def __init__(self, n_directions=32, n_thresholds=32, window=None, seed=0):
        self.n_directions = n_directions
        self.n_thresholds = n_thresholds
        self.window = window
        self.seed = seed

    def fit(self, X, y=None):
        shapes = _as_shapes(X)
        d = shapes[0].dimension_ambient
        rng = np.random.default_rng(self.seed)
        self.dimension_ = d
        self.directions_ = uniform_directions(self.n_directions, d, rng)
        if self.window is None:
            radius = max(s.max_vertex_norm for s in shapes) + 1.0
            window = (-radius, radius)
        else:
            window = (float(self.window[0]), float(self.window[1]))
        self.window_ = window
        self.thresholds_ = np.linspace(window[0], window[1], self.n_thresholds)
        return self

    def transform(self, X):
        shapes = _as_shapes(X)
        out = np.empty(
            (len(shapes), self.directions_.shape[0] * self.thresholds_.size)
        )
        for i, shape in enumerate(shapes):
            rows = []
            for v in self.directions_:
                curve = _curve_at(shape, v)
                rows.append([curve.value(t) for t in self.thresholds_])
            out[i] = np.asarray(rows, dtype=float).ravel()
        return out


class PersistentHomologyTransform(TransformerMixin, BaseEstimator):
    """Vectorize shapes by directional Betti curves on a grid.

    Feature layout per shape: directions x homology degrees (0..d-1) x
    thresholds, flattened.
    """

    def __init__(self, n_directions=16, n_thresholds=32, window=None, seed=0):
        self.n_directions = n_directions
        self.n_thresholds = n_thresholds
        self.window = window
        self.seed = seed

    def fit(self, X, y=None):
        shapes = _as_shapes(X)
        d = shapes[0].dimension_ambient
        rng = np.random.default_rng(self.seed)
        self.dimension_ = d
        self.directions_ = uniform_directions(self.n_directions, d, rng)
        if self.window is None:
            radius = max(s.max_vertex_norm for s in shapes) + 1.0
            window = (-radius, radius)
        else:
            window = (float(self.window[0]), float(self.window[1]))
        self.window_ = window
        self.thresholds_ = np.linspace(window[0], window[1], self.n_thresholds)
        return self

    def transform(self, X):
        shapes = _as_shapes(X)
        d = self.dimension_
        width = self.directions_.shape[0] * d * self.thresholds_.size
        out = np.empty((len(shapes), width))
        for i, shape in enumerate(shapes):
            feats = []
            for v in self.directions_:
                diagrams = persistence_diagrams(lower_star_filtration(shape, v))
                for k in range(d):
                    curve = betti_curve(diagrams[k], k) if k < len(diagrams) else None
                    feats.append(
                        [curve.value(t) if curve else 0 for t in self.thresholds_]
                    )
            out[i] = np.asarray(feats, dtype=float).ravel()
        return out


class ShapeReconstructor(BaseEstimator):
    """Reconstruct a shape's transform from finitely many oracle queries.

    Parameters mirror the shape-class assumptions; ``fit`` accepts either a
    :class:`SimplicialComplex` (wrapped in an in-process oracle) or any
    oracle object with a ``query`` method, in which case ``dimension`` must
    be given.

    Attributes
    ----------
    vertices_ : ndarray of the detected vertex coordinates
    report_ : the full reconstruction report
    n_queries_ : oracle queries spent by the pipeline
    """

    def __init__(self, delta=0.5, k_delta=2, seed=0, holdout=0, dimension=None):
        self.delta = delta
        self.k_delta = k_delta
        self.seed = seed
        self.holdout = holdout
        self.dimension = dimension

    def fit(self, X, y=None):
        if isinstance(X, SimplicialComplex):
            oracle: EctOracle = ComplexOracle(X)
            d = X.dimension_ambient
        elif hasattr(X, "query"):
            oracle = X
            d = self.dimension if self.dimension is not None else getattr(X, "dimension", None)
            if d is None:
                raise ValueError("dimension is required for opaque oracles")
        else:
            raise TypeError("fit expects a SimplicialComplex or an oracle")
        params = ShapeClassParams(int(d), self.delta, self.k_delta)
        self.report_ = reconstruct(
            oracle, params, seed=self.seed, holdout=self.holdout
        )
        self.vertices_ = self.report_.vertices
        self.n_queries_ = self.report_.n_queries
        return self

    def predict(self, V):
        """Euler curves at the requested directions, one per row of V."""
        directions = as_directions(V, self.report_.vertices.shape[1])
        return [self.report_.ect.curve(v) for v in directions]
