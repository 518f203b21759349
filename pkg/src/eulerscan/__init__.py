"""Euler characteristic transforms of embedded simplicial complexes.

Core surface: complexes and lower stars, Euler curves and the directional
transform, sublevel-set persistence, the hyperplane division of the
direction sphere with within-stratum transfer, reconstruction from finitely
many oracle queries, and distribution-level shape comparison.

scikit-learn wrappers live in :mod:`eulerscan.estimators` (imported lazily
to keep CLI startup light).
"""

from .complexes import (
    SimplicialComplex,
    ValidationReport,
    close_faces,
    euler_char,
    heights,
    lower_star,
    lower_star_partition,
    validate,
)
from .curves import (
    EctSample,
    EulerCurve,
    brute_force_curve,
    curve_value,
    curves_equal,
    ect_curve,
    lp_distance,
    slice_euler_char,
)
from .errors import (
    BadRadius,
    CostCapExceeded,
    CostExceeded,
    DuplicateVertex,
    EulerScanError,
    ModeError,
    NetTooSparse,
    NonGenericSlice,
    ParseError,
    ReconstructionFailed,
    SingularSystem,
    SizeMismatch,
    StratumError,
    TieError,
    UnmatchedJump,
    ValidationError,
    WallError,
    WindowError,
)
from .persistence import (
    DiagramPoint,
    Filtration,
    PersistenceDiagram,
    betti_curve,
    bottleneck_distance,
    lower_star_filtration,
    persistence_diagrams,
)
from .reconstruction import (
    ClassCheckReport,
    ComplexOracle,
    EctOracle,
    ReconstructionReport,
    ReplayOracle,
    ShapeClassParams,
    class_check,
    detect_vertices,
    direction_budget,
    is_delta_observable,
    reconstruct,
    required_C,
    vertex_count_bound,
)
from .stats import (
    CurveSample,
    InvarianceReport,
    empirical_distance,
    invariance_test,
    sample_pushforward,
)
from .strata import (
    DirectionNet,
    HyperplaneArrangement,
    arrangement,
    delta_C_net,
    delta_net,
    same_stratum,
    strata_representatives,
    stratum_label,
    transfer_curve,
    transfer_diagram,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
