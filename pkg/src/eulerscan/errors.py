"""Exception types shared across the package."""

from __future__ import annotations


class EulerScanError(Exception):
    """Base class for all package-specific errors."""


class TieError(EulerScanError):
    """Two vertices share a height under the queried direction.

    The direction lies on (or numerically too close to) a wall of the
    hyperplane division of the sphere, so lower stars are ill-defined.
    """

    def __init__(self, pair: tuple[int, int], height: float):
        self.pair = tuple(pair)
        self.height = float(height)
        super().__init__(
            f"vertices {self.pair[0]} and {self.pair[1]} tie at height "
            f"{self.height!r}; direction lies on a wall"
        )


class NonGenericSlice(EulerScanError):
    """The slice level coincides with a vertex height."""


class WindowError(EulerScanError):
    """Degenerate integration window."""


class DuplicateVertex(EulerScanError):
    """Two points of a vertex set coincide."""


class WallError(EulerScanError):
    """A stratum label contains a wall incidence (zero entry)."""


class StratumError(EulerScanError):
    """Two directions do not share a stratum."""


class UnmatchedJump(EulerScanError):
    """A curve jump threshold matches no vertex height (or several)."""


class ModeError(EulerScanError):
    """Unsupported enumeration mode for the requested dimension."""


class BadRadius(EulerScanError):
    """Net radius outside (0, pi/2)."""


class NetTooSparse(EulerScanError):
    """A direction group carries fewer samples than the net multiplicity."""


class CostExceeded(EulerScanError):
    """Combinatorial candidate enumeration would exceed the configured cap."""


class SingularSystem(EulerScanError):
    """A d-subset of directions is numerically rank deficient."""


class SizeMismatch(EulerScanError):
    """Empirical samples have different sizes."""


class CostCapExceeded(EulerScanError):
    """Sample size exceeds the exact-assignment solver cap."""


class ReconstructionFailed(EulerScanError):
    """The reconstruction pipeline could not assemble a queryable transform."""


class ParseError(EulerScanError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(EulerScanError):
    """A simplicial complex violates its structural invariants."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations) or "invalid complex")
