from __future__ import annotations

from typing import Any, Optional


class MeasureError(ValueError):
    """
    Root of every error raised by the library.

    Subclasses ValueError so callers that only guard against bad input keep
    working. `code` is a stable machine-readable tag used by the CLI.
    """

    code = "measure_error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: dict[str, Any] = details

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.code,
            "message": self.message,
            "details": {key: _jsonable(value) for key, value in self.details.items()},
        }


# ── Geometry ─────────────────────────────────────────────────────────────────

class DegenerateInput(MeasureError):
    code = "degenerate_input"


class DuplicatePoint(MeasureError):
    code = "duplicate_point"


class CollinearFace(MeasureError):
    code = "collinear_face"


class PoleHit(MeasureError):
    code = "pole_hit"


class SingularArgument(MeasureError):
    code = "singular_argument"


class FlipInsideStencil(MeasureError):
    code = "flip_inside_stencil"


# ── Combinatorics / linear algebra ───────────────────────────────────────────

class TooLarge(MeasureError):
    code = "too_large"


class SingularSubmatrix(MeasureError):
    code = "singular_submatrix"


class NoEdgeBasis(MeasureError):
    code = "no_edge_basis"


class SingularMatrix(MeasureError):
    code = "singular_matrix"


class OddDimension(MeasureError):
    code = "odd_dimension"


# ── Measure / sampler ────────────────────────────────────────────────────────

class CoincidingPoints(MeasureError):
    code = "coinciding_points"


class CombinatoricsChanged(MeasureError):
    code = "combinatorics_changed"


class MeasureDriftError(MeasureError):
    code = "measure_drift"


def _jsonable(value: Any) -> Optional[Any]:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (tuple, list)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
