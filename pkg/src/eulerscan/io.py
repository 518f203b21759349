"""File ingestion and serialization: OFF meshes, native JSON, CSV exports."""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .complexes import SimplicialComplex, validate
from .curves import EulerCurve
from .errors import ParseError, ValidationError
from .persistence import DiagramPoint, PersistenceDiagram
from .reconstruction import ReconstructionReport
from .strata import DirectionNet


def parse_off(text: str) -> SimplicialComplex:
    """Parse an OFF triangle mesh into a face-closed complex in R^3.

    Edges and vertices are synthesized by downward closure; the result is
    validated.  Comment lines (#) and blank lines are skipped but keep
    their line numbers for error reporting.
    """
    lines = text.splitlines()
    meaningful: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            meaningful.append((lineno, stripped))
    if not meaningful:
        raise ParseError("empty OFF file")
    lineno, header = meaningful[0]
    if header != "OFF":
        raise ParseError(f"expected OFF header, got {header!r}", lineno)
    if len(meaningful) < 2:
        raise ParseError("missing element count line", lineno + 1)
    lineno, counts = meaningful[1]
    parts = counts.split()
    try:
        nv, nf = int(parts[0]), int(parts[1])
        if len(parts) < 2:
            raise ValueError
    except (ValueError, IndexError):
        raise ParseError(f"malformed count line {counts!r}", lineno) from None

    body = meaningful[2:]
    if len(body) < nv + nf:
        raise ParseError(
            f"expected {nv} vertex and {nf} face lines, found {len(body)}",
            meaningful[-1][0],
        )
    vertices = []
    for lineno, line in body[:nv]:
        fields = line.split()
        if len(fields) < 3:
            raise ParseError(f"vertex line needs 3 coordinates: {line!r}", lineno)
        try:
            vertices.append([float(x) for x in fields[:3]])
        except ValueError:
            raise ParseError(f"bad vertex coordinates: {line!r}", lineno) from None
    triangles = []
    for lineno, line in body[nv : nv + nf]:
        fields = line.split()
        try:
            k = int(fields[0])
            idx = [int(x) for x in fields[1 : 1 + k]]
        except (ValueError, IndexError):
            raise ParseError(f"bad face line: {line!r}", lineno) from None
        if k != 3 or len(idx) != 3:
            raise ParseError(f"only triangular faces supported: {line!r}", lineno)
        triangles.append(idx)

    simplices = [[i] for i in range(nv)] + triangles
    complex = SimplicialComplex.from_data(3, vertices, simplices, close=True)
    report = validate(complex)
    if not report.ok:
        raise ValidationError(report.violations)
    return complex


def complex_to_json(complex: SimplicialComplex) -> dict[str, Any]:
    return {
        "d": complex.dimension_ambient,
        "vertices": [list(map(float, row)) for row in complex.vertices],
        "simplices": [list(s) for s in complex.simplices],
    }


def complex_from_json(data: dict[str, Any], close: bool = False) -> SimplicialComplex:
    try:
        complex = SimplicialComplex.from_data(
            data["d"], data["vertices"], data["simplices"], close=close
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad complex JSON: {exc}") from None
    report = validate(complex)
    if not report.ok:
        raise ValidationError(report.violations)
    return complex


def load_shape(path: str, close: bool = False) -> SimplicialComplex:
    """Load a complex from a .off mesh or the native .json schema."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.lower().endswith(".off"):
        return parse_off(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc.msg}", exc.lineno) from None
    return complex_from_json(data, close=close)


def curve_to_json(curve: EulerCurve) -> dict[str, Any]:
    return {
        "thresholds": [float(t) for t in curve.thresholds],
        "deltas": [int(d) for d in curve.deltas],
        "terminal_value": curve.terminal_value,
    }


def curve_from_json(data: dict[str, Any]) -> EulerCurve:
    return EulerCurve(
        tuple(float(t) for t in data["thresholds"]),
        tuple(int(d) for d in data["deltas"]),
    )


def curve_to_csv(curve: EulerCurve) -> str:
    """CSV rows (t, value): the curve value right of each jump."""
    lines = ["t,value"]
    lines.extend(f"{t!r},{curve.value(t)}" for t in curve.thresholds)
    return "\n".join(lines) + "\n"


def diagrams_to_json(diagrams) -> list[dict[str, Any]]:
    out = []
    for diagram in diagrams:
        for p in diagram.points:
            out.append(
                {
                    "birth": float(p.birth),
                    "death": "inf" if math.isinf(p.death) else float(p.death),
                    "degree": int(p.degree),
                    "multiplicity": int(p.multiplicity),
                }
            )
    return out


def diagram_from_json(records) -> PersistenceDiagram:
    points = []
    for rec in records:
        death = math.inf if rec["death"] == "inf" else float(rec["death"])
        points.append(
            DiagramPoint(
                float(rec["birth"]), death, int(rec["degree"]),
                int(rec.get("multiplicity", 1)),
            )
        )
    return PersistenceDiagram(tuple(points))


def net_to_json(net: DirectionNet) -> dict[str, Any]:
    return {
        "radius": float(net.radius),
        "multiplicity": int(net.multiplicity),
        "directions": [list(map(float, row)) for row in net.directions],
    }


def representatives_to_json(reps) -> list[dict[str, Any]]:
    return [
        {"label": list(label), "direction": list(map(float, v))}
        for label, v in reps
    ]


def report_to_json(report: ReconstructionReport) -> dict[str, Any]:
    return {
        "vertices": [list(map(float, row)) for row in report.vertices],
        "n_queries": report.n_queries,
        "budget": {
            "net": report.budget_net,
            "strata": report.budget_strata,
            "total": report.budget_total,
        },
        "strata": [
            {
                "label": list(rec.label),
                "direction": list(map(float, rec.direction)),
                "curve": curve_to_json(rec.curve),
            }
            for rec in report.strata
        ],
        "held_out": {
            "max_l1": report.held_out_max_l1,
            "evaluated": report.held_out_evaluated,
            "skipped": report.held_out_skipped,
        },
        "transcript": [
            {"direction": list(v), "curve": curve_to_json(c)}
            for v, c in report.transcript
        ],
    }


def transcript_from_json(records):
    return [
        (tuple(float(x) for x in rec["direction"]), curve_from_json(rec["curve"]))
        for rec in records
    ]


def dump_json(data: Any) -> str:
    """Canonical JSON encoding: sorted keys, stable float repr."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
