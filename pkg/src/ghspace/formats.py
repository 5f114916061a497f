"""Reading and writing spaces, correspondences and results.

Distance matrices are read from JSON (``{"labels": [...], "dist": [[...]]}``)
or headerless CSV; point clouds from CSV rows of coordinates.  Output is JSON
only.  Floats are written with ``repr``, which round-trips bit-exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .correspondence import Correspondence
from .metric_core import TOL_METRIC, FiniteMetricSpace, validate_metric
from .realization import Realization


class ParseError(ValueError):
    kind = "ParseError"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


def _detect(path: Path, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "csv" if path.suffix.lower() in {".csv", ".txt"} else "json"


def _read_csv(path: Path) -> list[list[float]]:
    try:
        with open(path, newline="") as fh:
            rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None
    if not rows:
        raise ParseError(f"{path}: empty file")
    return rows


def point_distances(points, metric: str = "euclidean") -> np.ndarray:
    """Pairwise distances of a point cloud under the Euclidean or Chebyshev metric."""
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or len(p) == 0:
        raise ParseError("point cloud must be a nonempty table of coordinates")
    diff = np.abs(p[:, None, :] - p[None, :, :])
    if metric == "euclidean":
        return np.sqrt((diff**2).sum(axis=-1))
    if metric == "chebyshev":
        return diff.max(axis=-1)
    raise ValueError(f"unknown metric {metric!r}")


def _matrix_from_json(obj):
    if not isinstance(obj, dict) or "dist" not in obj:
        raise ParseError('expected a JSON object with a "dist" matrix')
    try:
        dist = np.asarray(obj["dist"], dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad distance matrix: {e}") from None
    return dist, obj.get("labels")


def parse_space(obj, tol: float = TOL_METRIC) -> FiniteMetricSpace:
    dist, labels = _matrix_from_json(obj)
    return validate_metric(dist, labels, tol)


def load_matrix(path, fmt: str | None = None, points: bool = False, metric: str = "euclidean"):
    """Read a distance matrix and optional labels without validating them."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    fmt = _detect(path, fmt)
    if points:
        if fmt != "csv":
            raise ParseError("point clouds are read from CSV only")
        rows = _read_csv(path)
        if len({len(r) for r in rows}) != 1:
            raise ParseError(f"{path}: rows have different lengths")
        return point_distances(rows, metric), None
    if fmt == "csv":
        rows = _read_csv(path)
        try:
            return np.asarray(rows, dtype=np.float64), None
        except ValueError:
            raise ParseError(f"{path}: rows have different lengths") from None
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from None
    return _matrix_from_json(obj)


def load_space(
    path,
    fmt: str | None = None,
    points: bool = False,
    metric: str = "euclidean",
    tol: float = TOL_METRIC,
) -> FiniteMetricSpace:
    dist, labels = load_matrix(path, fmt, points, metric)
    return validate_metric(dist, labels, tol)


def space_to_json(space) -> dict:
    return {"labels": list(space.labels), "dist": space.dist.tolist()}


def parse_correspondence(obj, X, Y) -> Correspondence:
    return Correspondence(X, Y, [tuple(p) for p in obj["pairs"]])


def parse_realization(obj, X, Y) -> Realization:
    """Rebuild a realization from its JSON form (the ``Z`` matrix is re-validated)."""
    witness = parse_correspondence(obj["witness"], X, Y) if "witness" in obj else None
    return Realization(
        parse_space(obj["Z"]),
        tuple(obj["embed_X"]),
        tuple(obj["embed_Y"]),
        float(obj["achieved"]),
        witness,
    )


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
