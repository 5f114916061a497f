"""Shortest curves between finite metric spaces through an optimal correspondence.

For ``t`` in [0, 1] the space at time ``t`` is the pair set of an optimal
correspondence ``R`` with distance

    rho_t((x, y), (x', y')) = (1 - t) |x x'| + t |y y'|

followed by identification of points at distance zero.  Along the curve,
``d_GH(R_s, R_t) = |s - t| d_GH(X, Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .correspondence import Correspondence, distortion
from .metric_core import FiniteMetricSpace, quotient, validate_metric, validate_pseudometric
from .solver import DEFAULT_BUDGET, NotExact, gh_exact

#: Largest correspondence :func:`check_geodesic` accepts by default.
MAX_CHECK_PAIRS = 8


class DomainError(ValueError):
    kind = "DomainError"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


@dataclass(frozen=True)
class GeodesicCurve:
    X: FiniteMetricSpace
    Y: FiniteMetricSpace
    R: Correspondence
    gh: float

    def to_json(self) -> dict:
        return {"gh": self.gh, "witness": self.R.to_json()}


def make_geodesic(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    witness: Correspondence | None = None,
    budget: int | None = DEFAULT_BUDGET,
) -> GeodesicCurve:
    """Build the curve from X to Y.

    Uses the solver's canonical optimal correspondence unless ``witness`` is
    given, in which case it must itself be optimal.
    """
    result = gh_exact(X, Y, budget)
    if not result.exact:
        raise NotExact(
            f"cannot certify an optimal correspondence within {result.nodes_explored} nodes"
        )
    R = result.witness
    if witness is not None:
        if witness.left is not X or witness.right is not Y:
            raise ValueError("witness must be a correspondence between X and Y")
        if distortion(witness) / 2 != result.value:
            raise ValueError(
                f"witness has half-distortion {distortion(witness) / 2!r},"
                f" the optimum is {result.value!r}"
            )
        R = witness
    return GeodesicCurve(X, Y, R, result.value)


def interpolated_matrix(curve: GeodesicCurve, t: float) -> np.ndarray:
    xs, ys = curve.R.arrays()
    dx = curve.X.dist[np.ix_(xs, xs)]
    dy = curve.Y.dist[np.ix_(ys, ys)]
    return (1 - t) * dx + t * dy


def sample(curve: GeodesicCurve, t: float) -> FiniteMetricSpace:
    """The space at time ``t``: ``rho_t`` on the pairs of R, then the zero-distance quotient."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [0, 1], got {t!r}")
    labels = [f"({curve.X.labels[i]},{curve.Y.labels[j]})" for i, j in curve.R.pairs]
    d = interpolated_matrix(curve, t)
    if 0.0 < t < 1.0:
        return validate_metric(d, labels)
    Z, _ = quotient(validate_pseudometric(d, labels))
    return Z


@dataclass
class GeodesicReport:
    ts: list[float]
    gh: float
    max_deviation: float
    distances: dict[tuple[float, float], float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "gh": self.gh,
            "ts": self.ts,
            "max_deviation": self.max_deviation,
            "pairs": [
                {"s": s, "t": t, "d_gh": v, "expected": abs(s - t) * self.gh}
                for (s, t), v in sorted(self.distances.items())
            ],
        }


def check_geodesic(
    curve: GeodesicCurve,
    ts: Sequence[float],
    max_pairs: int = MAX_CHECK_PAIRS,
    budget: int | None = DEFAULT_BUDGET,
) -> GeodesicReport:
    """Compare d_GH between sampled spaces with ``|s - t| * curve.gh``."""
    if len(curve.R) > max_pairs:
        raise ValueError(f"correspondence has {len(curve.R)} pairs, limit is {max_pairs}")
    ts = sorted({float(t) for t in ts})
    spaces = {t: sample(curve, t) for t in ts}
    distances = {}
    worst = 0.0
    for s, t in combinations(ts, 2):
        r = gh_exact(spaces[s], spaces[t], budget)
        if not r.exact:
            raise NotExact(f"could not certify d_GH between samples at {s} and {t}")
        distances[(s, t)] = r.value
        worst = max(worst, abs(r.value - abs(s - t) * curve.gh))
    return GeodesicReport(ts, curve.gh, worst, distances)
