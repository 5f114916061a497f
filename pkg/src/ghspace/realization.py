"""Gluing two finite metric spaces along a correspondence.

The glued pseudometric lives on the disjoint union, X points first.  Between
``x`` and ``y`` it is the cheapest detour through a pair of the
correspondence::

    rho(x, y) = min over (x', y') in R of |x x'| + |y y'| + dis(R) / 2

Its two parts lie at Hausdorff distance exactly ``dis(R) / 2``, so gluing
along an optimal correspondence realizes the Gromov-Hausdorff distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correspondence import Correspondence, distortion
from .hausdorff import hausdorff, hausdorff_between_parts
from .metric_core import (
    FiniteMetricSpace,
    FinitePseudoMetricSpace,
    quotient,
    validate_pseudometric,
)
from .solver import DEFAULT_BUDGET, NotExact, gh_exact


@dataclass(frozen=True)
class Gluing:
    space: FinitePseudoMetricSpace
    correspondence: Correspondence
    half_distortion: float

    @property
    def part_X(self) -> range:
        return range(self.correspondence.left.n)

    @property
    def part_Y(self) -> range:
        n = self.correspondence.left.n
        return range(n, n + self.correspondence.right.n)


@dataclass(frozen=True)
class Realization:
    Z: FiniteMetricSpace
    embed_X: tuple[int, ...]
    embed_Y: tuple[int, ...]
    achieved: float
    witness: Correspondence | None = None

    def to_json(self) -> dict:
        out = {
            "achieved": self.achieved,
            "Z": {"labels": list(self.Z.labels), "dist": self.Z.dist.tolist()},
            "embed_X": list(self.embed_X),
            "embed_Y": list(self.embed_Y),
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def glue_matrix(X, Y, R: Correspondence) -> np.ndarray:
    """Assemble the glued distance matrix without validating it."""
    n, m = X.n, Y.n
    half = distortion(R) / 2
    xs, ys = R.arrays()
    # cross[x, y] = min over k of dX[x, xs[k]] + dY[y, ys[k]] + half
    cross = (X.dist[:, xs][:, None, :] + Y.dist[:, ys][None, :, :]).min(axis=2) + half
    d = np.zeros((n + m, n + m))
    d[:n, :n] = X.dist
    d[n:, n:] = Y.dist
    d[:n, n:] = cross
    d[n:, :n] = cross.T
    return d


def glue(X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace, R: Correspondence) -> Gluing:
    if R.left is not X or R.right is not Y:
        raise ValueError("correspondence must be between X and Y")
    labels = [f"X:{s}" for s in X.labels] + [f"Y:{s}" for s in Y.labels]
    space = validate_pseudometric(glue_matrix(X, Y, R), labels)
    return Gluing(space, R, distortion(R) / 2)


def realize(
    X: FiniteMetricSpace, Y: FiniteMetricSpace, budget: int | None = DEFAULT_BUDGET
) -> Realization:
    """Embed X and Y isometrically in one metric space at Hausdorff distance d_GH(X, Y)."""
    result = gh_exact(X, Y, budget)
    if not result.exact:
        raise NotExact(
            f"search stopped after {result.nodes_explored} nodes with"
            f" {result.lower_bound!r} <= d_GH <= {result.upper_bound!r}"
        )
    return realize_with(X, Y, result.witness)


def realize_with(X, Y, R: Correspondence) -> Realization:
    """Realization obtained by gluing along ``R``; optimal only if ``R`` is."""
    g = glue(X, Y, R)
    Z, proj = quotient(g.space)
    embed_X, embed_Y = proj[: X.n], proj[X.n :]
    achieved = hausdorff_between_parts(g.space, g.part_X, g.part_Y)
    return Realization(Z, tuple(embed_X), tuple(embed_Y), achieved, R)


@dataclass
class RealizationReport:
    isometric_X: bool
    isometric_Y: bool
    hausdorff_images: float
    gh_value: float | None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "isometric_X": self.isometric_X,
            "isometric_Y": self.isometric_Y,
            "hausdorff_images": self.hausdorff_images,
            "gh_value": self.gh_value,
            "violations": self.violations,
        }


def _embeds(Z, embed, S) -> bool:
    e = np.asarray(embed)
    return len(e) == S.n and bool(np.array_equal(Z.dist[np.ix_(e, e)], S.dist))


def verify_realization(
    r: Realization,
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    tol: float = 1e-12,
    budget: int | None = DEFAULT_BUDGET,
) -> RealizationReport:
    """Re-check a realization from scratch and list everything that fails."""
    violations = []
    iso_x = _embeds(r.Z, r.embed_X, X)
    iso_y = _embeds(r.Z, r.embed_Y, Y)
    if not iso_x:
        violations.append("embedding of X is not distance-preserving")
    if not iso_y:
        violations.append("embedding of Y is not distance-preserving")
    dh = hausdorff(r.Z, r.embed_X, r.embed_Y)
    if abs(dh - r.achieved) > tol:
        violations.append(f"Hausdorff distance of images is {dh!r}, reported {r.achieved!r}")
    result = gh_exact(X, Y, budget)
    gh = result.value if result.exact else None
    if gh is None:
        violations.append("could not certify the Gromov-Hausdorff distance within budget")
    elif abs(gh - r.achieved) > tol:
        violations.append(f"Gromov-Hausdorff distance is {gh!r}, reported {r.achieved!r}")
    return RealizationReport(iso_x, iso_y, dh, gh, violations)
