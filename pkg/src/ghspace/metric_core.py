"""Finite metric and pseudometric spaces.

Spaces are stored as read-only ``float64`` distance matrices with one label
per point.  Construction goes through :func:`validate_metric` or
:func:`validate_pseudometric`, which report the first violated axiom together
with the offending indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Absolute tolerance for symmetry and triangle-inequality checks.
TOL_METRIC = 1e-9


class MetricError(ValueError):
    """Base class for metric validation failures."""

    kind = "MetricError"

    def __init__(self, message: str, indices: tuple[int, ...] = ()):
        super().__init__(message)
        self.indices = indices

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self), "indices": list(self.indices)}


class NotSquare(MetricError):
    kind = "NotSquare"


class NonFiniteEntry(MetricError):
    kind = "NonFiniteEntry"


class NegativeEntry(MetricError):
    kind = "NegativeEntry"


class NonzeroDiagonal(MetricError):
    kind = "NonzeroDiagonal"


class Asymmetric(MetricError):
    kind = "Asymmetric"


class ZeroOffDiagonal(MetricError):
    kind = "ZeroOffDiagonal"


class TriangleViolation(MetricError):
    kind = "TriangleViolation"


class LabelError(MetricError):
    kind = "LabelError"


def _frozen(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FinitePseudoMetricSpace:
    """A finite set with a pseudometric; distinct points may be at distance 0."""

    labels: tuple[str, ...]
    dist: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, diameter={diameter(self)!r})"


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace(FinitePseudoMetricSpace):
    """A finite metric space: a pseudometric space with positive off-diagonal."""


@dataclass(frozen=True)
class Subset:
    """A nonempty set of point indices of a parent space, kept sorted."""

    parent: FinitePseudoMetricSpace
    indices: tuple[int, ...]

    def __init__(self, parent: FinitePseudoMetricSpace, indices: Iterable[int]):
        idx = tuple(sorted({int(i) for i in indices}))
        if not idx:
            raise ValueError("subset must be nonempty")
        if idx[0] < 0 or idx[-1] >= parent.n:
            raise IndexError(f"subset index out of range for a space of {parent.n} points")
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def _check_axioms(d: np.ndarray, tol: float, positive: bool) -> np.ndarray:
    """Run the axiom checks in order and return the symmetrized matrix."""
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise NotSquare(f"distance matrix must be square and nonempty, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        i, j = np.argwhere(~np.isfinite(d))[0]
        raise NonFiniteEntry(f"entry ({i}, {j}) is not finite", (int(i), int(j)))
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        raise NegativeEntry(f"entry ({i}, {j}) = {float(d[i, j])!r} is negative", (int(i), int(j)))
    diag = np.diagonal(d)
    if np.any(diag != 0):
        i = int(np.flatnonzero(diag != 0)[0])
        raise NonzeroDiagonal(f"diagonal entry {i} = {float(d[i, i])!r} is not zero", (i,))
    asym = np.triu(np.abs(d - d.T) > tol)
    if asym.any():
        i, j = np.argwhere(asym)[0]
        raise Asymmetric(
            f"dist[{i}][{j}] = {float(d[i, j])!r} but dist[{j}][{i}] = {float(d[j, i])!r}", (int(i), int(j))
        )
    d = (d + d.T) / 2
    if positive:
        zero = np.triu(d == 0, k=1)
        if zero.any():
            i, j = np.argwhere(zero)[0]
            raise ZeroOffDiagonal(
                f"distinct points {i} and {j} are at distance 0", (int(i), int(j))
            )
    # viol[i, j, k]: d[i, k] > d[i, j] + d[j, k]
    viol = d[:, None, :] > d[:, :, None] + d[None, :, :] + tol
    if viol.any():
        i, j, k = (int(v) for v in np.argwhere(viol)[0])
        raise TriangleViolation(
            f"dist[{i}][{k}] = {float(d[i, k])!r} exceeds dist[{i}][{j}] + dist[{j}][{k}]"
            f" = {float(d[i, j] + d[j, k])!r}",
            (i, j, k),
        )
    return d


def _check_labels(labels: Sequence[str] | None, n: int) -> tuple[str, ...]:
    if labels is None:
        return tuple(str(i) for i in range(n))
    labels = tuple(str(s) for s in labels)
    if len(labels) != n:
        raise LabelError(f"expected {n} labels, got {len(labels)}")
    if len(set(labels)) != n:
        raise LabelError("labels must be distinct")
    return labels


def validate_pseudometric(
    matrix, labels: Sequence[str] | None = None, tol: float = TOL_METRIC
) -> FinitePseudoMetricSpace:
    """Validate ``matrix`` as a pseudometric and wrap it in a space."""
    d = _check_axioms(np.asarray(matrix, dtype=np.float64), tol, positive=False)
    return FinitePseudoMetricSpace(_check_labels(labels, d.shape[0]), _frozen(d))


def validate_metric(
    matrix, labels: Sequence[str] | None = None, tol: float = TOL_METRIC
) -> FiniteMetricSpace:
    """Validate ``matrix`` as a metric and wrap it in a :class:`FiniteMetricSpace`.

    Checks run in a fixed order (shape, finiteness, sign, diagonal, symmetry,
    positivity, triangle inequality) and the first failure is raised as a
    :class:`MetricError` subclass carrying the offending indices.  Symmetry and
    the triangle inequality are checked up to ``tol``; the stored matrix is
    symmetrized.
    """
    d = _check_axioms(np.asarray(matrix, dtype=np.float64), tol, positive=True)
    return FiniteMetricSpace(_check_labels(labels, d.shape[0]), _frozen(d))


def diameter(space: FinitePseudoMetricSpace) -> float:
    return float(space.dist.max())


def eccentricity(space: FinitePseudoMetricSpace) -> np.ndarray:
    """Largest distance from each point to any other point."""
    return space.dist.max(axis=1)


def quotient(space: FinitePseudoMetricSpace) -> tuple[FiniteMetricSpace, tuple[int, ...]]:
    """Identify points at distance exactly zero.

    Returns the quotient metric space and the projection, which maps each
    original index to its class index.  Classes are numbered in order of
    their smallest member and labelled by that member's label.
    """
    d = space.dist
    n = space.n
    proj = [-1] * n
    reps: list[int] = []
    for i in range(n):
        if proj[i] >= 0:
            continue
        cls = len(reps)
        reps.append(i)
        for j in np.flatnonzero(d[i] == 0):
            if proj[j] < 0:
                proj[j] = cls
    r = np.asarray(reps)
    out = FiniteMetricSpace(tuple(space.labels[i] for i in reps), _frozen(d[np.ix_(r, r)]))
    return out, tuple(proj)


def subspace(space: FinitePseudoMetricSpace, subset: Subset | Iterable[int]) -> FiniteMetricSpace:
    """Restrict ``space`` to ``subset``; labels are inherited."""
    if not isinstance(subset, Subset):
        subset = Subset(space, subset)
    idx = np.asarray(subset.indices)
    cls = type(space) if isinstance(space, FiniteMetricSpace) else FinitePseudoMetricSpace
    return cls(tuple(space.labels[i] for i in idx), _frozen(space.dist[np.ix_(idx, idx)]))


def find_isometry(
    X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace, tol: float = TOL_METRIC
) -> list[int] | None:
    """Return a distance-preserving bijection ``perm`` (X index -> Y index), or None.

    Backtracking over partial bijections; a point of X may only map to a point
    of Y whose sorted distance row matches its own within ``tol``.
    """
    n = X.n
    if n != Y.n:
        return None
    dx, dy = X.dist, Y.dist
    rx, ry = np.sort(dx, axis=1), np.sort(dy, axis=1)
    if np.any(np.abs(np.sort(rx.ravel()) - np.sort(ry.ravel())) > tol):
        return None
    compat = [
        [j for j in range(n) if np.all(np.abs(rx[i] - ry[j]) <= tol)] for i in range(n)
    ]
    order = sorted(range(n), key=lambda i: len(compat[i]))
    perm = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        done = order[:k]
        for j in compat[i]:
            if used[j]:
                continue
            if all(abs(dx[i, a] - dy[j, perm[a]]) <= tol for a in done):
                perm[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
        perm[i] = -1
        return False

    return perm if extend(0) else None


def is_isometric(
    X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace, tol: float = TOL_METRIC
) -> bool:
    return find_isometry(X, Y, tol) is not None
