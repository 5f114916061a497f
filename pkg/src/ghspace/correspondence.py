"""Relations and correspondences between two finite metric spaces.

A relation is a nonempty set of index pairs ``(i, j)`` with ``i`` a point of
the left space and ``j`` a point of the right space.  A correspondence is a
relation whose projections onto both spaces are surjective.

Every finite relation is closed, so distortion never needs a closure step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .metric_core import FinitePseudoMetricSpace

#: Largest grid (left size times right size) the brute-force oracle accepts.
ENUMERATION_CAP = 20


class CapExceeded(ValueError):
    kind = "CapExceeded"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


@dataclass(frozen=True, eq=False)
class Relation:
    left: FinitePseudoMetricSpace
    right: FinitePseudoMetricSpace
    pairs: tuple[tuple[int, int], ...]

    def __init__(self, left, right, pairs: Iterable[tuple[int, int]]):
        ps = tuple(sorted({(int(i), int(j)) for i, j in pairs}))
        if not ps:
            raise ValueError("a relation must contain at least one pair")
        for i, j in ps:
            if not (0 <= i < left.n and 0 <= j < right.n):
                raise IndexError(f"pair ({i}, {j}) out of range for sizes {left.n}x{right.n}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "pairs", ps)
        self._check()

    def _check(self) -> None:
        pass

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in set(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (
            self.left is other.left and self.right is other.right and self.pairs == other.pairs
        )

    def __hash__(self) -> int:
        return hash((id(self.left), id(self.right), self.pairs))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        p = np.asarray(self.pairs, dtype=np.intp)
        return p[:, 0], p[:, 1]

    def transpose(self) -> "Relation":
        return type(self)(self.right, self.left, [(j, i) for i, j in self.pairs])

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs]}


class Correspondence(Relation):
    """A relation covering every point of both spaces."""

    def _check(self) -> None:
        if not is_correspondence(self):
            raise ValueError("relation is not a correspondence: some point is left unmatched")


def is_correspondence(rel: Relation) -> bool:
    xs = {i for i, _ in rel.pairs}
    ys = {j for _, j in rel.pairs}
    return len(xs) == rel.left.n and len(ys) == rel.right.n


def distortion(rel: Relation) -> float:
    """Largest ``| |xx'| - |yy'| |`` over all pairs of pairs in ``rel``."""
    xs, ys = rel.arrays()
    dx = rel.left.dist[np.ix_(xs, xs)]
    dy = rel.right.dist[np.ix_(ys, ys)]
    return float(np.abs(dx - dy).max())


def relation_distance(s: Relation, t: Relation) -> float:
    """Hausdorff distance between two relations as subsets of ``X x Y``.

    ``X x Y`` carries the max-metric ``max(|xx'|, |yy'|)``.
    """
    if s.left is not t.left or s.right is not t.right:
        raise ValueError("relations must be between the same pair of spaces")
    sx, sy = s.arrays()
    tx, ty = t.arrays()
    d = np.maximum(s.left.dist[np.ix_(sx, tx)], s.right.dist[np.ix_(sy, ty)])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def identity_correspondence(X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace | None = None):
    Y = X if Y is None else Y
    if X.n != Y.n:
        raise ValueError("identity correspondence needs spaces of equal size")
    return Correspondence(X, Y, [(i, i) for i in range(X.n)])


def _check_cap(n: int, m: int) -> None:
    if n < 1 or m < 1:
        raise ValueError("space sizes must be positive")
    if n * m > ENUMERATION_CAP:
        raise CapExceeded(f"{n}x{m} grid has {n * m} cells, cap is {ENUMERATION_CAP}")


def enumerate_correspondences(n: int, m: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield every correspondence between index sets of sizes ``n`` and ``m``.

    Each is a sorted tuple of pairs; subsets of the ``n x m`` grid are scanned
    as bitmasks and yielded exactly once.
    """
    _check_cap(n, m)
    cells = [(i, j) for i in range(n) for j in range(m)]
    full_rows, full_cols = (1 << n) - 1, (1 << m) - 1
    for mask in range(1, 1 << len(cells)):
        rows = cols = 0
        chosen = []
        for c, (i, j) in enumerate(cells):
            if mask >> c & 1:
                rows |= 1 << i
                cols |= 1 << j
                chosen.append((i, j))
        if rows == full_rows and cols == full_cols:
            yield tuple(chosen)


def oracle_min_distortion(
    X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace
) -> tuple[float, tuple[tuple[int, int], ...]]:
    """Minimum distortion over all correspondences, by exhaustive enumeration.

    Visits the same subsets as :func:`enumerate_correspondences`, but computes
    the distortion of every subset of the grid at once with numpy: adding the
    highest cell ``k`` to a subset raises its distortion to at least the
    largest cost between cell ``k`` and the cells already present.  Returns the
    minimum and the first (lowest-bitmask) correspondence attaining it.
    """
    n, m = X.n, Y.n
    _check_cap(n, m)
    N = n * m
    ci, cj = np.divmod(np.arange(N), m)
    cost = np.abs(X.dist[np.ix_(ci, ci)] - Y.dist[np.ix_(cj, cj)])

    dis = np.zeros(1 << N)
    rows = np.zeros(1 << N, dtype=np.int64)
    cols = np.zeros(1 << N, dtype=np.int64)
    for k in range(N):
        size = 1 << k
        # worst[s] = max cost between cell k and the cells of subset s < 2**k
        worst = np.zeros(size)
        for b in range(k):
            lo = 1 << b
            np.maximum(worst[:lo], cost[k, b], out=worst[lo : 2 * lo])
        np.maximum(dis[:size], worst, out=dis[size : 2 * size])
        np.bitwise_or(rows[:size], 1 << int(ci[k]), out=rows[size : 2 * size])
        np.bitwise_or(cols[:size], 1 << int(cj[k]), out=cols[size : 2 * size])

    valid = (rows == (1 << n) - 1) & (cols == (1 << m) - 1)
    masks = np.flatnonzero(valid)
    best = masks[np.argmin(dis[masks])]
    pairs = tuple((int(ci[c]), int(cj[c])) for c in range(N) if best >> c & 1)
    return float(dis[best]), pairs


def gh_oracle(X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace) -> float:
    """Gromov-Hausdorff distance by brute force; small inputs only."""
    return oracle_min_distortion(X, Y)[0] / 2
