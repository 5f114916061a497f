"""Hausdorff distances between nonempty subsets of a finite (pseudo)metric space."""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .metric_core import FinitePseudoMetricSpace, Subset

IndexSet = Union[Subset, Iterable[int]]


def _idx(space: FinitePseudoMetricSpace, A: IndexSet) -> np.ndarray:
    if not isinstance(A, Subset):
        A = Subset(space, A)
    elif A.parent is not space:
        raise ValueError("subset belongs to a different space")
    return np.asarray(A.indices)


def point_to_set(space: FinitePseudoMetricSpace, x: int, A: IndexSet) -> float:
    """Distance from point ``x`` to the set ``A``: the minimum of ``dist[x][a]``."""
    return float(space.dist[x, _idx(space, A)].min())


def one_sided(space: FinitePseudoMetricSpace, A: IndexSet, B: IndexSet) -> float:
    """Largest distance from a point of ``A`` to the set ``B``."""
    block = space.dist[np.ix_(_idx(space, A), _idx(space, B))]
    return float(block.min(axis=1).max())


def hausdorff(space: FinitePseudoMetricSpace, A: IndexSet, B: IndexSet) -> float:
    """Symmetric Hausdorff distance, the larger of the two one-sided distances."""
    block = space.dist[np.ix_(_idx(space, A), _idx(space, B))]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


def hausdorff_between_parts(
    glued: FinitePseudoMetricSpace, part_X: IndexSet, part_Y: IndexSet
) -> float:
    """Hausdorff distance between the two parts of a glued disjoint union.

    Evaluated directly on the pseudometric.  Identifying points at distance
    zero does not change any of the min/max values involved, so the result
    equals the Hausdorff distance between the images in the quotient.
    """
    ix, iy = _idx(glued, part_X), _idx(glued, part_Y)
    if np.intersect1d(ix, iy).size:
        raise ValueError("the two parts of a disjoint union must not overlap")
    return hausdorff(glued, ix, iy)
