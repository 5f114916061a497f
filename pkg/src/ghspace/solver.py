"""Exact Gromov-Hausdorff distance between finite metric spaces.

The distance is half the least distortion of a correspondence.  The search
assigns to every point of one space a nonempty set of partners in the other
and prunes with the partial distortion, which can only grow as pairs are
added.

Only star-shaped correspondences are explored: in every component either one
left point is matched to several right points or one right point to several
left points.  Any correspondence contains such a sub-correspondence (drop a
pair whose two endpoints both have other partners, repeat), and dropping pairs
never raises the distortion, so the optimum is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .correspondence import Correspondence, distortion
from .metric_core import FinitePseudoMetricSpace, diameter, eccentricity

DEFAULT_BUDGET = 10**8


class NotExact(RuntimeError):
    kind = "NotExact"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


@dataclass(frozen=True)
class GHResult:
    value: float
    witness: Correspondence
    lower_bound: float
    upper_bound: float
    exact: bool
    nodes_explored: int = 0

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "nodes_explored": self.nodes_explored,
            "witness": self.witness.to_json(),
        }


def _cost_tensor(X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace) -> np.ndarray:
    # cost[i, j, k, l] = | |x_i x_k| - |y_j y_l| |
    return np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :])


def _greedy(cost: np.ndarray, order: list[int], first: int) -> list[tuple[int, int]]:
    n, m = cost.shape[:2]
    pairs = [(order[0], first)]
    # worst[i, j]: distortion added by the pair (i, j) given the pairs so far
    worst = cost[:, :, order[0], first].copy()
    for i in order[1:]:
        j = int(np.argmin(worst[i]))
        pairs.append((i, j))
        np.maximum(worst, cost[:, :, i, j], out=worst)
    covered = {j for _, j in pairs}
    for j in range(m):
        if j not in covered:
            i = int(np.argmin(worst[:, j]))
            pairs.append((i, j))
            np.maximum(worst, cost[:, :, i, j], out=worst)
    return pairs


def gh_bounds(X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace) -> tuple[float, float]:
    """Cheap bracket ``(lower, upper)`` for the Gromov-Hausdorff distance."""
    lower, upper, _ = _bounds(X, Y)
    return lower, upper


def _bounds(X, Y) -> tuple[float, float, Correspondence]:
    # Two points realizing diam X are matched to points at most diam Y apart
    # (and vice versa), so every correspondence has distortion >= |diam X - diam Y|.
    lower = abs(diameter(X) - diameter(Y)) / 2
    cost = _cost_tensor(X, Y)
    order = [int(i) for i in np.argsort(-eccentricity(X), kind="stable")]
    candidates = [_greedy(cost, order, j) for j in range(Y.n)]
    if X.n == Y.n:
        candidates.append([(i, i) for i in range(X.n)])
    best = None
    for pairs in candidates:
        c = Correspondence(X, Y, pairs)
        d = distortion(c)
        if best is None or d < best[0]:
            best = (d, c)
    return lower, best[0] / 2, best[1]


@dataclass
class _Search:
    cost: np.ndarray
    diam_sub: np.ndarray  # diameter of each nonempty subset of the right space
    order: list[int]
    budget: int
    best: float
    best_pairs: list[tuple[int, int]]
    nodes: int = 0
    aborted: bool = False
    frontier: float = math.inf
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def run(self) -> None:
        n, m = self.cost.shape[:2]
        worst = np.zeros((n, m))
        self._expand(0, 0.0, worst, 0, 0)

    def _expand(self, depth: int, partial: float, worst: np.ndarray, covered: int, locked: int):
        n, m = self.cost.shape[:2]
        if self.nodes >= self.budget:
            self.aborted = True
            self.frontier = min(self.frontier, partial)
            return
        self.nodes += 1
        full = (1 << m) - 1
        if depth == n:
            if covered == full and partial < self.best:
                self.best = partial
                self.best_pairs = list(self.pairs)
            return

        rest = self.order[depth:]
        free = [j for j in range(m) if not locked >> j & 1]
        # Every remaining left point needs a partner, every uncovered right
        # point needs a remaining left point.
        bound = partial
        if free:
            bound = max(bound, float(worst[np.ix_(rest, free)].min(axis=1).max()))
        uncovered = [j for j in range(m) if not covered >> j & 1]
        if uncovered:
            if len(rest) == 0:
                return
            bound = max(bound, float(worst[np.ix_(rest, uncovered)].min(axis=0).max()))
        if bound >= self.best:
            return

        i = self.order[depth]
        row = worst[i]
        options = []
        for j in free:
            if max(partial, row[j]) < self.best:
                options.append((max(partial, row[j]), 1 << j))
        # groups of two or more partners take only still-uncovered points
        open_bits = [j for j in uncovered if max(partial, row[j]) < self.best]
        for size in range(2, len(open_bits) + 1):
            for combo in combinations(open_bits, size):
                mask = sum(1 << j for j in combo)
                inc = max(partial, self.diam_sub[mask], max(row[j] for j in combo))
                if inc < self.best:
                    options.append((inc, mask))
        options.sort()

        for k, (inc, mask) in enumerate(options):
            if inc >= self.best:
                break
            js = [j for j in range(m) if mask >> j & 1]
            new_worst = worst.copy()
            for j in js:
                np.maximum(new_worst, self.cost[:, :, i, j], out=new_worst)
                self.pairs.append((i, j))
            new_locked = locked | mask if len(js) > 1 else locked
            self._expand(depth + 1, inc, new_worst, covered | mask, new_locked)
            del self.pairs[len(self.pairs) - len(js) :]
            if self.aborted:
                if k + 1 < len(options):
                    self.frontier = min(self.frontier, options[k + 1][0])
                return


def _subset_diameters(Y: FinitePseudoMetricSpace) -> np.ndarray:
    m = Y.n
    diam = np.zeros(1 << m)
    for mask in range(1, 1 << m):
        hi = mask.bit_length() - 1
        rest = mask ^ (1 << hi)
        if rest:
            js = [j for j in range(hi) if rest >> j & 1]
            diam[mask] = max(diam[rest], float(Y.dist[hi, js].max()))
    return diam


def gh_exact(
    X: FinitePseudoMetricSpace,
    Y: FinitePseudoMetricSpace,
    budget: int | None = DEFAULT_BUDGET,
) -> GHResult:
    """Gromov-Hausdorff distance with an optimal correspondence.

    Branch and bound, seeded with :func:`gh_bounds`.  If the search finishes
    within ``budget`` nodes the result is exact and its witness is the
    canonical optimal correspondence (see :func:`canonical_witness`).
    Otherwise the result carries the best correspondence found and a
    certified bracket around the true value.
    """
    budget = DEFAULT_BUDGET if budget is None else int(budget)
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    lower, upper, seed = _bounds(X, Y)

    # branch over the larger space so that each point has fewer partner sets
    flip = Y.n > X.n
    A, B = (Y, X) if flip else (X, Y)
    seed_pairs = [(j, i) for i, j in seed.pairs] if flip else list(seed.pairs)

    best = 2 * upper
    nodes = 0
    aborted = False
    if lower < upper:
        order = [int(i) for i in np.argsort(-eccentricity(A), kind="stable")]
        search = _Search(
            cost=_cost_tensor(A, B),
            diam_sub=_subset_diameters(B),
            order=order,
            budget=budget,
            best=best,
            best_pairs=seed_pairs,
        )
        search.run()
        best, nodes, aborted = search.best, search.nodes, search.aborted
        seed_pairs = search.best_pairs
        frontier = search.frontier

    if aborted:
        pairs = [(j, i) for i, j in seed_pairs] if flip else seed_pairs
        witness = Correspondence(X, Y, pairs)
        lo = max(lower, min(best, frontier) / 2)
        return GHResult(best / 2, witness, lo, best / 2, False, nodes)

    witness = canonical_witness(X, Y, best)
    value = distortion(witness) / 2
    return GHResult(value, witness, value, value, True, nodes)


def canonical_witness(
    X: FinitePseudoMetricSpace, Y: FinitePseudoMetricSpace, max_distortion: float
) -> Correspondence:
    """The canonical correspondence with distortion at most ``max_distortion``.

    Candidates are ordered by number of pairs, then lexicographically by their
    sorted pair lists; the first one is returned.  Raises ``ValueError`` if no
    correspondence meets the bound.
    """
    n, m = X.n, Y.n
    N = n * m
    cells = [(i, j) for i in range(n) for j in range(m)]
    cost = _cost_tensor(X, Y).reshape(N, N)
    ok = cost <= max_distortion

    def cover_exists(chosen: list[int], cand: list[int], room: int) -> bool:
        rows = {cells[c][0] for c in chosen}
        cols = {cells[c][1] for c in chosen}
        miss_r = [i for i in range(n) if i not in rows]
        miss_c = [j for j in range(m) if j not in cols]
        if not miss_r and not miss_c:
            return True
        if max(len(miss_r), len(miss_c)) > room:
            return False
        # branch on the uncovered point with the fewest candidate pairs
        best_opts = None
        for i in miss_r:
            opts = [c for c in cand if cells[c][0] == i]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
        for j in miss_c:
            opts = [c for c in cand if cells[c][1] == j]
            if best_opts is None or len(opts) < len(best_opts):
                best_opts = opts
        for c in best_opts:
            rest = [d for d in cand if d != c and ok[c, d]]
            if cover_exists(chosen + [c], rest, room - 1):
                return True
        return False

    allowed = list(range(N))
    size = None
    for k in range(max(n, m), n + m):
        if cover_exists([], allowed, k):
            size = k
            break
    if size is None:
        raise ValueError(f"no correspondence has distortion <= {max_distortion!r}")

    chosen: list[int] = []
    cand = allowed
    while True:
        rows = {cells[c][0] for c in chosen}
        cols = {cells[c][1] for c in chosen}
        if len(rows) == n and len(cols) == m:
            break
        for c in cand:
            rest = [d for d in cand if d > c and ok[c, d]]
            if cover_exists(chosen + [c], rest, size - len(chosen) - 1):
                chosen.append(c)
                cand = rest
                break
        else:  # pragma: no cover - the size search guarantees a completion
            raise AssertionError("canonical witness search lost feasibility")
    return Correspondence(X, Y, [cells[c] for c in chosen])
