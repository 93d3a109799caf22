"""CART-style regression tree grown best-first under a leaf budget.

Split search: candidate thresholds are the midpoints of adjacent distinct
sorted feature values; the winning split maximizes the squared-error
reduction of replacing one leaf mean with two child means. Ties break to
the lowest feature index, then the lowest threshold, and across leaves to
the earliest-created node. Routing sends feature <= threshold to the left.

All sums feeding split decisions and leaf values run over sorted copies,
so a permutation of the training rows yields a bit-identical tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..rng import SplitMix64


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TreeParams:
    max_leaves: int = 20
    min_samples_leaf: int = 10
    learning_rate: float = 0.2
    num_trees: int = 100

    def __post_init__(self):
        if self.max_leaves < 2:
            raise TrainingError("max_leaves must be >= 2")
        if self.min_samples_leaf < 1:
            raise TrainingError("min_samples_leaf must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise TrainingError("learning_rate must be in (0, 1]")
        # num_trees 0 is the mean-only baseline an ensemble degenerates to
        if self.num_trees < 0:
            raise TrainingError("num_trees must be >= 0")


@dataclass(frozen=True)
class TreeNode:
    """Either an internal test {feature, threshold, left, right} or a leaf
    {value}; child fields index into the same flat node array."""

    feature: int | None = None
    threshold: float | None = None
    left: int | None = None
    right: int | None = None
    value: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _stable_mean(values: np.ndarray) -> float:
    # summed in sorted order so the result is independent of row order
    return float(np.sum(np.sort(values)) / len(values))


def _canonical_sse(values: np.ndarray) -> float:
    """Summed squared error around the mean, as a pure function of the value
    multiset: sorted + exactly-rounded summation, so the same partition
    reached through different features compares bit-identically."""
    s = np.sort(values)
    m = math.fsum(s) / len(s)
    return math.fsum((v - m) ** 2 for v in s)


def _best_split(X, y, rows, min_leaf, features):
    """Best (gain, feature, threshold) for the rows, or None.

    gain is the reduction in summed squared error versus keeping the
    single leaf. Candidate child errors are scanned with a prefix-sum fast
    path; candidates within a hair of the per-feature minimum are
    re-scored canonically so exact ties resolve to the lowest feature
    index, then the lowest threshold.
    """
    n = len(rows)
    if n < 2 * min_leaf:
        return None
    yr = y[rows]
    if np.all(yr == yr[0]):
        return None
    yc = yr - _stable_mean(yr)
    parent_sse = _canonical_sse(yc)
    band = 1e-9 * max(parent_sse, 1.0)

    # Fast pass: per-feature champion via prefix sums over the (value,
    # target)-sorted order, which is already a pure function of the row
    # multiset. champs: (approx child sse, feature, threshold, sorted
    # targets, boundary) per feature.
    champs = []
    for f in features:
        v = X[rows, f]
        order = np.lexsort((yc, v))
        sv = v[order]
        if sv[0] == sv[-1]:
            continue
        sy = yc[order]
        csum = np.cumsum(sy)
        csq = np.cumsum(sy * sy)
        cut = np.nonzero(sv[:-1] != sv[1:])[0]
        n_left = cut + 1
        keep = (n_left >= min_leaf) & (n - n_left >= min_leaf)
        cut, n_left = cut[keep], n_left[keep]
        if cut.size == 0:
            continue
        sum_l, sq_l = csum[cut], csq[cut]
        sum_all, sq_all = csum[-1], csq[-1]
        n_right = n - n_left
        child_approx = (sq_l - sum_l * sum_l / n_left) + (
            (sq_all - sq_l) - (sum_all - sum_l) ** 2 / n_right
        )
        j = int(np.argmin(child_approx))  # first minimum -> lowest threshold
        k = int(cut[j])
        champs.append(
            (float(child_approx[j]), f, float((sv[k] + sv[k + 1]) / 2.0), sy, k)
        )
    if not champs:
        return None

    # Slow pass only on contenders: identical partitions reached through
    # different features must compare bit-identically, so near-tied
    # champions are re-scored canonically (sorted + fsum). Ties then
    # resolve to the lowest feature index (champs is feature-ascending).
    floor = min(c[0] for c in champs)
    contenders = [c for c in champs if c[0] <= floor + band]
    if len(contenders) == 1:
        child, f, threshold = contenders[0][:3]
    else:
        child = math.inf
        for approx, cf, ct, sy, k in contenders:
            exact = _canonical_sse(sy[: k + 1]) + _canonical_sse(sy[k + 1:])
            if exact < child:
                child, f, threshold = exact, cf, ct
    gain = parent_sse - child
    if gain <= 0.0:
        return None
    return (gain, f, threshold)


class RegressionTree:
    """Fitted tree over a flat node array; nodes[0] is the root."""

    def __init__(self, nodes: tuple[TreeNode, ...], n_features: int):
        self.nodes = tuple(nodes)
        self.n_features = n_features
        self._feat = np.array([n.feature if not n.is_leaf else -1 for n in self.nodes])
        self._thresh = np.array([n.threshold if not n.is_leaf else 0.0 for n in self.nodes])
        self._left = np.array([n.left if not n.is_leaf else 0 for n in self.nodes])
        self._right = np.array([n.right if not n.is_leaf else 0 for n in self.nodes])
        self._value = np.array([n.value if n.is_leaf else 0.0 for n in self.nodes])
        self._is_leaf = np.array([n.is_leaf for n in self.nodes])

    @property
    def n_leaves(self) -> int:
        return int(self._is_leaf.sum())

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        params: TreeParams,
        feature_rng: SplitMix64 | None = None,
        feature_subset_size: int | None = None,
    ) -> "RegressionTree":
        """Grow best-first: repeatedly split the pending leaf whose best
        candidate yields the largest SSE reduction, until the leaf budget
        is reached or no split reduces SSE.

        feature_rng + feature_subset_size make every prospective split
        search a fresh random subset of the features (forest mode).
        """
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2:
            raise TrainingError("X must be a 2-d matrix")
        if len(X) != len(y):
            raise TrainingError(f"{len(X)} rows but {len(y)} targets")
        if len(y) == 0:
            raise TrainingError("empty training set")
        p = X.shape[1]

        def pick_features():
            if feature_rng is None or feature_subset_size is None or feature_subset_size >= p:
                return range(p)
            return feature_rng.sample_indices(p, feature_subset_size)

        all_rows = np.arange(len(y))
        nodes: list[TreeNode] = [TreeNode(value=_stable_mean(y))]
        min_leaf = params.min_samples_leaf
        # pending: (node_index, rows, candidate) in creation order
        pending = [(0, all_rows, _best_split(X, y, all_rows, min_leaf, pick_features()))]
        n_leaves = 1
        while n_leaves < params.max_leaves:
            best_at = -1
            best_gain = 0.0
            for i, (_, _, cand) in enumerate(pending):
                if cand is not None and cand[0] > best_gain:
                    best_at, best_gain = i, cand[0]
            if best_at < 0:
                break
            node_index, rows, (_, f, t) = pending.pop(best_at)
            mask = X[rows, f] <= t
            left_rows, right_rows = rows[mask], rows[~mask]
            li, ri = len(nodes), len(nodes) + 1
            nodes[node_index] = TreeNode(feature=f, threshold=t, left=li, right=ri)
            nodes.append(TreeNode(value=_stable_mean(y[left_rows])))
            nodes.append(TreeNode(value=_stable_mean(y[right_rows])))
            pending.append((li, left_rows, _best_split(X, y, left_rows, min_leaf, pick_features())))
            pending.append((ri, right_rows, _best_split(X, y, right_rows, min_leaf, pick_features())))
            n_leaves += 1
        return cls(tuple(nodes), p)

    def _check_width(self, width: int):
        if width != self.n_features:
            raise TrainingError(
                f"feature width mismatch: tree expects {self.n_features}, got {width}"
            )

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        self._check_width(len(x))
        node = self.nodes[0]
        while not node.is_leaf:
            node = self.nodes[node.left if x[node.feature] <= node.threshold else node.right]
        return float(node.value)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return np.array([self.predict_one(X)])
        self._check_width(X.shape[1])
        idx = np.zeros(len(X), dtype=np.int64)
        active = ~self._is_leaf[idx]
        row_ids = np.arange(len(X))
        while active.any():
            rows = row_ids[active]
            at = idx[active]
            go_left = X[rows, self._feat[at]] <= self._thresh[at]
            idx[active] = np.where(go_left, self._left[at], self._right[at])
            active = ~self._is_leaf[idx]
        return self._value[idx]

    def leaf_for(self, x) -> int:
        """Index of the leaf a single feature vector routes to."""
        x = np.asarray(x, dtype=np.float64)
        self._check_width(len(x))
        i = 0
        while not self.nodes[i].is_leaf:
            node = self.nodes[i]
            i = node.left if x[node.feature] <= node.threshold else node.right
        return i

    def to_payload(self) -> list[dict]:
        out = []
        for n in self.nodes:
            if n.is_leaf:
                out.append({"v": n.value})
            else:
                out.append({"f": n.feature, "t": n.threshold, "l": n.left, "r": n.right})
        return out

    @classmethod
    def from_payload(cls, payload: list[dict], n_features: int) -> "RegressionTree":
        nodes = []
        for item in payload:
            if "v" in item:
                nodes.append(TreeNode(value=float(item["v"])))
            else:
                nodes.append(
                    TreeNode(
                        feature=int(item["f"]),
                        threshold=float(item["t"]),
                        left=int(item["l"]),
                        right=int(item["r"]),
                    )
                )
        return cls(tuple(nodes), n_features)
