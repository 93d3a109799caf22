"""Model file format: one self-describing JSON document, format_version 1.

Layout:
    format_version  1
    model_kind      "boosted" | "tree" | "forest" | "knn"
    schema          [{name, kind, role, missing_allowed}, ...]
    encoding        {features: [{name, kind, levels}], target}
    params          learner configuration key/values
    base_score      float   (boosted)
    shrinkage       float   (boosted)
    trees           [[{f, t, l, r} | {v}, ...], ...]  (tree models)
    knn             {k, matrix, targets, means, scales}  (knn only)

Floats are serialized with shortest round-trip text, so a load of a save
predicts bit-identically. Loading validates the version, node shapes and
that every tree is a proper binary tree over its flat array.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict

from ..data.encoding import EncodingSpec
from ..data.table import ColumnSchema
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .knn import KnnRegressor
from .model import FittedModel, LearnerConfig
from .tree import RegressionTree

import numpy as np

FORMAT_VERSION = 1
SUPPORTED_VERSIONS = (1,)


class ModelFormatError(ValueError):
    pass


def save_model(model: FittedModel, destination=None) -> bytes:
    """Serialize a fitted model; optionally also write it to a path."""
    doc = {
        "format_version": FORMAT_VERSION,
        "model_kind": model.kind,
        "schema": [asdict(c) for c in model.schema],
        "encoding": model.encoding.to_payload(),
        "params": asdict(model.config),
    }
    p = model.predictor
    if model.kind == "boosted":
        doc["base_score"] = p.base_score
        doc["shrinkage"] = p.shrinkage
        doc["trees"] = [t.to_payload() for t in p.trees]
    elif model.kind == "tree":
        doc["trees"] = [p.to_payload()]
    elif model.kind == "forest":
        doc["trees"] = [t.to_payload() for t in p.trees]
    elif model.kind == "knn":
        doc["knn"] = {
            "k": p.k,
            "matrix": p.matrix.tolist(),
            "targets": p.targets.tolist(),
            "means": p.means.tolist(),
            "scales": p.scales.tolist(),
        }
    else:
        raise ModelFormatError(f"cannot save model kind {model.kind!r}")
    data = json.dumps(doc, indent=1).encode("utf-8")
    if destination is not None:
        with open(destination, "wb") as fh:
            fh.write(data)
    return data


def _validate_tree(payload: list, where: str) -> None:
    n = len(payload)
    if n == 0:
        raise ModelFormatError(f"{where}: empty node array")
    for i, node in enumerate(payload):
        if "v" in node:
            continue
        for key in ("f", "t", "l", "r"):
            if key not in node:
                raise ModelFormatError(f"{where}: node {i} lacks field {key!r}")
        for key in ("l", "r"):
            child = node[key]
            if not isinstance(child, int) or not 0 <= child < n:
                raise ModelFormatError(f"{where}: node {i} child index {child!r} out of range 0..{n - 1}")
    # every node must be reached exactly once from the root
    seen = set()
    stack = [0]
    while stack:
        i = stack.pop()
        if i in seen:
            raise ModelFormatError(f"{where}: node {i} reachable twice; not a proper tree")
        seen.add(i)
        node = payload[i]
        if "v" not in node:
            stack.extend((node["l"], node["r"]))
    if len(seen) != n:
        orphans = sorted(set(range(n)) - seen)
        raise ModelFormatError(f"{where}: unreachable nodes {orphans}")


def load_model(data: bytes | str) -> FittedModel:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not a valid model document: {exc}") from None

    version = doc.get("format_version")
    if version not in SUPPORTED_VERSIONS:
        raise ModelFormatError(
            f"unsupported format_version {version!r}; supported: {', '.join(map(str, SUPPORTED_VERSIONS))}"
        )
    kind = doc.get("model_kind")
    schema = tuple(ColumnSchema(**c) for c in doc["schema"])
    encoding = EncodingSpec.from_payload(doc["encoding"])
    config = LearnerConfig(**doc.get("params", {}))
    width = encoding.width

    if kind in ("boosted", "tree", "forest"):
        payloads = doc.get("trees")
        if not isinstance(payloads, list):
            raise ModelFormatError("tree model without a trees array")
        for i, payload in enumerate(payloads):
            _validate_tree(payload, f"tree {i}")
        trees = [RegressionTree.from_payload(p, width) for p in payloads]

    if kind == "boosted":
        predictor = GradientBoostedTrees(
            float(doc["base_score"]), float(doc["shrinkage"]), trees, config.tree_params()
        )
    elif kind == "tree":
        if len(trees) != 1:
            raise ModelFormatError(f"single-tree model must contain exactly 1 tree, found {len(trees)}")
        predictor = trees[0]
    elif kind == "forest":
        if not trees:
            raise ModelFormatError("forest model with no trees")
        subset = math.ceil(math.sqrt(width))
        predictor = RandomForest(trees, config.seed, subset, config.tree_params())
    elif kind == "knn":
        knn = doc.get("knn")
        if knn is None:
            raise ModelFormatError("knn model without knn payload")
        matrix = np.array(knn["matrix"], dtype=np.float64)
        targets = np.array(knn["targets"], dtype=np.float64)
        means = np.array(knn["means"], dtype=np.float64)
        scales = np.array(knn["scales"], dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape != (len(targets), width):
            raise ModelFormatError(
                f"knn matrix shape {matrix.shape} does not match {len(targets)} targets x width {width}"
            )
        if len(means) != width or len(scales) != width:
            raise ModelFormatError("knn normalization constants do not match encoding width")
        k = int(knn["k"])
        if not 1 <= k <= len(targets):
            raise ModelFormatError(f"knn k {k} out of range for {len(targets)} stored rows")
        predictor = KnnRegressor(matrix, targets, k, means, scales)
    else:
        raise ModelFormatError(f"unknown model_kind {kind!r}")

    return FittedModel(kind, predictor, encoding, schema, config)


def load_model_file(path) -> FittedModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())
