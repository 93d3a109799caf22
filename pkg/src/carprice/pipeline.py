"""Declarative dataflow graphs over the dataset, learner and metric
operations: nodes carry a module kind plus parameters, edges wire typed
output ports to input ports, and execution runs in topological order.

Graph configs are JSON documents::

    {
      "nodes": {
        "jan":   {"kind": "import_csv", "params": {"path": "data/jan.csv"}},
        "merge": {"kind": "add_rows"},
        ...
      },
      "edges": [
        {"from": "jan.dataset", "to": "merge.left"},
        ...
      ]
    }

Validation is total: parse_graph reports every problem it can find (unknown
kinds, dangling ports, port type mismatches, cycles) without executing
anything. At run time a failing node aborts only its downstream dependents;
independent branches still complete.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .data import table as _table
from .data.table import Dataset
from .learners.model import FittedModel, SCORED_COLUMN, config_from_params, train_model
from .metrics import EvaluationReport, evaluate

DATASET, MODEL, REPORT, TEXT, ANY = "Dataset", "FittedModel", "Report", "text", "any"


class GraphValidationError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


class GraphRunError(ValueError):
    pass


@dataclass(frozen=True)
class NodeSpec:
    inputs: dict
    outputs: dict
    required_params: tuple = ()
    optional_params: tuple = ()
    optional_inputs: tuple = ()


NODE_SPECS = {
    "import_csv": NodeSpec({}, {"dataset": DATASET}, optional_params=("path",)),
    "add_rows": NodeSpec({"left": DATASET, "right": DATASET}, {"dataset": DATASET}),
    "select_columns": NodeSpec({"dataset": DATASET}, {"dataset": DATASET}, required_params=("columns",)),
    "clean_missing": NodeSpec({"dataset": DATASET}, {"dataset": DATASET}),
    "edit_metadata": NodeSpec({"dataset": DATASET}, {"dataset": DATASET}, required_params=("column", "kind")),
    "split_data": NodeSpec({"dataset": DATASET}, {"left": DATASET, "right": DATASET},
                           required_params=("fraction",), optional_params=("seed",)),
    "train_model": NodeSpec({"dataset": DATASET}, {"model": MODEL},
                            optional_params=("algo", "trees", "learning_rate", "max_leaves",
                                             "min_samples_leaf", "k", "seed", "include_month")),
    "score_model": NodeSpec({"model": MODEL, "dataset": DATASET}, {"scored": DATASET}),
    "evaluate_model": NodeSpec({"scored": DATASET}, {"report": REPORT}),
    "convert_to_csv": NodeSpec({"dataset": DATASET}, {"text": TEXT}),
    # pass-through markers; they matter only when the graph becomes a service
    "web_input": NodeSpec({"value": ANY}, {"value": ANY}, optional_inputs=("value",)),
    "web_output": NodeSpec({"value": ANY}, {"value": ANY}),
}


@dataclass(frozen=True)
class Edge:
    source: str
    source_port: str
    target: str
    target_port: str


@dataclass(frozen=True)
class PipelineGraph:
    nodes: dict        # id -> {"kind": str, "params": dict}
    edges: tuple

    def incoming(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.target == node_id]


@dataclass
class NodeResult:
    status: str               # "ok" | "failed" | "skipped"
    outputs: dict = field(default_factory=dict)
    error: str | None = None


def _parse_endpoint(text: str, side: str, errors: list[str]):
    if not isinstance(text, str) or text.count(".") != 1:
        errors.append(f"edge {side} {text!r} must look like 'node.port'")
        return None
    return tuple(text.split("."))


def parse_graph(config: str | bytes | dict) -> PipelineGraph:
    """Parse and validate a graph config; raises GraphValidationError
    carrying every validation error found, not just the first."""
    if isinstance(config, bytes):
        config = config.decode("utf-8")
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise GraphValidationError([f"config is not valid JSON: {exc}"]) from None

    errors: list[str] = []
    raw_nodes = config.get("nodes")
    if not isinstance(raw_nodes, dict) or not raw_nodes:
        raise GraphValidationError(["config must carry a non-empty 'nodes' map"])

    nodes = {}
    for node_id, entry in raw_nodes.items():
        if "." in node_id:
            errors.append(f"node id {node_id!r} must not contain '.'")
            continue
        kind = entry.get("kind")
        params = entry.get("params", {})
        spec = NODE_SPECS.get(kind)
        if spec is None:
            errors.append(f"node {node_id}: unknown kind {kind!r}")
            continue
        allowed = set(spec.required_params) | set(spec.optional_params)
        for missing in (set(spec.required_params) - set(params)):
            errors.append(f"node {node_id}: missing required param {missing!r}")
        for extra in sorted(set(params) - allowed):
            errors.append(f"node {node_id}: unknown param {extra!r}")
        if kind == "train_model":
            try:
                config_from_params(params)
            except Exception as exc:
                errors.append(f"node {node_id}: bad learner params: {exc}")
        nodes[node_id] = {"kind": kind, "params": dict(params)}

    edges = []
    seen_targets = {}
    for raw in config.get("edges", []):
        src = _parse_endpoint(raw.get("from"), "source", errors)
        dst = _parse_endpoint(raw.get("to"), "target", errors)
        if src is None or dst is None:
            continue
        (s_node, s_port), (t_node, t_port) = src, dst
        ok = True
        for end, node_name, port, direction in ((src, s_node, s_port, "output"), (dst, t_node, t_port, "input")):
            if node_name not in nodes:
                errors.append(f"edge references unknown node {node_name!r}")
                ok = False
                continue
            spec = NODE_SPECS[nodes[node_name]["kind"]]
            ports = spec.outputs if direction == "output" else spec.inputs
            if port not in ports:
                errors.append(
                    f"node {node_name} ({nodes[node_name]['kind']}) has no {direction} port {port!r}"
                )
                ok = False
        if not ok:
            continue
        s_type = NODE_SPECS[nodes[s_node]["kind"]].outputs[s_port]
        t_type = NODE_SPECS[nodes[t_node]["kind"]].inputs[t_port]
        if ANY not in (s_type, t_type) and s_type != t_type:
            errors.append(
                f"type mismatch on {s_node}.{s_port} -> {t_node}.{t_port}: {s_type} vs {t_type}"
            )
        key = (t_node, t_port)
        if key in seen_targets:
            errors.append(f"input port {t_node}.{t_port} is wired twice")
        seen_targets[key] = True
        edges.append(Edge(s_node, s_port, t_node, t_port))

    # every non-optional input port needs exactly one inbound edge
    for node_id, entry in nodes.items():
        spec = NODE_SPECS[entry["kind"]]
        for port in spec.inputs:
            if port in spec.optional_inputs:
                continue
            if (node_id, port) not in seen_targets:
                errors.append(f"node {node_id}: input port {port!r} is not connected")

    # cycle check via Kahn's algorithm; whatever cannot be ordered is cyclic
    indegree = {n: 0 for n in nodes}
    for e in edges:
        if e.target in indegree and e.source in indegree:
            indegree[e.target] += 1
    ready = [n for n, d in indegree.items() if d == 0]
    seen = 0
    while ready:
        current = ready.pop(0)
        seen += 1
        for e in edges:
            if e.source == current and e.target in indegree:
                indegree[e.target] -= 1
                if indegree[e.target] == 0:
                    ready.append(e.target)
    if seen != len(nodes):
        cyclic = sorted(n for n, d in indegree.items() if d > 0)
        errors.append(f"graph has a cycle through: {', '.join(cyclic)}")

    if errors:
        raise GraphValidationError(errors)
    return PipelineGraph(nodes, tuple(edges))


def _resolve_import(node_id: str, params: dict, inputs: dict) -> Dataset:
    if inputs and node_id in inputs:
        value = inputs[node_id]
        if isinstance(value, Dataset):
            return value
        return _table.parse_csv(value)
    path = params.get("path")
    if not path:
        raise GraphRunError(f"import node {node_id}: no run input provided and no path configured")
    with open(path, "r", encoding="utf-8") as fh:
        return _table.parse_csv(fh.read())


def _run_node(node_id: str, kind: str, params: dict, ins: dict, run_inputs: dict) -> dict:
    if kind == "import_csv":
        return {"dataset": _resolve_import(node_id, params, run_inputs)}
    if kind == "add_rows":
        return {"dataset": _table.add_rows(ins["left"], ins["right"])}
    if kind == "select_columns":
        return {"dataset": _table.select_columns(ins["dataset"], params["columns"])}
    if kind == "clean_missing":
        cleaned, _dropped = _table.clean_missing(ins["dataset"])
        return {"dataset": cleaned}
    if kind == "edit_metadata":
        return {"dataset": _table.edit_metadata(ins["dataset"], params["column"], params["kind"])}
    if kind == "split_data":
        left, right = _table.split_data(ins["dataset"], params["fraction"], params.get("seed", 42))
        return {"left": left, "right": right}
    if kind == "train_model":
        return {"model": train_model(ins["dataset"], config_from_params(params))}
    if kind == "score_model":
        return {"scored": ins["model"].score_dataset(ins["dataset"])}
    if kind == "evaluate_model":
        scored = ins["scored"]
        preds = scored.column(SCORED_COLUMN)
        target = scored.target_column()
        if target is None:
            raise GraphRunError("scored dataset has no target column to evaluate against")
        actual = scored.column(target.name)
        if any(v is None for v in actual):
            raise GraphRunError("scored dataset has missing target values")
        return {"report": evaluate(actual, preds)}
    if kind == "convert_to_csv":
        return {"text": _table.to_csv(ins["dataset"])}
    if kind in ("web_input", "web_output"):
        if "value" in ins:
            return {"value": ins["value"]}
        if run_inputs and node_id in run_inputs:
            return {"value": run_inputs[node_id]}
        raise GraphRunError(f"{kind} node {node_id}: no value wired or supplied")
    raise GraphRunError(f"unknown node kind {kind!r}")


def run_graph(graph: PipelineGraph, inputs: dict | None = None) -> dict:
    """Execute in topological order; returns {node id: NodeResult}.

    A failing node marks its downstream dependents skipped; everything
    else still runs. Execution order is deterministic (config order among
    ready nodes), and node functions are pure, so identical configs and
    seeds reproduce identical outputs.
    """
    inputs = inputs or {}
    results: dict[str, NodeResult] = {}
    order = []
    indegree = {n: len(graph.incoming(n)) for n in graph.nodes}
    ready = [n for n in graph.nodes if indegree[n] == 0]
    while ready:
        current = ready.pop(0)
        order.append(current)
        for e in graph.edges:
            if e.source == current:
                indegree[e.target] -= 1
                if indegree[e.target] == 0:
                    ready.append(e.target)

    for node_id in order:
        entry = graph.nodes[node_id]
        upstream = graph.incoming(node_id)
        blocked = [e.source for e in upstream if results[e.source].status != "ok"]
        if blocked:
            results[node_id] = NodeResult("skipped", error=f"upstream failed: {', '.join(sorted(set(blocked)))}")
            continue
        ins = {e.target_port: results[e.source].outputs[e.source_port] for e in upstream}
        try:
            outputs = _run_node(node_id, entry["kind"], entry["params"], ins, inputs)
        except Exception as exc:
            results[node_id] = NodeResult("failed", error=f"{type(exc).__name__}: {exc}")
            continue
        results[node_id] = NodeResult("ok", outputs=outputs)
    return results


def export_scored_csv(results: dict, node_id: str) -> str:
    """CSV text of a run node's scored dataset: the original columns plus
    the trailing prediction column."""
    if node_id not in results:
        raise GraphRunError(f"no node {node_id!r} in run results")
    result = results[node_id]
    if result.status != "ok":
        raise GraphRunError(f"node {node_id} did not complete: {result.error}")
    datasets = [v for v in result.outputs.values() if isinstance(v, Dataset)]
    if not datasets:
        raise GraphRunError(f"node {node_id} output is not a dataset")
    scored = datasets[0]
    if SCORED_COLUMN not in scored.column_names:
        raise GraphRunError(f"node {node_id} output has no {SCORED_COLUMN!r} column")
    return _table.to_csv(scored)
