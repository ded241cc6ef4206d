"""Undirected weighted graphs and their symmetric normalized operators.

Graphs are kept dense: the target use is a few hundred nodes, where dense
linear algebra is both simpler and faster than sparse machinery.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    IsolatedNode,
    NegativeWeight,
    SelfLoop,
    UnknownNode,
)

MERGE_RULES = ("or", "max", "sum")


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph with per-node metadata.

    The weight matrix is symmetric, non-negative, and has a zero diagonal
    (no self-loops). Instances are immutable; operations return new graphs.
    """

    weights: np.ndarray
    node_labels: tuple[str, ...]
    node_classes: tuple[str, ...]
    edge_layers: dict[tuple[int, int], frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if not np.array_equal(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise SelfLoop("weight matrix has nonzero diagonal entries")
        if np.any(w < 0.0):
            raise NegativeWeight("weight matrix has negative entries")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if len(self.node_labels) != w.shape[0] or len(self.node_classes) != w.shape[0]:
            raise ValueError("node metadata length must match node count")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def class_indices(self, cls: str) -> list[int]:
        return [i for i, c in enumerate(self.node_classes) if c == cls]


@dataclass(frozen=True)
class NormalizedOperators:
    """Symmetric normalized adjacency A and Laplacian L = I - A."""

    adjacency: np.ndarray
    laplacian: np.ndarray
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]


def from_weights(weights, node_labels=None, node_classes=None) -> Graph:
    """Build a Graph from a symmetric weight matrix, with default metadata."""
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    labels = tuple(node_labels) if node_labels is not None else tuple(str(i) for i in range(n))
    classes = tuple(node_classes) if node_classes is not None else ("",) * n
    return Graph(w.copy(), labels, classes)


def load_graph(
    edge_records,
    node_records,
    layer_filter=None,
    merge: str = "max",
    binarize: bool = False,
) -> Graph:
    """Assemble a Graph from edge and node records.

    Parameters
    ----------
    edge_records : iterable of (u, v, weight, layer)
        Node ids must appear in ``node_records``. Directed duplicates are
        symmetrized by max after the layer merge.
    node_records : iterable of (id, label, class)
        Ids are mapped to indices in record order.
    layer_filter : set of layer names, optional
        Keep only records whose layer is in the set. None keeps all.
    merge : {"or", "max", "sum"}
        How duplicate (u, v) records across layers are combined. "or" sets
        the weight to 1 whenever any record carries a positive weight.
    binarize : bool
        Threshold final weights to {0, 1}.
    """
    if merge not in MERGE_RULES:
        raise ValueError(f"merge must be one of {MERGE_RULES}, got {merge!r}")
    node_records = list(node_records)
    index = {}
    labels, classes = [], []
    for node_id, label, cls in node_records:
        if node_id in index:
            raise ValueError(f"duplicate node id {node_id!r}")
        index[node_id] = len(index)
        labels.append(str(label))
        classes.append(str(cls))
    n = len(index)
    w = np.zeros((n, n))
    layers: dict[tuple[int, int], set[str]] = {}
    for u, v, weight, layer in edge_records:
        if layer_filter is not None and layer not in layer_filter:
            continue
        if u not in index or v not in index:
            missing = u if u not in index else v
            raise UnknownNode(f"edge references unknown node {missing!r}")
        i, j = index[u], index[v]
        if i == j:
            raise SelfLoop(f"self-loop on node {u!r}")
        weight = float(weight)
        if weight < 0:
            raise NegativeWeight(f"negative weight {weight} on edge ({u!r}, {v!r})")
        if merge == "sum":
            w[i, j] += weight
        elif merge == "max":
            w[i, j] = max(w[i, j], weight)
        else:  # "or"
            if weight > 0:
                w[i, j] = 1.0
        if weight > 0:
            layers.setdefault((min(i, j), max(i, j)), set()).add(str(layer))
    w = np.maximum(w, w.T)
    if binarize:
        w = (w > 0).astype(float)
    return Graph(
        w,
        tuple(labels),
        tuple(classes),
        {k: frozenset(v) for k, v in layers.items()},
    )


def binarize(g: Graph) -> Graph:
    """Replace every positive weight by 1."""
    return Graph((g.weights > 0).astype(float), g.node_labels, g.node_classes, g.edge_layers)


def connected_components(g: Graph) -> list[set[int]]:
    """Partition node indices into maximal connected sets (nonzero weights)."""
    seen = np.zeros(g.n, dtype=bool)
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = {start}
        seen[start] = True
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in np.nonzero(g.weights[i])[0]:
                if not seen[j]:
                    seen[j] = True
                    comp.add(int(j))
                    queue.append(int(j))
        components.append(comp)
    return components


def isolated_nodes(g: Graph) -> list[int]:
    return [int(i) for i in np.nonzero(g.degrees() == 0)[0]]


def drop_isolated(g: Graph) -> Graph:
    """Remove zero-degree nodes. Explicit on purpose: normalize() refuses them."""
    keep = np.nonzero(g.degrees() > 0)[0]
    return Graph(
        g.weights[np.ix_(keep, keep)].copy(),
        tuple(g.node_labels[i] for i in keep),
        tuple(g.node_classes[i] for i in keep),
    )


def normalize(g: Graph) -> NormalizedOperators:
    """Symmetric normalization: A = D^{-1/2} W D^{-1/2}, L = I - A.

    Raises IsolatedNode if any degree is zero; drop_isolated() first.
    """
    d = g.degrees()
    if np.any(d <= 0):
        bad = [g.node_labels[i] for i in isolated_nodes(g)]
        raise IsolatedNode(f"isolated nodes present: {bad}")
    inv_sqrt = 1.0 / np.sqrt(d)
    a = g.weights * np.outer(inv_sqrt, inv_sqrt)
    a = (a + a.T) / 2.0
    lap = np.eye(g.n) - a
    a.setflags(write=False)
    lap.setflags(write=False)
    d.setflags(write=False)
    return NormalizedOperators(adjacency=a, laplacian=lap, degrees=d)


def _data_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            yield row


def read_edge_csv(path) -> list[tuple[str, str, float, str]]:
    """Read an edge list CSV with header ``source,target,weight,layer``."""
    rows = _data_rows(path)
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != ["source", "target", "weight", "layer"]:
        raise ValueError(f"{path}: expected header 'source,target,weight,layer'")
    return [(r[0].strip(), r[1].strip(), float(r[2]), r[3].strip()) for r in rows]


def read_node_csv(path) -> list[tuple[str, str, str]]:
    """Read a node list CSV with header ``id,label,class``."""
    rows = _data_rows(path)
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != ["id", "label", "class"]:
        raise ValueError(f"{path}: expected header 'id,label,class'")
    return [(r[0].strip(), r[1].strip(), r[2].strip()) for r in rows]


def load_graph_csv(edge_path, node_path, layer_filter=None, merge="max", binarize=False) -> Graph:
    edge_path, node_path = Path(edge_path), Path(node_path)
    return load_graph(
        read_edge_csv(edge_path),
        read_node_csv(node_path),
        layer_filter=layer_filter,
        merge=merge,
        binarize=binarize,
    )
