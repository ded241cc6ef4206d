import os
from pathlib import Path

import numpy as np
import pytest

import guided_embedding as ge


def random_connected_graph(rng, n_max=40, n_min=8, p=0.3):
    """Erdos-Renyi graph, resampled until connected with no isolated node."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        w = np.triu((rng.random((n, n)) < p).astype(float), 1)
        w = w + w.T
        g = ge.from_weights(w)
        if len(ge.connected_components(g)) == 1 and np.all(g.degrees() > 0):
            return g


def two_community_graph(rng, size=12, p_in=0.4, p_out=0.04):
    """Two dense communities with sparse cross links; first community = focus."""
    n = 2 * size
    while True:
        w = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                same = (i < size) == (j < size)
                if rng.random() < (p_in if same else p_out):
                    w[i, j] = w[j, i] = 1.0
        g = ge.from_weights(w)
        if len(ge.connected_components(g)) == 1 and np.all(g.degrees() > 0):
            return g


def _celegans_paths():
    edges = os.environ.get("CELEGANS_EDGES")
    nodes = os.environ.get("CELEGANS_NODES")
    if edges and nodes and Path(edges).exists() and Path(nodes).exists():
        return Path(edges), Path(nodes)
    root = Path(__file__).resolve().parent.parent / "data" / "celegans"
    if (root / "edges.csv").exists() and (root / "nodes.csv").exists():
        return root / "edges.csv", root / "nodes.csv"
    return None


@pytest.fixture(scope="session")
def celegans():
    """(Graph, NormalizedOperators) for the 279-neuron connectome, if available.

    Looked up via CELEGANS_EDGES/CELEGANS_NODES or data/celegans/. The
    connectome-specific acceptance checks skip when the file is absent;
    their synthetic fallbacks always run.
    """
    paths = _celegans_paths()
    if paths is None:
        pytest.skip("connectome data not available")
    g = ge.load_graph_csv(paths[0], paths[1], merge="max", binarize=True)
    return g, ge.normalize(g)


def write_graph_csvs(tmpdir, weights, classes=None, labels=None):
    """Write a weight matrix out as the CLI's edge/node CSV pair."""
    tmpdir = Path(tmpdir)
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    labels = labels or [f"N{i}" for i in range(n)]
    classes = classes or ["a"] * n
    edge_lines = ["source,target,weight,layer"]
    for i in range(n):
        for j in range(i + 1, n):
            if w[i, j] > 0:
                edge_lines.append(f"{i},{j},{w[i, j]:g},chem")
    node_lines = ["id,label,class"] + [f"{i},{labels[i]},{classes[i]}" for i in range(n)]
    edge_path = tmpdir / "edges.csv"
    node_path = tmpdir / "nodes.csv"
    edge_path.write_text("\n".join(edge_lines) + "\n")
    node_path.write_text("\n".join(node_lines) + "\n")
    return edge_path, node_path
