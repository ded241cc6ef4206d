"""Command-line pipeline: criterion spectra, trajectory sweeps, clustering.

Every artifact embeds the seed and a hash of the run configuration, and
numbers are serialized with 12 significant digits in a fixed row order,
so identical config + seed reproduces outputs byte for byte.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, embedding, graph, slepian, spectral
from .errors import NUMERICAL_ERRORS, VALIDATION_ERRORS


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round12(x: float) -> float:
    return float(fmt(x))


@dataclass(frozen=True)
class RunConfig:
    edges: str
    nodes: str
    layers: Optional[tuple[str, ...]] = None
    merge: str = "max"
    binarize: bool = True
    focus_class: Optional[str] = None
    focus_nodes: Optional[tuple[str, ...]] = None
    steps: int = 11
    start: float = 1.0
    end: float = 0.0
    eigvecs: tuple[int, int] = (2, 3)
    approx_order: Optional[int] = None
    alignment: str = "chained"
    bandwidths: Optional[tuple[int, ...]] = None
    approx_orders: tuple[int, ...] = ()
    k_min: int = 2
    k_max: int = 10
    repetitions: int = 20
    draws: int = 999
    seed: int = 0

    def hash(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


def _load(config: RunConfig) -> graph.Graph:
    layer_filter = set(config.layers) if config.layers else None
    g = graph.load_graph_csv(
        config.edges,
        config.nodes,
        layer_filter=layer_filter,
        merge=config.merge,
        binarize=config.binarize,
    )
    return g


def _focus_indices(config: RunConfig, g: graph.Graph) -> list[int]:
    if config.focus_class is not None:
        idx = g.class_indices(config.focus_class)
        if not idx:
            raise ValueError(f"no nodes of class {config.focus_class!r}")
        return idx
    if config.focus_nodes is not None:
        by_label = {lbl: i for i, lbl in enumerate(g.node_labels)}
        try:
            return [by_label[lbl] for lbl in config.focus_nodes]
        except KeyError as exc:
            raise ValueError(f"unknown node label {exc.args[0]!r}") from None
    raise ValueError("a focus class or an explicit node list is required")


def _header(config: RunConfig, columns: str) -> list[str]:
    return [
        f"# config_hash={config.hash()}",
        f"# seed={config.seed}",
        columns,
    ]


def _write_lines(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _spectrum_csv(path: Path, config: RunConfig, columns: str, rows) -> None:
    lines = _header(config, columns)
    lines.extend(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) for row in rows)
    _write_lines(path, lines)


def cmd_spectrum(config: RunConfig, outdir: Path) -> list[Path]:
    g = _load(config)
    ops = graph.normalize(g)
    focus = _focus_indices(config, g)
    selection = slepian.CooperationWeights.binary(focus, g.n)
    basis = spectral.eig_sym(ops.laplacian, "ascending")
    lhalf = spectral.sqrt_psd_exact(ops.laplacian)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    bandwidths = config.bandwidths or (g.n,)
    for w in bandwidths:
        mu = slepian.concentration_slepians(basis, selection, w)
        path = outdir / f"mu_W{w}.csv"
        _spectrum_csv(path, config, "index,value", enumerate(map(float, mu.values)))
        written.append(path)
        xi = slepian.embedded_distance_slepians(basis, lhalf, selection, w)
        path = outdir / f"xi_W{w}.csv"
        _spectrum_csv(path, config, "index,value", enumerate(map(float, xi.values)))
        written.append(path)
    zeta = slepian.guided_slepians(slepian.guided_matrix_exact(selection, lhalf), selection, lhalf)
    path = outdir / "zeta.csv"
    rows = (
        (i, float(z), float(cm), float(cx))
        for i, (z, cm, cx) in enumerate(zip(zeta.values, zeta.companion_mu, zeta.companion_xi))
    )
    _spectrum_csv(path, config, "index,zeta,mu,xi", rows)
    written.append(path)
    for order in config.approx_orders:
        approx = slepian.guided_slepians(
            slepian.guided_matrix_approx(selection, ops.adjacency, order), selection
        )
        path = outdir / f"zeta_approx_K{order}.csv"
        _spectrum_csv(path, config, "index,value", enumerate(map(float, approx.values)))
        written.append(path)
    return written


def cmd_sweep(config: RunConfig, outdir: Path) -> list[Path]:
    g = _load(config)
    ops = graph.normalize(g)
    focus = _focus_indices(config, g)
    schedule = embedding.make_schedule(g.n, focus, config.steps, config.start, config.end)
    traj = embedding.trajectory_sweep(
        ops,
        schedule,
        indices=config.eigvecs,
        approx_order=config.approx_order,
        alignment=config.alignment,
    )
    outdir.mkdir(parents=True, exist_ok=True)
    doc = {
        "config_hash": config.hash(),
        "seed": config.seed,
        "n": g.n,
        "node_labels": list(g.node_labels),
        "node_classes": list(g.node_classes),
        "focus_indices": sorted(focus),
        "eigvec_indices": list(config.eigvecs),
        "off_focus_weights": [
            _round12(float(cw.m[[i for i in range(g.n) if i not in schedule.focus][0]]))
            if len(schedule.focus) < g.n
            else 1.0
            for cw in schedule.steps
        ],
        "steps": [
            {
                "step": t,
                "zeta": [_round12(v) for v in frame.zeta_values],
                "coords": [[_round12(x), _round12(y)] for x, y in frame.coords],
            }
            for t, frame in enumerate(traj.frames)
        ],
        "warnings": list(traj.warnings),
    }
    json_path = outdir / "trajectory.json"
    json_path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    csv_path = outdir / "trajectory.csv"
    lines = _header(config, "node,step,x,y")
    for node in range(g.n):
        for t in range(len(traj.frames)):
            x, y = traj.per_node_paths[node, t]
            lines.append(f"{node},{t},{fmt(x)},{fmt(y)}")
    _write_lines(csv_path, lines)
    return [json_path, csv_path]


def _cluster_table(labels_by_cluster: list[list[str]]) -> list[str]:
    header = ",".join(f"C{i + 1}" for i in range(len(labels_by_cluster)))
    depth = max(len(c) for c in labels_by_cluster)
    rows = [header]
    for r in range(depth):
        rows.append(",".join(c[r] if r < len(c) else "" for c in labels_by_cluster))
    return rows


def cmd_cluster(config: RunConfig, trajectory_path: Path, outdir: Path) -> list[Path]:
    doc = json.loads(Path(trajectory_path).read_text(encoding="utf-8"))
    g = _load(config)
    if g.n != doc["n"]:
        raise ValueError("trajectory and graph have different node counts")
    focus = list(doc["focus_indices"])
    coords = np.asarray(doc["steps"][-1]["coords"], dtype=float)
    points = coords[focus]
    selection = analysis.silhouette_select(
        points,
        k_range=(config.k_min, config.k_max),
        repetitions=config.repetitions,
        seed=config.seed,
    )
    outdir.mkdir(parents=True, exist_ok=True)
    labels = selection.assignment.labels
    clusters = [
        sorted(g.node_labels[focus[i]] for i in np.nonzero(labels == c)[0])
        for c in range(selection.k)
    ]
    table_path = outdir / "clusters.csv"
    _write_lines(table_path, _header(config, "")[:2] + _cluster_table(clusters))

    sil_path = outdir / "silhouette.csv"
    lines = _header(config, "k,negatives,mean_silhouette,selected")
    for k in sorted(selection.per_k):
        neg, mean = selection.per_k[k]
        lines.append(f"{k},{neg},{fmt(mean)},{int(k == selection.k)}")
    lines.append("node,label,silhouette")
    for i, idx in enumerate(focus):
        lines.append(f"{idx},{g.node_labels[idx]},{fmt(selection.silhouettes[i])}")
    _write_lines(sil_path, lines)

    # off-focus nodes enter the modularity test as one additional cluster
    full_labels = np.full(g.n, selection.k, dtype=int)
    full_labels[focus] = labels
    a_bin = (g.weights > 0).astype(float)
    test = analysis.permutation_test(a_bin, full_labels, draws=config.draws, seed=config.seed)
    mod_path = outdir / "modularity.json"
    mod_doc = {
        "config_hash": config.hash(),
        "seed": config.seed,
        "k_selected": selection.k,
        "groups_tested": int(len(np.unique(full_labels))),
        "q_observed": _round12(test.q_observed),
        "p_value": _round12(test.p_value),
        "null_samples": [_round12(v) for v in test.null_samples],
    }
    mod_path.write_text(json.dumps(mod_doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return [table_path, sil_path, mod_path]


def _csv_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", required=True, help="edge CSV (source,target,weight,layer)")
    p.add_argument("--nodes", required=True, help="node CSV (id,label,class)")
    p.add_argument("--layers", help="comma-separated layer filter (default: all layers)")
    p.add_argument("--merge", choices=graph.MERGE_RULES, default="max")
    p.add_argument("--binarize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--focus-class", help="node class whose members get weight 1")
    p.add_argument("--focus-nodes", help="comma-separated node labels to focus on")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="guided-embed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="criterion eigenvalue spectra as CSV")
    _add_graph_args(p)
    p.add_argument("--bandwidths", help="comma-separated bandwidths (default: full)")
    p.add_argument("--approx-orders", help="comma-separated truncation orders for the spectrum")

    p = sub.add_parser("sweep", help="weight-sweep trajectory embedding")
    _add_graph_args(p)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--end", type=float, default=0.0)
    p.add_argument("--eigvecs", default="2,3", help="1-based eigenvector pair, e.g. 2,3")
    p.add_argument("--approx-order", type=int, help="truncation order (omit for exact)")
    p.add_argument("--alignment", choices=("chained", "first"), default="chained")

    p = sub.add_parser("cluster", help="cluster a trajectory's final frame")
    _add_graph_args(p)
    p.add_argument("--trajectory", required=True, help="trajectory.json from the sweep command")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--draws", type=int, default=999)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    eigvecs = (2, 3)
    if getattr(args, "eigvecs", None):
        pair = _csv_ints(args.eigvecs)
        if len(pair) != 2:
            raise ValueError("--eigvecs expects exactly two indices")
        eigvecs = pair
    return RunConfig(
        edges=args.edges,
        nodes=args.nodes,
        layers=tuple(args.layers.split(",")) if args.layers else None,
        merge=args.merge,
        binarize=args.binarize,
        focus_class=args.focus_class,
        focus_nodes=tuple(args.focus_nodes.split(",")) if args.focus_nodes else None,
        steps=getattr(args, "steps", 11),
        start=getattr(args, "start", 1.0),
        end=getattr(args, "end", 0.0),
        eigvecs=eigvecs,
        approx_order=getattr(args, "approx_order", None),
        alignment=getattr(args, "alignment", "chained"),
        bandwidths=_csv_ints(args.bandwidths) if getattr(args, "bandwidths", None) else None,
        approx_orders=_csv_ints(args.approx_orders) if getattr(args, "approx_orders", None) else (),
        k_min=getattr(args, "k_min", 2),
        k_max=getattr(args, "k_max", 10),
        repetitions=getattr(args, "repetitions", 20),
        draws=getattr(args, "draws", 999),
        seed=args.seed,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        outdir = Path(args.outdir)
        if args.command == "spectrum":
            written = cmd_spectrum(config, outdir)
        elif args.command == "sweep":
            written = cmd_sweep(config, outdir)
        else:
            written = cmd_cluster(config, Path(args.trajectory), outdir)
    except (*NUMERICAL_ERRORS, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (*VALIDATION_ERRORS, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
