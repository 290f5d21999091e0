"""File ingestion, synthetic reading generation, and report serialization.

All CSV traffic uses one dialect: comma separated, '.' decimal, LF line
endings, mandatory header, UTF-8. Parsers reject malformed input with the
offending line number instead of repairing it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .clustering import Cluster, ClusterSet, Deployment, SensorNode
from .errors import DataFormatError
from .estimation import AccuracyReport
from .geometry import CorrelationModel, correlation

_JITTER_FRACTION = 1e-10


@dataclass
class ReadingMatrix:
    """Per-node, per-epoch readings with an explicit missing-cell mask."""

    node_ids: tuple[int, ...]
    epochs: tuple[int, ...]
    values: np.ndarray  # shape (nodes, epochs), NaN where missing
    missing: np.ndarray  # bool, same shape

    def __post_init__(self):
        shape = (len(self.node_ids), len(self.epochs))
        if self.values.shape != shape or self.missing.shape != shape:
            raise ValueError(f"values and missing must have shape {shape}")
        if not np.all(np.isfinite(self.values[~self.missing])):
            raise ValueError("present cells must hold finite values")

    def row(self, node_id: int) -> np.ndarray:
        return self.values[self.node_ids.index(node_id)]

    def present_values(self, node_id: int) -> np.ndarray:
        k = self.node_ids.index(node_id)
        return self.values[k][~self.missing[k]]


@dataclass(frozen=True)
class SyntheticScenario:
    """Recipe for a spatially correlated reading set.

    The base field is a zero-mean Gaussian process over node positions with
    covariance variance * correlation(distance). Per-node scales multiply the
    field and offsets shift it, so groups of nodes can differ in variability
    the way a sunlit group differs from a shaded one.
    """

    model: CorrelationModel
    variance: float = 1.0
    epochs: int = 800
    seed: int = 42
    offsets: Mapping[int, float] = field(default_factory=dict)
    scales: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.variance <= 0.0:
            raise ValueError(f"variance must be positive, got {self.variance}")
        if self.epochs < 2:
            raise ValueError(f"need at least 2 epochs, got {self.epochs}")
        bad = {i: s for i, s in self.scales.items() if s <= 0.0}
        if bad:
            raise ValueError(f"scales must be positive: {bad}")


def _open_text(source: str | Path | IO[str]) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    return source


def parse_nodes(source: str | Path | IO[str]) -> Deployment:
    """Read a deployment from CSV with header node_id,x,y,z."""
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["node_id", "x", "y", "z"]:
            raise DataFormatError(f"expected header node_id,x,y,z, got {header}", line=1)
        nodes: list[SensorNode] = []
        seen: set[int] = set()
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DataFormatError(f"expected 4 columns, got {len(row)}", line=lineno)
            try:
                nid = int(row[0])
                x, y, z = (float(v) for v in row[1:])
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
            if nid in seen:
                raise DataFormatError(f"duplicate node id {nid}", line=lineno)
            seen.add(nid)
            try:
                nodes.append(SensorNode(id=nid, position=(x, y, z)))
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
        if not nodes:
            raise DataFormatError("no nodes")
        return Deployment(nodes=tuple(nodes))
    finally:
        if isinstance(source, (str, Path)):
            fh.close()


def parse_readings(
    source: str | Path | IO[str], deployment: Deployment | None = None
) -> ReadingMatrix:
    """Read a reading trace from CSV with header epoch,node_id,value.

    Epochs need not be dense; cells absent from the file are marked missing.
    When a deployment is supplied, readings for unknown nodes are rejected.
    """
    fh = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["epoch", "node_id", "value"]:
            raise DataFormatError(f"expected header epoch,node_id,value, got {header}", line=1)
        known = set(deployment.ids()) if deployment is not None else None
        cells: dict[tuple[int, int], float] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataFormatError(f"expected 3 columns, got {len(row)}", line=lineno)
            try:
                epoch = int(row[0])
                nid = int(row[1])
                value = float(row[2])
            except ValueError as exc:
                raise DataFormatError(str(exc), line=lineno) from None
            if not np.isfinite(value):
                raise DataFormatError(f"non-finite value {row[2]}", line=lineno)
            if known is not None and nid not in known:
                raise DataFormatError(f"unknown node {nid}", line=lineno)
            if (nid, epoch) in cells:
                raise DataFormatError(f"duplicate cell (node {nid}, epoch {epoch})", line=lineno)
            cells[(nid, epoch)] = value
        if not cells:
            raise DataFormatError("no readings")
        node_ids = tuple(sorted({nid for nid, _ in cells}))
        epochs = tuple(sorted({e for _, e in cells}))
        values = np.full((len(node_ids), len(epochs)), np.nan)
        missing = np.ones((len(node_ids), len(epochs)), dtype=bool)
        nrow = {nid: k for k, nid in enumerate(node_ids)}
        ecol = {e: k for k, e in enumerate(epochs)}
        for (nid, e), v in cells.items():
            values[nrow[nid], ecol[e]] = v
            missing[nrow[nid], ecol[e]] = False
        return ReadingMatrix(node_ids=node_ids, epochs=epochs, values=values, missing=missing)
    finally:
        if isinstance(source, (str, Path)):
            fh.close()


def generate_synthetic(scn: SyntheticScenario, dep: Deployment) -> ReadingMatrix:
    """Draw a reading matrix from the scenario's Gaussian field over the deployment.

    The covariance matrix is Cholesky-factored; if coincident nodes make it
    numerically singular, a diagonal jitter of 1e-10 * variance is added once
    before giving up.
    """
    pos = dep.positions()
    diff = pos[:, None, :] - pos[None, :, :]
    dists = np.sqrt((diff**2).sum(axis=2))
    cov = scn.variance * correlation(scn.model, dists)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        jittered = cov + _JITTER_FRACTION * scn.variance * np.eye(len(dep))
        try:
            chol = np.linalg.cholesky(jittered)
        except np.linalg.LinAlgError:
            smallest = float(np.linalg.eigvalsh(cov).min())
            raise ValueError(
                f"covariance matrix is not positive definite even after jitter "
                f"(smallest eigenvalue {smallest:.3e})"
            ) from None
    rng = np.random.default_rng(scn.seed)
    draws = rng.standard_normal((scn.epochs, len(dep))) @ chol.T  # (epochs, nodes)
    ids = dep.ids()
    offsets = np.asarray([scn.offsets.get(i, 0.0) for i in ids])
    scales = np.asarray([scn.scales.get(i, 1.0) for i in ids])
    values = (offsets[:, None] + scales[:, None] * draws.T).astype(float)
    return ReadingMatrix(
        node_ids=tuple(ids),
        epochs=tuple(range(scn.epochs)),
        values=values,
        missing=np.zeros_like(values, dtype=bool),
    )


def sun_shade_groups(dep: Deployment, z_split: float = 4.6) -> tuple[set[int], set[int]]:
    """Split nodes by elevation: ids at or above z_split ("sun") and below ("shade")."""
    sun = {n.id for n in dep.nodes if n.position[2] >= z_split}
    return sun, set(dep.ids()) - sun


def sun_shade_scenario(
    dep: Deployment,
    model: CorrelationModel | None = None,
    epochs: int = 800,
    seed: int = 42,
) -> SyntheticScenario:
    """Bundled two-population scenario: a high-variance sunlit group (scale 3,
    offset 25) and a low-variance shaded group (scale 0.5, offset 18)."""
    sun, shade = sun_shade_groups(dep)
    return SyntheticScenario(
        model=model or CorrelationModel(theta=30.0, alpha=1.0),
        variance=1.0,
        epochs=epochs,
        seed=seed,
        offsets={**{i: 25.0 for i in sun}, **{i: 18.0 for i in shade}},
        scales={**{i: 3.0 for i in sun}, **{i: 0.5 for i in shade}},
    )


def write_readings(matrix: ReadingMatrix) -> str:
    """Serialize a reading matrix to the epoch,node_id,value CSV schema."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epoch", "node_id", "value"])
    for col, epoch in enumerate(matrix.epochs):
        for rowk, nid in enumerate(matrix.node_ids):
            if not matrix.missing[rowk, col]:
                writer.writerow([epoch, nid, repr(float(matrix.values[rowk, col]))])
    return buf.getvalue()


def write_cluster_report(
    cs: ClusterSet,
    reports: list[AccuracyReport] | None = None,
    metadata: Mapping[str, object] | None = None,
) -> str:
    """Serialize clusters (and accuracy reports, when present) to a JSON document.

    Clusters appear in formation order with stable field order; the schema is
    documented in the README.
    """
    by_head = {r.head: r for r in reports} if reports else {}
    entries = []
    for c in cs:
        entry: dict[str, object] = {
            "order": c.order_index,
            "head": c.head,
            "members": sorted(c.members),
        }
        r = by_head.get(c.head)
        if r is not None:
            entry["m"] = r.m
            entry["accuracy"] = r.accuracy
            entry["gain_term"] = r.gain_term
            entry["redundancy_term"] = r.redundancy_term
            entry["noise_term"] = r.noise_term
        entries.append(entry)
    doc: dict[str, object] = {"radius": cs.radius, "clusters": entries}
    if metadata:
        doc["metadata"] = dict(metadata)
    return json.dumps(doc, indent=2) + "\n"


def read_cluster_report(text: str) -> ClusterSet:
    """Rebuild a ClusterSet from a document produced by write_cluster_report."""
    doc = json.loads(text)
    clusters = tuple(
        Cluster(head=e["head"], members=frozenset(e["members"]), order_index=e["order"])
        for e in doc["clusters"]
    )
    return ClusterSet(clusters=clusters, radius=doc["radius"])


def write_cost_curves(state, costs: Mapping[int, float], selected: set[int]) -> tuple[str, str]:
    """Serialize a placement run: (curve CSV of round,mean_cost) and
    (node CSV of node_id,cost,selected)."""
    curve = io.StringIO()
    w = csv.writer(curve, lineterminator="\n")
    w.writerow(["round", "mean_cost"])
    for k, c in enumerate(state.cost_history, start=1):
        w.writerow([k, repr(float(c))])
    nodes = io.StringIO()
    w = csv.writer(nodes, lineterminator="\n")
    w.writerow(["node_id", "cost", "selected"])
    for nid in sorted(costs):
        w.writerow([nid, repr(float(costs[nid])), 1 if nid in selected else 0])
    return curve.getvalue(), nodes.getvalue()


def bundled_nodes_path() -> Path:
    """Path of the packaged 54-node coordinate fixture."""
    return Path(resources.files("wsn3d").joinpath("fixtures/intel54.csv"))


def load_bundled_deployment() -> Deployment:
    return parse_nodes(bundled_nodes_path())
