"""Per-interval communication graphs and shortest-path routing.

Node ids are dense integers: ground stations first (in declaration order),
then satellites ordered by (plane, slot). Edges are undirected and weighted
by one-way propagation delay in milliseconds.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .geodesy import GeoPoint, elevation_matrix, ground_positions_eci, propagation_delay_ms
from .orbits import Fleet, OrbitalElements

GROUND = "ground"
SATELLITE = "satellite"


class InvalidPathError(ValueError):
    pass


@dataclass(frozen=True)
class NodeRef:
    id: int
    kind: str
    name: str = ""
    plane: int | None = None
    slot: int | None = None

    @property
    def is_ground(self) -> bool:
        return self.kind == GROUND


@dataclass(frozen=True)
class LinkRules:
    enable_intersatellite_links: bool = False
    min_elevation_deg: float = 25.0
    allow_gs_gs: bool = False
    # "ring": each satellite links its two in-plane neighbours
    # "plane": every same-plane pair within max_isl_range_km
    isl_mode: str = "ring"
    max_isl_range_km: float | None = None

    def __post_init__(self):
        if self.allow_gs_gs:
            raise ValueError("ground-to-ground links are never allowed")
        if self.isl_mode not in ("ring", "plane"):
            raise ValueError(f"unknown isl_mode {self.isl_mode!r}")
        if self.isl_mode == "plane" and self.max_isl_range_km is None:
            raise ValueError("isl_mode 'plane' needs max_isl_range_km")
        if not 0.0 <= self.min_elevation_deg <= 90.0:
            raise ValueError(f"min_elevation_deg {self.min_elevation_deg} outside [0, 90]")


def make_nodes(ground_names: Sequence[str], fleet: Fleet) -> list[NodeRef]:
    key = ("nodes", tuple(ground_names))
    if key not in fleet.memo:
        nodes = [NodeRef(i, GROUND, name) for i, name in enumerate(ground_names)]
        base = len(nodes)
        for k, el in enumerate(fleet.elements):
            nodes.append(NodeRef(base + k, SATELLITE, el.name or f"sat[{k}]", el.plane_index, el.slot_index))
        fleet.memo[key] = nodes
    return list(fleet.memo[key])


def _plane_pairs(fleet: Fleet, mode: str) -> np.ndarray:
    key = ("isl", mode)
    if key in fleet.memo:
        return fleet.memo[key]
    pairs = []
    by_plane: dict[int, list[int]] = {}
    for idx in np.lexsort((fleet.slot, fleet.plane)):
        by_plane.setdefault(int(fleet.plane[idx]), []).append(int(idx))
    for members in by_plane.values():
        count = len(members)
        if count < 2:
            continue
        if mode == "ring":
            # a two-satellite plane has one link, not two
            for i in range(count if count > 2 else 1):
                a, b = members[i], members[(i + 1) % count]
                pairs.append((min(a, b), max(a, b)))
        else:
            for i in range(count):
                for j in range(i + 1, count):
                    pairs.append((members[i], members[j]))
    arr = np.array(sorted(set(pairs)), dtype=np.int64).reshape(-1, 2)
    fleet.memo[key] = arr
    return arr


def _isl_pairs(fleet: Fleet, positions: np.ndarray, rules: LinkRules) -> np.ndarray:
    """Index pairs (into the fleet) of intra-plane satellite links."""
    arr = _plane_pairs(fleet, rules.isl_mode)
    if rules.max_isl_range_km is not None and len(arr):
        dist = np.linalg.norm(positions[arr[:, 0]] - positions[arr[:, 1]], axis=1)
        arr = arr[dist <= rules.max_isl_range_km]
    return arr


@dataclass
class TopologySnapshot:
    """Graph valid for one update interval. Shortest-path trees fill in lazily per source."""

    time_s: float
    nodes: list[NodeRef]
    positions: np.ndarray
    edges: list[tuple[int, int, float]]
    _csr: tuple = field(repr=False, default=None)
    _native: tuple = field(repr=False, default=None)
    _tables: dict = field(repr=False, default_factory=dict)
    _edge_delay: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        n = len(self.nodes)
        for a, b, w in self.edges:
            self._edge_delay[(a, b)] = w
            self._edge_delay[(b, a)] = w
        if self.edges:
            e = np.array([(a, b) for a, b, _ in self.edges], dtype=np.int64)
            w = np.array([x for _, _, x in self.edges], dtype=float)
            src = np.concatenate([e[:, 0], e[:, 1]])
            dst = np.concatenate([e[:, 1], e[:, 0]])
            ww = np.concatenate([w, w])
            order = np.lexsort((dst, src))
            src, dst, ww = src[order], dst[order], ww[order]
        else:
            src = dst = np.zeros(0, dtype=np.int64)
            ww = np.zeros(0)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        self._csr = (indptr, np.ascontiguousarray(dst, dtype=np.int64), np.ascontiguousarray(ww))
        self._native = kernels.prepare_csr(*self._csr)

    def neighbors(self, node: int) -> list[int]:
        indptr, indices, _ = self._csr
        return indices[indptr[node]:indptr[node + 1]].tolist()

    def edge_delay_ms(self, a: int, b: int) -> float | None:
        return self._edge_delay.get((a, b))

    def _solve(self, src: int) -> tuple[list, list]:
        table = self._tables.get(src)
        if table is None:
            table = self._tables[src] = kernels.dijkstra(*self._native, src)
        return table

    def shortest_paths(self, src: int) -> tuple[dict[int, int], dict[int, float]]:
        """Next-hop map and distance map (ms) from ``src``; unreachable nodes get ``inf``."""
        dist, pred = self._solve(src)
        next_hop = {}
        for v in range(len(dist)):
            if v == src or pred[v] < 0:
                continue
            hop = v
            while pred[hop] != src:
                hop = pred[hop]
            next_hop[v] = hop
        return next_hop, dict(enumerate(dist))

    def routing_tables(self) -> dict[int, dict[int, int]]:
        return {node.id: self.shortest_paths(node.id)[0] for node in self.nodes}

    def route(self, src: int, dst: int) -> list[int] | None:
        """Node path from src to dst, or None when dst is unreachable."""
        if src == dst:
            return [src]
        dist, pred = self._solve(src)
        if math.isinf(dist[dst]):
            return None
        path = [dst]
        while path[-1] != src:
            path.append(pred[path[-1]])
        path.reverse()
        return path

    def path_delay_ms(self, path: Sequence[int]) -> float:
        total = 0.0
        for a, b in zip(path, path[1:]):
            w = self._edge_delay.get((a, b))
            if w is None:
                raise InvalidPathError(f"no edge between nodes {a} and {b} at t={self.time_s}")
            total += w
        return total

    def write_edges_csv(self, writer) -> None:
        for a, b, w in self.edges:
            writer.writerow([f"{self.time_s:.6f}", a, b, f"{w:.9f}"])


def build_snapshot(
    time_s: float,
    satellites: Sequence[OrbitalElements] | Fleet,
    ground: Sequence[GeoPoint],
    rules: LinkRules,
    ground_names: Sequence[str] | None = None,
    theta0_rad: float = 0.0,
) -> TopologySnapshot:
    fleet = satellites if isinstance(satellites, Fleet) else Fleet(list(satellites))
    if ground_names is None:
        ground_names = [f"gs[{i}]" for i in range(len(ground))]
    nodes = make_nodes(ground_names, fleet)
    n_ground = len(ground)

    gpos = ground_positions_eci(list(ground), time_s, theta0_rad)
    spos = fleet.positions(time_s)
    positions = np.vstack([gpos, spos]) if len(spos) or len(gpos) else np.zeros((0, 3))

    edges: list[tuple[int, int, float]] = []
    if n_ground and len(fleet):
        elev = elevation_matrix(gpos, spos)
        gi, si = np.nonzero(elev >= rules.min_elevation_deg)
        dist = np.linalg.norm(spos[si] - gpos[gi], axis=1)
        delay = propagation_delay_ms(dist)
        edges.extend(zip(gi.tolist(), (si + n_ground).tolist(), delay.tolist()))
    if rules.enable_intersatellite_links and len(fleet):
        pairs = _isl_pairs(fleet, spos, rules)
        if len(pairs):
            dist = np.linalg.norm(spos[pairs[:, 0]] - spos[pairs[:, 1]], axis=1)
            delay = propagation_delay_ms(dist)
            edges.extend(zip((pairs[:, 0] + n_ground).tolist(), (pairs[:, 1] + n_ground).tolist(), delay.tolist()))
    edges.sort()
    return TopologySnapshot(time_s=time_s, nodes=nodes, positions=positions, edges=edges)


def shortest_paths(snapshot: TopologySnapshot, src: int):
    return snapshot.shortest_paths(src)


def route(snapshot: TopologySnapshot, src: int, dst: int):
    return snapshot.route(src, dst)


def path_delay_ms(snapshot: TopologySnapshot, path: Sequence[int]) -> float:
    return snapshot.path_delay_ms(path)


def write_edges_csv(path, snapshots) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "node_a", "node_b", "delay_ms"])
        for snap in snapshots:
            snap.write_edges_csv(writer)
