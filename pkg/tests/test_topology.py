import math
import random

import numpy as np
import pytest

from leosim import _kernels_py, kernels
from leosim.geodesy import EARTH_RADIUS_KM, GeoPoint
from leosim.orbits import ConstellationSpec, Fleet, OrbitalElements, build_constellation
from leosim.topology import InvalidPathError, LinkRules, TopologySnapshot, build_snapshot, make_nodes

from . import oracles

# frozen from oracles.path_delay_ms on a straight 600 km hop
VERTICAL_HOP_600_MS = 2.0013846

try:
    from leosim import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def random_snapshot(rng, n, p, integer_weights=False):
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                w = float(rng.randint(1, 4)) if integer_weights else rng.uniform(0.1, 10)
                edges.append((a, b, w))
    nodes = make_nodes([f"n{i}" for i in range(n)], Fleet([]))
    return TopologySnapshot(0.0, nodes, np.zeros((n, 3)), edges), edges


def test_dijkstra_matches_exhaustive_search_on_random_graphs():
    rng = random.Random(2024)
    for _ in range(1000):
        n = rng.randint(1, 8)
        snap, edges = random_snapshot(rng, n, rng.uniform(0.1, 0.8))
        src = rng.randrange(n)
        _, dist = snap.shortest_paths(src)
        best = oracles.all_simple_path_costs(n, edges, src)
        for v in range(n):
            if math.isinf(best[v]):
                assert math.isinf(dist[v])
                assert snap.route(src, v) is None
            else:
                assert dist[v] == pytest.approx(best[v], abs=1e-9)
                path = snap.route(src, v)
                assert path[0] == src and path[-1] == v
                assert snap.path_delay_ms(path) == pytest.approx(best[v], abs=1e-9)


def test_next_hop_is_first_step_of_route():
    rng = random.Random(5)
    snap, _ = random_snapshot(rng, 12, 0.4)
    next_hop, _ = snap.shortest_paths(0)
    for v, hop in next_hop.items():
        assert snap.route(0, v)[1] == hop


def test_ties_resolve_to_smaller_predecessor():
    # 0-1-3 and 0-2-3 cost the same; 3 must come through 1
    snap = TopologySnapshot(0.0, make_nodes(list("abcd"), Fleet([])), np.zeros((4, 3)),
                            [(0, 2, 1.0), (2, 3, 1.0), (0, 1, 1.0), (1, 3, 1.0)])
    assert snap.route(0, 3) == [0, 1, 3]


@pytest.mark.skipif(compiled is None, reason="compiled extension not built")
def test_backends_agree_exactly():
    rng = random.Random(99)
    for trial in range(300):
        n = rng.randint(1, 40)
        snap, _ = random_snapshot(rng, n, rng.uniform(0.05, 0.5), integer_weights=trial % 2 == 0)
        indptr, indices, weights = snap._csr
        for src in range(min(n, 5)):
            py = _kernels_py.dijkstra(indptr.tolist(), indices.tolist(), weights.tolist(), src)
            cy = compiled.dijkstra(indptr, indices, weights, src)
            assert py == cy


def test_backend_is_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_route_edge_cases():
    snap = TopologySnapshot(0.0, make_nodes(["a", "b", "c"], Fleet([])), np.zeros((3, 3)), [(0, 1, 2.5)])
    assert snap.route(1, 1) == [1]
    assert snap.route(0, 2) is None
    assert snap.path_delay_ms([0, 1]) == 2.5
    with pytest.raises(InvalidPathError):
        snap.path_delay_ms([0, 2])


def overhead_fleet(altitude_km=600):
    # one satellite straight above (0, 0) at t = 0
    return Fleet([OrbitalElements(EARTH_RADIUS_KM + altitude_km, 0, 0, plane_index=0, slot_index=0)])


def test_vertical_hop_delay():
    snap = build_snapshot(0.0, overhead_fleet(), [GeoPoint(0, 0)], LinkRules())
    (a, b, w), = snap.edges
    assert (a, b) == (0, 1)
    pts = [np.array([EARTH_RADIUS_KM, 0, 0]), np.array([EARTH_RADIUS_KM + 600, 0, 0])]
    assert w == pytest.approx(oracles.path_delay_ms(pts), abs=1e-9)
    assert w == pytest.approx(VERTICAL_HOP_600_MS, abs=1e-6)


def test_no_ground_to_ground_edges():
    with pytest.raises(ValueError):
        LinkRules(allow_gs_gs=True)
    sats = build_constellation(ConstellationSpec(6, 60, 600))
    ground = [GeoPoint(51.5, -0.1), GeoPoint(51.5001, -0.1), GeoPoint(40.7, -74)]
    snap = build_snapshot(0.0, sats, ground, LinkRules(enable_intersatellite_links=True))
    assert not any(a < 3 and b < 3 for a, b, _ in snap.edges)


def test_node_ordering():
    sats = build_constellation(ConstellationSpec(3, 4, 600))
    snap = build_snapshot(0.0, sats, [GeoPoint(0, 0), GeoPoint(10, 10)], LinkRules(), ["x", "y"])
    assert [n.name for n in snap.nodes[:2]] == ["x", "y"]
    assert [(n.plane, n.slot) for n in snap.nodes[2:]] == [(j, k) for j in range(3) for k in range(4)]
    assert [n.id for n in snap.nodes] == list(range(14))


def test_elevation_threshold_is_inclusive():
    fleet = overhead_fleet()
    assert build_snapshot(0.0, fleet, [GeoPoint(0, 0)], LinkRules(min_elevation_deg=90.0)).edges
    # 1 degree of longitude away the satellite is no longer at 90
    assert not build_snapshot(0.0, fleet, [GeoPoint(0, 1)], LinkRules(min_elevation_deg=90.0)).edges


def test_isl_ring_links_in_plane_neighbours_only():
    sats = build_constellation(ConstellationSpec(3, 5, 600))
    off = build_snapshot(0.0, sats, [], LinkRules())
    on = build_snapshot(0.0, sats, [], LinkRules(enable_intersatellite_links=True))
    assert off.edges == []
    assert len(on.edges) == 15
    for a, b, _ in on.edges:
        na, nb = on.nodes[a], on.nodes[b]
        assert na.plane == nb.plane
        assert (na.slot - nb.slot) % 5 in (1, 4)


def test_isl_two_satellite_plane_has_one_link():
    sats = build_constellation(ConstellationSpec(1, 2, 600))
    assert len(build_snapshot(0.0, sats, [], LinkRules(enable_intersatellite_links=True)).edges) == 1


def test_isl_plane_mode_respects_range():
    sats = build_constellation(ConstellationSpec(1, 8, 600))
    spacing = 2 * (EARTH_RADIUS_KM + 600) * math.sin(math.pi / 8)
    rules = LinkRules(enable_intersatellite_links=True, isl_mode="plane", max_isl_range_km=spacing * 1.01)
    assert len(build_snapshot(0.0, sats, [], rules).edges) == 8
    with pytest.raises(ValueError):
        LinkRules(isl_mode="plane")


def test_enabling_isls_never_lengthens_routes():
    sats = build_constellation(ConstellationSpec(6, 60, 600))
    ground = [GeoPoint(51.5074, -0.1278), GeoPoint(48.86, 2.35), GeoPoint(40.7128, -74.006)]
    for t in (0.0, 300.0, 900.0):
        off = build_snapshot(t, sats, ground, LinkRules())
        on = build_snapshot(t, sats, ground, LinkRules(enable_intersatellite_links=True))
        assert set((a, b) for a, b, _ in off.edges) <= set((a, b) for a, b, _ in on.edges)
        for dst in (1, 2):
            d_off = off.shortest_paths(0)[1][dst]
            d_on = on.shortest_paths(0)[1][dst]
            assert d_on <= d_off + 1e-9


def test_edges_csv(tmp_path):
    from leosim.topology import write_edges_csv
    snap = build_snapshot(0.0, overhead_fleet(), [GeoPoint(0, 0)], LinkRules())
    out = tmp_path / "e.csv"
    write_edges_csv(out, [snap])
    lines = out.read_text().splitlines()
    assert lines[0] == "time_s,node_a,node_b,delay_ms"
    assert lines[1].startswith("0.000000,0,1,2.00138")
