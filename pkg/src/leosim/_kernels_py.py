"""Pure-Python kernels. Reference semantics for the compiled ``_kernels`` module."""
import heapq
import math


def dijkstra(indptr, indices, weights, src):
    """Single-source shortest paths over a CSR adjacency.

    Returns ``(dist, pred)`` lists; unreachable nodes have ``inf`` / ``-1``.
    The heap pops in (distance, node id) order and an equal-cost relaxation
    moves the predecessor to the smaller node id, so results do not depend
    on adjacency order.
    """
    n = len(indptr) - 1
    dist = [math.inf] * n
    pred = [-1] * n
    done = [False] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if done[v]:
                continue
            nd = d + weights[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
            elif nd == dist[v] and u < pred[v]:
                pred[v] = u
    return dist, pred
