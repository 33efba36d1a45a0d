"""Independent reference computations used by scenario `--check` oracles.

Everything here works on plain adjacency maps built by brute force from node
positions, deliberately sharing no code with the aggregate runtime: the
gradient blocks relax estimates through the engine, these compute the same
quantities with textbook graph algorithms.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterable

Adjacency = dict[int, dict[int, float]]


def build_radius_graph(positions: dict[int, tuple], radius: float) -> Adjacency:
    """All-pairs induced graph: an edge wherever the distance is within radius."""
    ids = sorted(positions)
    adjacency: Adjacency = {i: {} for i in ids}
    for index, i in enumerate(ids):
        xi, yi = positions[i]
        for j in ids[index + 1 :]:
            xj, yj = positions[j]
            distance = math.hypot(xj - xi, yj - yi)
            if distance <= radius and radius > 0:
                adjacency[i][j] = distance
                adjacency[j][i] = distance
    return adjacency


def dijkstra(adjacency: Adjacency, sources: Iterable[int]) -> dict[int, float]:
    """Multi-source shortest-path distances; unreachable nodes get +inf."""
    distances = {node: math.inf for node in adjacency}
    heap = []
    for source in sources:
        distances[source] = 0.0
        heapq.heappush(heap, (0.0, source))
    while heap:
        d, node = heapq.heappop(heap)
        if d > distances[node]:
            continue
        for neighbor, weight in adjacency[node].items():
            candidate = d + weight
            if candidate < distances[neighbor]:
                distances[neighbor] = candidate
                heapq.heappush(heap, (candidate, neighbor))
    return distances


def bfs_hops(adjacency: Adjacency, sources: Iterable[int]) -> dict[int, float]:
    """Hop counts from the nearest source; unreachable nodes get +inf."""
    hops = {node: math.inf for node in adjacency}
    frontier = []
    for source in sources:
        hops[source] = 0
        frontier.append(source)
    depth = 0
    while frontier:
        depth += 1
        next_frontier = []
        for node in frontier:
            for neighbor in adjacency[node]:
                if hops[neighbor] == math.inf:
                    hops[neighbor] = depth
                    next_frontier.append(neighbor)
        frontier = next_frontier
    return hops


def graph_diameter(adjacency: Adjacency) -> int:
    """Largest finite hop distance between any pair (0 for singletons)."""
    diameter = 0
    for node in adjacency:
        hops = bfs_hops(adjacency, [node])
        finite = [h for h in hops.values() if h != math.inf]
        diameter = max(diameter, int(max(finite)))
    return diameter


def descend_parent(adjacency: Adjacency, potentials: dict[int, float], node: int) -> int:
    """The parent rule on converged potentials: strictly smaller, min (value, id)."""
    best = None
    for neighbor in adjacency[node]:
        value = potentials[neighbor]
        if value < potentials[node]:
            key = (value, neighbor)
            if best is None or key < best:
                best = key
    return best[1] if best is not None else node


def parent_chain(adjacency: Adjacency, potentials: dict[int, float], start: int) -> set[int]:
    """Nodes on the descent from ``start`` to the potential's minimum."""
    chain = {start}
    node = start
    while True:
        parent = descend_parent(adjacency, potentials, node)
        if parent == node:
            return chain
        chain.add(parent)
        node = parent
