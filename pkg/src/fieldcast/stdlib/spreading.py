"""Information spreading: potential fields, broadcast, accumulating casts.

These are the classic self-stabilizing blocks built on the min-plus gradient:
each node relaxes its estimate against the neighbors' shared estimates every
round, so on a static connected graph the potential converges to the
shortest-path distance to the nearest source and heals itself after sources
or topology change.
"""

from __future__ import annotations

from typing import Any, Callable

from ..calculus import aggregate, share
from ..fields import NeighborhoodField
from ._util import INF, check_metric


@aggregate
def distance_to(source: bool, metric: NeighborhoodField) -> float:
    """Shortest-path distance to the nearest source under ``metric``.

    One Bellman-Ford relaxation per round: sources clamp to 0, everyone else
    takes the minimum neighbor estimate plus edge length, +inf when no
    neighbor has an estimate yet.  Own older estimates never participate, so
    values can rise again after a source moves or disappears.
    """
    check_metric(metric)

    def relax(estimates: NeighborhoodField) -> float:
        if source:
            return 0.0
        candidates = estimates.exclude_self().zip_with(
            metric.exclude_self(), lambda d, w: d + w
        )
        return candidates.min_value() if len(candidates) else INF

    return share(INF, relax)


def _best_link(links: NeighborhoodField) -> tuple[int, Any] | None:
    """Neighbor minimizing (potential, id) among finite entries, with payload."""
    best_key = None
    best_payload = None
    best_id = None
    for neighbor_id, entry in links.exclude_self().items():
        potential = entry[0]
        if potential is None or potential == INF:
            continue
        key = (potential, neighbor_id)
        if best_key is None or key < best_key:
            best_key = key
            best_id = neighbor_id
            best_payload = entry[1]
    if best_id is None:
        return None
    return best_id, best_payload


@aggregate
def broadcast(source: bool, value: Any, metric: NeighborhoodField) -> Any:
    """Propagate each source's value outward along descending potential.

    Sources return ``value`` immediately; everyone else adopts the value held
    by its parent, the neighbor with the smallest potential (ties to the
    smallest id).  A node with no usable neighbor (disconnected from every
    source) falls back to its local ``value``.
    """
    potential = distance_to(source, metric)

    def update(links: NeighborhoodField) -> tuple:
        if source:
            result = value
        else:
            picked = _best_link(links)
            result = picked[1] if picked is not None else value
        return (potential, result)

    return share((INF, None), update)[1]


@aggregate
def cast_from(
    source: bool,
    initial: Any,
    accumulate: Callable[[Any, float], Any],
    metric: NeighborhoodField,
) -> Any:
    """Propagate from sources while accumulating over each hop's edge length.

    The carried value follows the cheapest route: each node extends the
    neighbor minimizing (upstream potential + edge length), applying
    ``accumulate`` to that neighbor's value and the edge length.  With
    addition from 0 this reproduces the potential itself; with a constant
    accumulator it reproduces broadcast.
    """
    potential = distance_to(source, metric)

    def update(links: NeighborhoodField) -> tuple:
        if source:
            return (potential, initial)
        best_key = None
        best = None
        for neighbor_id, entry in links.exclude_self().items():
            upstream = entry[0]
            if upstream is None or upstream == INF or neighbor_id not in metric:
                continue
            weight = metric[neighbor_id]
            key = (upstream + weight, neighbor_id)
            if best_key is None or key < best_key:
                best_key = key
                best = accumulate(entry[1], weight)
        return (potential, best if best_key is not None else initial)

    return share((INF, None), update)[1]
