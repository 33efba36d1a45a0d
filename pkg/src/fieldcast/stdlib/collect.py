"""Convergecast: aggregation toward potential sources along the parent tree."""

from __future__ import annotations

from typing import Any, Callable

from ..calculus import aggregate, share
from ..fields import NeighborhoodField
from .device import local_id
from ._util import INF


@aggregate
def find_parent(potential: float) -> int:
    """Id of the neighbor with strictly smaller potential that minimizes it.

    Ties break to the smallest id; a node that is a local minimum (a source,
    or sitting on a plateau) is its own parent.
    """
    me = local_id()
    best = None

    def publish(estimates: NeighborhoodField) -> float:
        nonlocal best
        for neighbor_id, neighbor_potential in estimates.exclude_self().items():
            if neighbor_potential < potential:
                key = (neighbor_potential, neighbor_id)
                if best is None or key < best:
                    best = key
        return potential

    share(INF, publish)
    return best[1] if best is not None else me


@aggregate
def collect_with(potential: float, local: Any, accumulate: Callable[[Any, Any], Any]) -> Any:
    """Fold values down the potential: local value combined with the children's.

    Every node shares its (parent, result) pair; a node's result is its local
    value accumulated with the results of all neighbors that currently claim
    it as parent, in ascending id order.  On a static tree the source ends up
    aggregating its whole region.
    """
    parent = find_parent(potential)
    me = local_id()

    def update(links: NeighborhoodField) -> tuple:
        result = local
        for _, entry in links.exclude_self().items():
            if entry[0] == me:
                result = accumulate(result, entry[1])
        return (parent, result)

    return share((None, None), update)[1]


@aggregate
def count_nodes(potential: float) -> int:
    """Number of devices in this node's sub-region of the potential."""
    return collect_with(potential, 1, lambda a, b: a + b)


@aggregate
def sum_values(potential: float, value: float) -> float:
    """Sum of ``value`` over this node's sub-region of the potential."""
    return collect_with(potential, float(value), lambda a, b: a + b)


@aggregate
def collect_or(potential: float, flag: bool) -> bool:
    """True on flagged nodes and on every parent along their descent.

    At fixpoint this marks exactly the parent chains from each flagged node
    down the potential: with the potential anchored at a target and the flag
    on a source, that is the shortest path between the two.
    """
    parent = find_parent(potential)
    me = local_id()

    def update(links: NeighborhoodField) -> tuple:
        result = bool(flag)
        if not result:
            for _, entry in links.exclude_self().items():
                if entry[0] == me and entry[1]:
                    result = True
                    break
        return (parent, result)

    return share((None, False), update)[1]
