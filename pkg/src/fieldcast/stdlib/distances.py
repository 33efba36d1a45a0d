"""Neighbor metrics: Euclidean distances and hop counts."""

from __future__ import annotations

import math

from ..calculus import aggregate, neighbors
from ..fields import NeighborhoodField
from .device import local_id, local_position


@aggregate
def neighbors_distances() -> NeighborhoodField:
    """Euclidean distance to each neighbor (self maps to 0)."""
    own = local_position()
    positions = neighbors(own)
    ox, oy = own
    return positions.map_values(lambda p: math.hypot(p[0] - ox, p[1] - oy))


@aggregate
def hop_distances() -> NeighborhoodField:
    """Unit distance to every neighbor (self maps to 0)."""
    present = neighbors(True)
    me = local_id()
    return NeighborhoodField(me, {j: 0.0 if j == me else 1.0 for j in present.ids()})
