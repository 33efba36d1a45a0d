"""Reusable self-organizing building blocks layered on the calculus."""

from .collect import collect_or, collect_with, count_nodes, find_parent, sum_values
from .device import context_rng, local_id, local_position, sense, store_actuation
from .distances import hop_distances, neighbors_distances
from .election import ElectionResult, elect_leaders, leader_election
from .gossip import gossip, gossip_max, gossip_min, stabilizing_gossip
from .learning import average_weights, loss_based_distances
from .spreading import broadcast, cast_from, distance_to
from .timing import countdown, current_time, exponential_decay, round_counter

__all__ = [
    "ElectionResult",
    "average_weights",
    "broadcast",
    "cast_from",
    "collect_or",
    "collect_with",
    "context_rng",
    "count_nodes",
    "countdown",
    "current_time",
    "distance_to",
    "elect_leaders",
    "exponential_decay",
    "find_parent",
    "gossip",
    "gossip_max",
    "gossip_min",
    "hop_distances",
    "leader_election",
    "local_id",
    "local_position",
    "loss_based_distances",
    "neighbors_distances",
    "round_counter",
    "sense",
    "stabilizing_gossip",
    "store_actuation",
    "sum_values",
]
