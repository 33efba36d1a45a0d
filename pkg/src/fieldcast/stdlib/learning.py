"""Coordination primitives for decentralized model training."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from ..calculus import aggregate, neighbors
from ..errors import DomainError
from ..fields import NeighborhoodField
from .device import local_id


@aggregate
def loss_based_distances(
    model: Sequence[float], evaluate: Callable[[Sequence[float]], float]
) -> NeighborhoodField:
    """Distance-as-dissimilarity: each neighbor's model scored locally.

    Models are exchanged with the neighborhood; every neighbor maps to the
    loss its model achieves on this node's validation data (self maps to 0),
    so devices whose models transfer well end up close.
    """
    shared = neighbors(tuple(float(w) for w in model))
    me = local_id()
    return NeighborhoodField(
        me,
        {
            j: 0.0 if j == me else float(evaluate(received))
            for j, received in shared.items()
        },
    )


def average_weights(models: Iterable[Sequence[float]]) -> tuple[float, ...]:
    """Element-wise mean of equally-sized weight vectors."""
    models = list(models)
    if not models:
        raise DomainError("average_weights needs at least one model")
    size = len(models[0])
    if any(len(m) != size for m in models):
        raise DomainError("average_weights requires models of equal length")
    count = len(models)
    return tuple(sum(m[i] for m in models) / count for i in range(size))
