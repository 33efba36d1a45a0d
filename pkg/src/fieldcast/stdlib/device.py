"""Access to the local device: identity, position, sensors, actuation."""

from __future__ import annotations

from typing import Any

from ..calculus import current_engine
from ..errors import MissingSensorError, UsageError


def local_id() -> int:
    return current_engine().context.device_id


def local_position() -> tuple[float, float]:
    return current_engine().context.position


def sense(name: str) -> Any:
    """Read a named sensor from the node context."""
    sensors = current_engine().context.sensors
    if name not in sensors:
        raise MissingSensorError(name)
    return sensors[name]


def context_rng():
    """The node's deterministic random stream."""
    rng = current_engine().context.rng
    if rng is None:
        raise UsageError("node context provides no random stream")
    return rng


def store_actuation(name: str, value: Any) -> None:
    """Stage a named actuation; the runner applies it after the round."""
    current_engine().stage_actuation(name, value)
