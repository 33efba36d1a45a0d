"""Computational-field data structures.

A `NeighborhoodField` is the value a node observes at one aligned program
point: a mapping from device id to the value each aligned neighbor shared
there, with the local device included under its own id. Fields are immutable
after construction and every aggregation runs in ascending device-id order so
non-commutative folds stay reproducible.
"""

from __future__ import annotations

from typing import Any, Callable, Iterator

from .errors import EmptyFieldError


class NeighborhoodField:
    """Per-neighbor values for one program point, owned by a device."""

    __slots__ = ("owner", "_values")

    def __init__(self, owner: int, values: dict[int, Any]):
        self.owner = owner
        self._values = dict(values)

    # -- access -----------------------------------------------------------

    def ids(self) -> list[int]:
        return sorted(self._values)

    def items(self) -> list[tuple[int, Any]]:
        return sorted(self._values.items())

    def values(self) -> list[Any]:
        return [value for _, value in sorted(self._values.items())]

    def get(self, device_id: int, default: Any = None) -> Any:
        return self._values.get(device_id, default)

    def local(self) -> Any:
        """The owner's own entry."""
        return self._values[self.owner]

    def __getitem__(self, device_id: int) -> Any:
        return self._values[device_id]

    def __contains__(self, device_id: int) -> bool:
        return device_id in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.ids())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NeighborhoodField):
            return NotImplemented
        return self.owner == other.owner and self._values == other._values

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in self.items())
        return f"NeighborhoodField(owner={self.owner}, {{{inner}}})"

    # -- transforms ---------------------------------------------------------

    def exclude_self(self) -> "NeighborhoodField":
        """Drop the owner's entry; the owner id is kept for provenance."""
        values = {k: v for k, v in self._values.items() if k != self.owner}
        return NeighborhoodField(self.owner, values)

    def map_values(self, fn: Callable[[Any], Any]) -> "NeighborhoodField":
        return NeighborhoodField(self.owner, {k: fn(v) for k, v in self._values.items()})

    def zip_with(self, other: "NeighborhoodField", fn: Callable[[Any, Any], Any]) -> "NeighborhoodField":
        """Pointwise combination on the intersection of both key sets.

        Devices present on only one side drop out silently: a neighbor that is
        misaligned (or late) at either program point contributes nothing.
        """
        values = {
            k: fn(v, other._values[k])
            for k, v in self._values.items()
            if k in other._values
        }
        return NeighborhoodField(self.owner, values)

    def merge(self, other: "NeighborhoodField") -> "NeighborhoodField":
        """Key union; on collisions the right-hand field wins."""
        values = dict(self._values)
        values.update(other._values)
        return NeighborhoodField(self.owner, values)

    # -- aggregation --------------------------------------------------------

    def fold(self, initial: Any, combine: Callable[[Any, Any], Any]) -> Any:
        """Left-fold over values in ascending device-id order."""
        acc = initial
        for _, value in sorted(self._values.items()):
            acc = combine(acc, value)
        return acc

    def min_value(self) -> Any:
        if not self._values:
            raise EmptyFieldError(f"min_value on empty field (owner {self.owner})")
        return min(self.values())

    def max_value(self) -> Any:
        if not self._values:
            raise EmptyFieldError(f"max_value on empty field (owner {self.owner})")
        return max(self.values())

    # -- arithmetic conveniences ---------------------------------------------

    def _combine(self, other: Any, fn: Callable[[Any, Any], Any]) -> "NeighborhoodField":
        if isinstance(other, NeighborhoodField):
            return self.zip_with(other, fn)
        return self.map_values(lambda v: fn(v, other))

    def __add__(self, other: Any) -> "NeighborhoodField":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: Any) -> "NeighborhoodField":
        return self._combine(other, lambda a, b: a - b)

    def __mul__(self, other: Any) -> "NeighborhoodField":
        return self._combine(other, lambda a, b: a * b)


def foldhood(field: NeighborhoodField, initial: Any, combine: Callable[[Any, Any], Any]) -> Any:
    """Aggregate neighbor values with a binary operator (ascending-id fold)."""
    return field.fold(initial, combine)
