"""Minimal synchronous multi-node harness for exercising programs directly.

Runs one engine round per node per sweep over a fixed topology, delivering
each node the exports every neighbor (itself included) published in earlier
sweeps — the same visibility rule as the simulator, without the event queue.
"""

from __future__ import annotations

import random
from typing import Any, Callable

from fieldcast import Engine, NodeContext, activate
from fieldcast.simulator import derive_seed


class SweepNetwork:
    def __init__(
        self,
        topology: dict[int, set[int]],
        positions: dict[int, tuple] | None = None,
        sensors: dict[int, dict] | None = None,
        seed: int = 0,
        lazy: bool = True,
        dt: float = 1.0,
    ):
        self.topology = {n: set(peers) for n, peers in topology.items()}
        self.positions = positions or {n: (float(n), 0.0) for n in topology}
        self.sensors = sensors or {n: {} for n in topology}
        self.lazy = lazy
        self.dt = dt
        self.time = 0.0
        self.states: dict[int, Any] = {n: None for n in topology}
        self.exports: dict[int, Any] = {}
        self.results: dict[int, Any] = {}
        self.rngs = {n: random.Random(derive_seed(seed, n)) for n in topology}
        self.sweeps = 0

    def sweep(self, program: Callable, only: set[int] | None = None) -> dict[int, Any]:
        """Run one round on every node (ascending id); returns the results."""
        new_exports: dict[int, Any] = {}
        for node_id in sorted(self.topology):
            if only is not None and node_id not in only:
                continue
            inbound = {
                peer: self.exports[peer]
                for peer in self.topology[node_id] | {node_id}
                if peer in self.exports
            }
            engine = Engine(lazy=self.lazy)
            context = NodeContext(
                node_id,
                self.positions[node_id],
                self.time,
                self.sensors[node_id],
                self.rngs[node_id],
            )
            with activate(engine):
                engine.setup(context, inbound, self.states[node_id])
                self.results[node_id] = program()
                self.states[node_id], new_exports[node_id] = engine.cooldown()
        self.exports.update(new_exports)
        self.time += self.dt
        self.sweeps += 1
        return dict(self.results)

    def run(self, program: Callable, sweeps: int) -> dict[int, Any]:
        for _ in range(sweeps):
            self.sweep(program)
        return dict(self.results)

    def run_until_stable(
        self, program: Callable, max_sweeps: int = 500, window: int = 8
    ) -> dict[int, Any]:
        """Sweep until results are unchanged for ``window`` consecutive sweeps.

        A single unchanged sweep is not enough: composed blocks can plateau
        while information is still spreading underneath.
        """
        previous = None
        streak = 0
        for _ in range(max_sweeps):
            current = self.sweep(program)
            streak = streak + 1 if current == previous else 1
            if streak >= window:
                return current
            previous = current
        raise AssertionError(f"no fixpoint within {max_sweeps} sweeps")


def line_topology(n: int) -> dict[int, set[int]]:
    return {
        i: {j for j in (i - 1, i + 1) if 0 <= j < n}
        for i in range(n)
    }


def clique_topology(n: int) -> dict[int, set[int]]:
    return {i: set(range(n)) - {i} for i in range(n)}


def grid_topology(rows: int, cols: int) -> tuple[dict[int, set[int]], dict[int, tuple]]:
    """4-neighbor grid with unit spacing; returns (topology, positions)."""
    def node(r, c):
        return r * cols + c

    topology: dict[int, set[int]] = {}
    positions: dict[int, tuple] = {}
    for r in range(rows):
        for c in range(cols):
            peers = set()
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    peers.add(node(rr, cc))
            topology[node(r, c)] = peers
            positions[node(r, c)] = (float(r), float(c))
    return topology, positions
