"""Coordination-regions scenario: elect leaders, count and broadcast per region.

Leaders are elected so that every device is within the election radius of
exactly one of them; each region then counts its members through a
convergecast along the leader potential and broadcasts the count back out.
The traced value is the region size each device ends up knowing.
"""

from __future__ import annotations

from ..calculus import aggregate
from ..stdlib import (
    broadcast,
    count_nodes,
    distance_to,
    leader_election,
    neighbors_distances,
)
from . import oracles
from .base import (
    CheckResult,
    RunResult,
    ScenarioConfig,
    attach_output_monitors,
    build_lattice_simulator,
    final_snapshot,
    lattice_diagonal,
    schedule_all,
    stability_check,
)

DEFAULTS = {"rows": 20, "cols": 20, "spacing": 0.1, "noise": 0.01, "radius": 0.12, "duration": 15.0}


def make_program(leader_radius: float):
    @aggregate
    def scr_main():
        distances = neighbors_distances()
        election = leader_election(leader_radius, distances)
        potential = distance_to(election.leader, distances)
        members = count_nodes(potential)
        region = broadcast(election.leader, members, distances)
        return {
            "region": region,
            "leader": election.leader,
            "winner": election.winner,
            "winner_distance": election.distance,
            "potential": potential,
        }

    return scr_main


def run(config: ScenarioConfig) -> RunResult:
    config.validate()
    if config.leader_radius is not None:
        leader_radius = config.leader_radius
    else:
        # Quarter of the deployment's extent, floored for degenerate layouts.
        leader_radius = max(0.25 * lattice_diagonal(config), config.spacing)
    simulator = build_lattice_simulator(config)
    _, stability = attach_output_monitors(simulator, config, value_key="region")
    schedule_all(simulator, config.dt, make_program(leader_radius))
    simulator.run(config.duration)

    results, positions = final_snapshot(simulator)
    checks = []
    if config.check:
        checks.append(stability_check(stability, simulator))
        checks.extend(region_checks(config, results, positions, leader_radius))
    result = RunResult("scr", config, simulator, results, positions, checks)
    result.extras["leader_radius"] = leader_radius
    return result


def region_checks(
    config: ScenarioConfig, results: dict, positions: dict, leader_radius: float
) -> list[CheckResult]:
    """Fixpoint properties: coverage, leader separation, count conservation."""
    leaders = sorted(node for node, r in results.items() if r["leader"])
    checks = []

    worst = max(r["winner_distance"] for r in results.values())
    checks.append(
        CheckResult(
            "coverage",
            worst <= leader_radius,
            f"max winning-candidate distance {worst:.4f} vs radius {leader_radius:.4f}",
        )
    )

    adjacency = oracles.build_radius_graph(positions, config.radius)
    separated = True
    closest = None
    for leader in leaders:
        distances = oracles.dijkstra(adjacency, [leader])
        for other in leaders:
            if other > leader:
                if closest is None or distances[other] < closest:
                    closest = distances[other]
                if distances[other] <= leader_radius:
                    separated = False
    checks.append(
        CheckResult(
            "separation",
            separated,
            f"{len(leaders)} leaders, closest pair {closest:.4f}" if closest is not None else f"{len(leaders)} leader(s)",
        )
    )

    total = sum(results[leader]["region"] for leader in leaders)
    checks.append(
        CheckResult(
            "conservation",
            total == len(results),
            f"sum of region counts {total} vs {len(results)} nodes",
        )
    )
    return checks
