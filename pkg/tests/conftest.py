"""Shared fixtures and independent reference oracles.

The reference helpers here recompute expected values from first
principles (exhaustive enumeration, direct formula evaluation) without
touching the production code paths they are used to check.
"""

from fractions import Fraction
from itertools import product

import pytest

from pressqubo import Instance


@pytest.fixture
def tiny() -> Instance:
    """2 toolkits x 2 machines, unit workloads, unit capacities.

    Costs favor the diagonal pairing (t1->m1, t2->m2) at total cost 2;
    the anti-diagonal costs 4; same-machine pairings overload.
    """
    toolkits = ("t1", "t2")
    machines = ("m1", "m2")
    cost = {("t1", "m1"): 1, ("t1", "m2"): 2, ("t2", "m1"): 2, ("t2", "m2"): 1}
    return Instance(
        id="tiny",
        toolkits=toolkits,
        machines=machines,
        cost={k: Fraction(v) for k, v in cost.items()},
        workload={(t, m): Fraction(1) for t in toolkits for m in machines},
        capacity={"m1": Fraction(1), "m2": Fraction(1)},
    )


def enumerate_assignments(inst: Instance):
    """All total assignments as dicts, in lexicographic machine order."""
    for machines in product(inst.machines, repeat=inst.n_toolkits):
        yield dict(zip(inst.toolkits, machines))


def reference_feasible(inst: Instance, choice: dict) -> bool:
    """Feasibility by direct constraint evaluation."""
    load = {m: Fraction(0) for m in inst.machines}
    for t, m in choice.items():
        load[m] += inst.workload[t, m]
    return all(load[m] <= inst.capacity[m] for m in inst.machines)


def reference_cost(inst: Instance, choice: dict) -> Fraction:
    return sum(inst.cost[t, m] for t, m in choice.items())


def reference_optimum(inst: Instance):
    """(cost, choice) of the best feasible assignment by enumeration."""
    best = None
    for choice in enumerate_assignments(inst):
        if not reference_feasible(inst, choice):
            continue
        cost = reference_cost(inst, choice)
        if best is None or cost < best[0]:
            best = (cost, choice)
    return best


def reference_raw_energy(inst: Instance, lam_m: Fraction, lam_t: Fraction,
                         bits: str) -> Fraction:
    """Penalized objective evaluated directly from the instance data.

    Recomputes the fixed variable layout (decision bits toolkit-major,
    then slack digits per machine) and sums cost, assignment penalty,
    and capacity penalty without any shared code.
    """
    T, M = inst.n_toolkits, inst.n_machines
    x = {}
    for i, t in enumerate(inst.toolkits):
        for j, m in enumerate(inst.machines):
            x[t, m] = int(bits[i * M + j])
    pos = T * M
    slack = {}
    for m in inst.machines:
        h = int(inst.capacity[m])
        weights = []
        if h > 0:
            r = h.bit_length() - 1
            weights = [2**j for j in range(r)] + [h - 2**r + 1]
        value = 0
        for w in weights:
            value += w * int(bits[pos])
            pos += 1
        slack[m] = value
    energy = Fraction(0)
    for t in inst.toolkits:
        for m in inst.machines:
            energy += inst.cost[t, m] * x[t, m]
    for t in inst.toolkits:
        energy += lam_t * (sum(x[t, m] for m in inst.machines) - 1) ** 2
    for m in inst.machines:
        load = sum(inst.workload[t, m] * x[t, m] for t in inst.toolkits)
        energy += lam_m * (load + slack[m] - inst.capacity[m]) ** 2
    return energy
