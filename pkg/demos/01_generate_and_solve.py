"""Generate a planning instance, compile it, and check the compilation.

Walks the shortest end-to-end path: a seeded synthetic instance, the
exhaustive reference solver, a raw-penalty compilation, and the
exhaustive scan over all bitstrings showing both routes agree.
"""

from fractions import Fraction

import pressqubo as pq

# A small instance: 3 toolkits on 2 press machines, 4-bit capacities.
inst = pq.sanitize_instance(pq.generate_instance(3, 2, 4, seed=5))
print(f"instance {inst.id}: toolkits={inst.toolkits} machines={inst.machines}")
print("cost matrix:")
for t in inst.toolkits:
    print("  ", [int(inst.cost[t, m]) for m in inst.machines])
print("workloads:")
for t in inst.toolkits:
    print("  ", [int(inst.workload[t, m]) for m in inst.machines])
print("capacities:", [int(inst.capacity[m]) for m in inst.machines])

# The ground truth: enumerate every assignment, keep the cheapest feasible one.
solution = pq.exact_solve(inst)
print(f"\noptimal assignment: {solution.assignment.choice} at cost {solution.cost}")

# Compile to binary-quadratic form with hand-picked penalty weights.
q = pq.build_qubo(inst, pq.RawVariant(Fraction(10**5), Fraction(10**9)))
print(f"\ncompiled: {q.n} binary variables "
      f"({inst.n_toolkits * inst.n_machines} decision + "
      f"{q.n - inst.n_toolkits * inst.n_machines} slack), "
      f"{len(q.coeffs)} nonzero coefficients")

# The global minimum over all 2^n bitstrings must decode to the optimum.
bits, energy = pq.brute_force_qubo(q)
decoded = pq.decode(q, bits)
assignment = decoded.as_assignment()
print(f"minimum-energy bitstring: {bits}")
print(f"  decodes to {assignment.choice} with slack {decoded.slack}")
print(f"  energy {energy} == optimal cost {solution.cost}: "
      f"{energy == solution.cost}")

# Feasible assignments with exactly complementary slack carry zero penalty,
# so their energy is the plain production cost.
choice = solution.assignment.choice
encoded = pq.encode_assignment(q, choice, pq.residual_slack(inst, choice))
print(f"\nencoded optimum energy: {pq.qubo_energy(q, encoded)} (pure cost, no penalty)")
