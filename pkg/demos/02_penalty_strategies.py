"""Compare the three compilation strategies on one instance.

The raw construction keeps the data untouched and relies on large
hand-picked penalty weights, which stretches the coefficient spread
over many orders of magnitude.  The scaled construction rescales every
term to a common value range before penalizing with weight 1; the
rounded construction additionally flattens the costs by integer
division so the smallest positive cost becomes 1.
"""

from fractions import Fraction

import pressqubo as pq

inst = pq.bundled_instance("press-small")
print(f"instance {inst.id}: costs span "
      f"{min(c for c in inst.cost.values() if c > 0)}..{max(inst.cost.values())}")

variants = [
    pq.RawVariant(Fraction(10**5), Fraction(10**9)),
    pq.ScaledVariant(Fraction(1)),
    pq.ScaledVariant(Fraction(1, 10)),
    pq.RoundedVariant(),
]

solution = pq.exact_solve(inst)
choice = solution.assignment.choice
slack = pq.residual_slack(inst, choice)

print(f"\n{'variant':<16} {'|coeff| min':>14} {'|coeff| max':>14} "
      f"{'spread':>10} {'opt energy':>14}")
for variant in variants:
    q = pq.build_qubo(inst, variant)
    magnitudes = sorted(abs(c) for c in q.coeffs.values())
    spread = magnitudes[-1] / magnitudes[0]
    # the encoded optimum has zero penalty: its energy is the rescaled cost
    opt_energy = pq.qubo_energy(q, pq.encode_assignment(q, choice, slack))
    print(f"{pq.qubo.variant_label(variant):<16} {float(magnitudes[0]):>14.4g} "
          f"{float(magnitudes[-1]):>14.4g} {float(spread):>10.3g} "
          f"{float(opt_energy):>14.6g}")

print("\nThe rounded construction shrinks the spread between the smallest and"
      "\nlargest coefficient, which is exactly what it is built to do; the raw"
      "\nconstruction's spread is dominated by the assignment penalty weight."
      "\nBoth scaled rows coincide: dividing each term by its own value range"
      "\ncancels the assignment-scale factor unless that factor changes which"
      "\nterm owns the largest range.")

# Every construction agrees on which state is best.
print("\nglobal minimizers decode identically across variants:")
for variant in variants:
    q = pq.build_qubo(inst, variant)
    bits, _ = pq.brute_force_qubo(q)
    print(f"  {variant.kind:<8} -> {pq.decode(q, bits).as_assignment().choice}")
