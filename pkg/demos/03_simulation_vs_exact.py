# Monte Carlo against the exact engines.
#
# Runs are grouped in blocks with their own derived seeds and the moments are
# accumulated as exact integer power sums, so any (spec, n, runs, seed) gives
# the same answer however it is split across workers.

import numpy as np

from urnlab import UrnSpec, estimate_moments, exact_distribution, iter_grid, moment_table, sample_final_states

n, runs, seed = 10, 100_000, 7

print("model  m c counts   s  z-score")
for spec in iter_grid():
    summ = estimate_moments(spec, n, 2, runs, seed)
    tab = moment_table(spec, n, 2)
    for s in (1, 2):
        z = (summ.empirical_moments[s] - float(tab[n, s])) / summ.standard_errors[s]
        print(f"{spec.model.value:5}  {spec.m} {spec.c} {spec.counts}  {s}  {z:+.2f}")

# Beyond moments: compare the full law at a small horizon.
spec = UrnSpec("R", m=3, c=2, counts=(1, 2))
final = sample_final_states(spec, 3, runs, seed)
values, counts = np.unique(final, return_counts=True)
exact = exact_distribution(spec, 3).mass
for v, k in zip(values, counts):
    print(int(v), k / runs, float(exact[int(v)]))

# The non-balanced urn has no exact moment theory here; simulation is the tool.
nb = UrnSpec("NB", m=2, c=1, counts=(2, 1), nb=(1, 3))
summ = estimate_moments(nb, 20, 2, runs, seed, workers=2)
print("NB: E(W_20) ~", summ.empirical_moments[1], "+/-", summ.standard_errors[1])
