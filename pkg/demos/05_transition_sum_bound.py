# A uniform bound on a transition-probability sum for the with-replacement urn.
#
# For cm <= j <= T_{l-1} the sum over i of P(W_{n+1} = j+ck | W_n = j+c(k-i))
# stays below 1 - 1/n + kappa/n^2.  Here kappa is fitted on n <= 50 and then
# checked out to n = 200.

from urnlab import UrnSpec, lemma_bound_residuals, lemma_transition_sum, lemma_transition_sum_expanded

spec, ell = UrnSpec("R", m=2, c=1, counts=(1, 1)), 1

# Direct form and the form regrouped by powers of T_n are the same rational.
print(lemma_transition_sum(spec, 5, 2, 3), lemma_transition_sum_expanded(spec, 5, 2, 3))

pilot = lemma_bound_residuals(spec, ell, range(2, 51))
kappa = max(max(pilot.values()), 2 * pilot[50] - pilot[25])
print("fitted kappa:", float(kappa))

full = lemma_bound_residuals(spec, ell, range(2, 201))
for n in (2, 10, 50, 100, 200):
    print(n, float(full[n]))
print("bound holds on [2, 200]:", max(full.values()) <= kappa)
