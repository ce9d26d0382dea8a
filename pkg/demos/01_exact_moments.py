# Exact moments of the white-ball count, three ways.
#
# An urn holds 2 white and 1 black ball.  Each step draws m=2 balls without
# replacement and adds c=1 ball of the same color for each ball drawn.

from fractions import Fraction

from urnlab import UrnSpec, exact_distribution, moment_table, oracle_moment, second_moment_closed_form
from urnlab.moments import factorial_moment_c1, factorial_moments_from_ordinary

spec = UrnSpec("M", m=2, c=1, counts=(2, 1))

# The recurrence fills a table of E(W_n^s) in exact rationals.
tab = moment_table(spec, n_max=6, s_max=3)
for n in range(7):
    print(n, [str(v) for v in tab.row(n)])

# One step by hand: with 2W1B the sample is either 1W1B (prob 2/3) or 2W (1/3),
# so W_1 is 3 or 4 and E(W_1^2) = 2/3 * 9 + 1/3 * 16 = 34/3.
print(tab[1, 2], Fraction(2, 3) * 9 + Fraction(1, 3) * 16)

# The enumeration oracle pushes exact probability mass through the kernel.
dist = exact_distribution(spec, 6)
print(len(dist.mass), "states at n=6, total mass", dist.total())
print(all(oracle_moment(dist, s) == tab[6, s] for s in range(4)))

# The second moment also has a product/sum closed form.
print([second_moment_closed_form(spec, n) == tab[n, 2] for n in range(7)])

# With c=1 the factorial moments have their own recurrence.
print(factorial_moment_c1(spec, 6, 3), factorial_moments_from_ordinary(tab.row(6))[3])

# E(W_n)/T_n never moves: W_n/T_n is a martingale.
print({n: tab[n, 1] / (spec.T0 + n * spec.mc) for n in range(7)})
