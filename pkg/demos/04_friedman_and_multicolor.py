# Two relatives of the basic urn.
#
# Friedman-type urns add balls of the *opposite* color profile: k whites drawn
# add c(m-k) whites.  The multi-color urn tracks r colors at once.

from urnlab import (
    UrnSpec,
    closed_form_expectation,
    covariance_limit,
    covariance_multicolor,
    exact_distribution,
    friedman_martingale_coefficients,
    oracle_moment,
    simulate_path,
)

# From one white and one black with m=2 the first draw is forced, but the
# second is not: W_2 is 2, 3 or 4.
fm = UrnSpec("FM", m=2, c=1, counts=(1, 1))
print(exact_distribution(fm, 2).mass)
print([closed_form_expectation(fm, n) for n in range(6)])
print(simulate_path(fm, 8, seed=1))

# phi_n W_n + psi_n is a martingale with constant mean (T0 - mc) W0 / T0.
fr = UrnSpec("FR", m=2, c=1, counts=(2, 1))
for n in range(6):
    co = friedman_martingale_coefficients(fr, n)
    print(n, co.phi * oracle_moment(exact_distribution(fr, n), 1) + co.psi)

# Three colors, one ball each: the colors are negatively correlated.
mc = UrnSpec("MC", m=2, c=1, counts=(1, 1, 1))
for n in (1, 2, 3, 10, 100):
    cov = covariance_multicolor(mc, n, 0, 1)
    print(n, cov if n <= 3 else "...", float(cov) / n**2)
print("limit of Cov / n^2:", covariance_limit(mc, 0, 1))
