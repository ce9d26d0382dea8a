# Where E(W_n^s)/n^s goes as n grows.
#
# The s-th moment multiplier factors through a monic polynomial whose negated
# roots enter a Gamma-function prefactor.  The limit is that prefactor times a
# convergent series.

from urnlab import (
    UrnSpec,
    characteristic_polynomial,
    characteristic_roots,
    closed_form_roots,
    moment_stream,
    normalized_moment_limit,
)

spec = UrnSpec("M", m=2, c=1, counts=(2, 1))

poly = characteristic_polynomial(spec, 2)
print("coefficients (ascending):", [str(a) for a in poly.coefficients])
print("numerical roots:", characteristic_roots(poly).roots)
print("radical formula:", closed_form_roots(spec))

# Higher s: roots may repeat or turn complex; the residuals stay tiny.
for s in range(1, 7):
    rs = characteristic_roots(characteristic_polynomial(spec, s))
    print(s, [f"{r.real:.4f}{r.imag:+.4f}j" for r in rs.roots], f"max residual {max(rs.residuals):.1e}")

for s in (1, 2, 3):
    res = normalized_moment_limit(spec, s, tol=1e-10)
    print(f"s={s}: limit {res.value:.12f}  (error ~{res.tail_bound:.1e}, {res.terms_used} terms)"
          f"  moment of the limit law {res.value / spec.mc**s:.6f}")

# The finite-n ratios approach the limit at rate 1/n.
lim = normalized_moment_limit(spec, 2).value
for n, row in moment_stream(spec, 2):
    if n in (64, 256, 1024):
        ratio = float(row[2] / n**2)
        print(n, ratio, (ratio - lim) * n)
    if n == 1024:
        break
