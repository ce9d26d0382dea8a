"""Limit moments of W_n / n via characteristic roots and Gamma products.

The multiplier of the s-th moment recurrence factors as

    A_{j,s} = prod_l (j + root_l) / prod_l (j + pole_l),

with ``-root_l`` the zeros of the characteristic polynomial and the poles
``(T0 + 1 - l)/mc`` (model M) or ``T0/mc`` (model R).  Hence
``prod_{j<n} A_{j,s} ~ n^s * prod_l Gamma(pole_l) / Gamma(root_l)`` and the
normalized limit is that prefactor times the limit of the telescoped series.

Gamma values come from :func:`mpmath.gamma` (complex-capable, arbitrary
precision; run here at 40 significant digits).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import mpmath
import numpy as np
import sympy

from .errors import NoConvergence, NonRealResult, RootFindingFailed, SameColor, UnsupportedModel
from .model import Model, UrnSpec, marginal_spec
from .moments import moment_stream, multiplier

_DPS = 40


def _mpq(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


# --- polynomials with Fraction coefficients, ascending powers ---------------

def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _padd(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pscale(p, k):
    return [k * a for a in p]


def _binomial_poly(offset, slope, k):
    """binom(slope*x + offset, k) as a polynomial in x."""
    out = [Fraction(1)]
    for i in range(k):
        out = _pmul(out, [Fraction(offset - i), Fraction(slope)])
    return _pscale(out, Fraction(1, factorial(k)))


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """Monic polynomial in x; ``coefficients[k]`` multiplies x**k."""

    spec: UrnSpec
    s: int
    coefficients: tuple[Fraction, ...]

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coefficients):
            acc = acc * x + a
        return acc

    @property
    def root_sum(self) -> Fraction:
        """Sum of the negated roots, read off the x^{s-1} coefficient."""
        return self.coefficients[self.s - 1]


def characteristic_polynomial(spec: UrnSpec, s: int) -> CharacteristicPolynomial:
    if s < 1:
        raise ValueError("s must be >= 1")
    m, c, T0, mc = spec.m, spec.c, spec.T0, spec.mc
    poly = [Fraction(0)]
    if spec.model is Model.M:
        for l in range(s + 1):
            term = _binomial_poly(T0 - l, mc, s - l)
            poly = _padd(poly, _pscale(term, c**l * comb(m, l)))
        poly = _pscale(poly, Fraction(factorial(s), mc**s))
    elif spec.model is Model.R:
        for l in range(s + 1):
            term = [Fraction(1)]
            for _ in range(s - l):
                term = _pmul(term, [Fraction(T0), Fraction(mc)])
            poly = _padd(poly, _pscale(term, comb(s, l) * comb(m, l) * c**l * factorial(l)))
        poly = _pscale(poly, Fraction(1, mc**s))
    else:
        raise UnsupportedModel(f"characteristic polynomial defined for M and R, not {spec.model}")
    poly = poly[: s + 1]
    assert poly[s] == 1
    return CharacteristicPolynomial(spec, s, tuple(poly))


@dataclass(frozen=True)
class RootSet:
    """Negated polynomial roots with their relative residuals."""

    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    precision: float
    mp_roots: tuple = field(default=(), repr=False, compare=False)

    def coefficients(self) -> list[complex]:
        """Ascending coefficients of prod (x + root), for reconstruction checks."""
        out = np.array([1.0 + 0j])
        for r in self.roots:
            out = np.convolve(out, [1.0, r])  # descending
        return list(out[::-1])


def _newton_polish(coeffs, x, steps=200):
    for _ in range(steps):
        p = dp = mpmath.mpc(0)
        for a in reversed(coeffs):
            dp = dp * x + p
            p = p * x + a
        if dp == 0:
            break
        dx = p / dp
        x -= dx
        if abs(dx) <= mpmath.mpf(10) ** (-_DPS + 5) * max(1, abs(x)):
            break
    return x


def _squarefree_parts(coefficients):
    """[(ascending Fraction coefficients, multiplicity)] of a rational polynomial."""
    x = sympy.Symbol("x")
    expr = sympy.Poly(list(reversed([sympy.Rational(a.numerator, a.denominator) for a in coefficients])),
                      x, domain="QQ")
    _, parts = expr.sqf_list()
    out = []
    for part, mult in parts:
        desc = part.all_coeffs()
        lead = desc[0]
        out.append(([Fraction(int((a / lead).p), int((a / lead).q)) for a in reversed(desc)], mult))
    return out


def characteristic_roots(poly: CharacteristicPolynomial, tol: float = 1e-12) -> RootSet:
    """All roots of ``poly`` negated (the lambda / mu values), with multiplicity.

    The polynomial is split into square-free factors first, so every factor has
    simple roots; those are seeded by companion-matrix eigenvalues and polished
    by Newton's method at 40 digits.  Residuals are relative backward errors
    ``|p(x)| / sum_k |c_k| |x|^k`` against the full polynomial.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    with mpmath.workdps(_DPS):
        full = [_mpq(a) for a in poly.coefficients]
        polished, residuals = [], []
        for part, mult in _squarefree_parts(poly.coefficients):
            coeffs = [_mpq(a) for a in part]
            if len(part) == 1:
                continue
            for z in np.roots([float(a) for a in reversed(part)]):
                x = _newton_polish(coeffs, mpmath.mpc(z))
                if abs(x.imag) <= mpmath.mpf(10) ** (-_DPS + 10) * max(1, abs(x)):
                    x = mpmath.mpc(x.real, 0)
                scale = sum(abs(a) * abs(x) ** k for k, a in enumerate(full))
                value = abs(sum(a * x**k for k, a in enumerate(full)))
                res = value / scale if scale else value
                polished.extend([-x] * mult)
                residuals.extend([float(res)] * mult)
        if len(polished) != poly.s:
            raise RootFindingFailed(f"found {len(polished)} roots for degree {poly.s}")
        if max(residuals) > tol:
            raise RootFindingFailed(f"residual {max(residuals):.3g} above {tol:.3g}")
        lam = sum(polished)
        target = _mpq(poly.root_sum)
        if abs(lam - target) > tol * max(1, abs(target)):
            raise RootFindingFailed("roots do not reproduce the x^{s-1} coefficient")
        if poly.spec.model is Model.M:
            s, T0, mc = poly.s, poly.spec.T0, poly.spec.mc
            identity = Fraction(s * T0 - comb(s, 2), mc) + s
            if abs(lam - _mpq(identity)) > tol * max(1, float(identity)):
                raise RootFindingFailed("root-sum identity violated")
        order = sorted(range(len(polished)), key=lambda i: (-float(polished[i].real), float(polished[i].imag)))
        polished = [polished[i] for i in order]
        residuals = [residuals[i] for i in order]
        return RootSet(
            roots=tuple(complex(x) for x in polished),
            residuals=tuple(residuals),
            precision=tol,
            mp_roots=tuple(polished),
        )


def closed_form_roots(spec: UrnSpec) -> tuple[float, float]:
    """lambda_{1,2} (model M) or mu_{1,2} (model R) from their radical formulas."""
    m, c, T0, mc = spec.m, spec.c, spec.T0, spec.mc
    if spec.model is Model.M:
        d = mpmath.sqrt(1 + 4 * mc * (1 + c)) / 2
        base = mpmath.mpf(mc + T0) - mpmath.mpf(1) / 2
        return float((base + d) / mc), float((base - d) / mc)
    if spec.model is Model.R:
        d = c * mpmath.sqrt(m)
        return float((T0 + mc + d) / mc), float((T0 + mc - d) / mc)
    raise UnsupportedModel("closed-form roots exist for M and R")


def _poles(spec: UrnSpec, s: int) -> list[Fraction]:
    if spec.model is Model.M:
        return [Fraction(spec.T0 + 1 - l, spec.mc) for l in range(1, s + 1)]
    return [Fraction(spec.T0, spec.mc)] * s


def gamma_prefactor(spec: UrnSpec, s: int, roots: RootSet | None = None) -> tuple[complex, int]:
    """lim_n prod_{j<n} A_{j,s} / n^s, and the shift used to evaluate it.

    With shift j0 = 0 this is prod Gamma(pole_l) / prod Gamma(root_l).  When a
    pole or root has non-positive real part (small urns, larger s) the first j0
    factors are multiplied exactly and the Gamma ratio starts at j0.
    """
    if roots is None:
        roots = characteristic_roots(characteristic_polynomial(spec, s))
    poles = _poles(spec, s)
    j0 = 0
    while any(j0 + p <= 0 for p in poles) or any(j0 + r.real <= 0 for r in roots.mp_roots):
        j0 += 1
    head = Fraction(1)
    for j in range(j0):
        head *= multiplier(spec, j, s)
    with mpmath.workdps(_DPS):
        val = mpmath.mpc(_mpq(head))
        for p in poles:
            val *= mpmath.gamma(j0 + _mpq(p))
        for r in roots.mp_roots:
            val /= mpmath.gamma(j0 + r)
        return complex(val), j0


@dataclass(frozen=True)
class LimitResult:
    """lim E(W_n^s)/n^s with its error estimate.

    ``tail_bound`` is the absolute error estimate of ``value`` from the
    extrapolated series; ``truncation_bound`` is the plain K/L comparison bound
    on the unextrapolated tail, with K = max term_l * l^2 over the last 16
    terms before L.
    """

    s: int
    value: float
    terms_used: int
    tail_bound: float
    prefactor: float
    series: float = 0.0
    truncation_bound: float = 0.0
    exact: Fraction | None = None
    roots: tuple[complex, ...] = ()


def normalized_moment_limit(
    spec: UrnSpec, s: int, tol: float = 1e-10, max_terms: int = 1 << 14
) -> LimitResult:
    """lim_{n->oo} E(W_n^s) / n^s for models M and R.

    The bracketed series ``W0^s + sum_l B_l / prod_{j<=l} A_j`` has partial sums
    ``e_L = E(W_L^s) / prod_{j<L} A_j``, taken exactly from the moment
    recurrence.  Its terms decay like 1/l^2 with an asymptotic expansion in
    powers of 1/l, so e_L is extrapolated by Richardson's scheme over
    L = 16, 32, 64, ...  ``tol`` is relative to ``max(1, |value|)``.
    """
    if spec.model is Model.MC:
        spec = marginal_spec(spec, 0)
    if spec.model not in (Model.M, Model.R):
        raise UnsupportedModel(f"limit moments defined for M and R, not {spec.model}")
    if s < 1:
        raise ValueError("s must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    roots = characteristic_roots(characteristic_polynomial(spec, s))
    if s == 1:
        exact = Fraction(spec.W0 * spec.mc, spec.T0)
        return LimitResult(1, float(exact), 0, 0.0, float(Fraction(spec.mc, spec.T0)),
                           series=float(spec.W0), exact=exact, roots=roots.roots)

    pref, _ = gamma_prefactor(spec, s, roots)
    if abs(pref.imag) > 1e-9 * abs(pref):
        raise NonRealResult(f"Gamma prefactor has imaginary part {pref.imag:.3g}")
    pref = pref.real

    with mpmath.workdps(_DPS):
        prod = Fraction(1)
        recent = []  # (l, e_l) for L-16 <= l <= L
        levels: list[list] = []
        L = 16
        for h, row in moment_stream(spec, s):
            if h >= L - 16:
                recent.append((h, row[s] / prod))
            if h == L:
                e = recent[-1][1]
                levels.append([_mpq(e)])
                k = len(levels) - 1
                for j in range(1, k + 1):
                    prev = levels[k - 1][j - 1]
                    cur = levels[k][j - 1]
                    levels[k].append((2**j * cur - prev) / (2**j - 1))
                best = levels[k][k]
                if k >= 2:
                    err = abs(best - levels[k - 1][k - 1])
                    value = pref * float(best)
                    tail = abs(pref) * float(err)
                    if tail <= tol * max(1.0, abs(value)):
                        K = max(float(e1 - e0) * l0**2 for (l0, e0), (_, e1) in zip(recent, recent[1:]))
                        return LimitResult(
                            s, value, L, tail, pref, series=float(best),
                            truncation_bound=abs(pref) * K / L, roots=roots.roots,
                        )
                recent = []
                L *= 2
                if L > max_terms:
                    raise NoConvergence(f"no convergence to tol={tol} within {max_terms} terms")
            prod *= multiplier(spec, h, s)
    raise AssertionError("unreachable")


def covariance_limit(spec: UrnSpec, i: int, j: int) -> float:
    """lim Cov(X_{n,i}/n, X_{n,j}/n) for the multi-color urn (0-based colors)."""
    if spec.model is not Model.MC:
        raise UnsupportedModel("covariance_limit needs model MC")
    if spec.r < 3:
        raise UnsupportedModel("covariance formula requires r >= 3 colors")
    if i == j:
        raise SameColor(f"i == j == {i}")
    ratio = covariance_gamma_ratio(spec)
    T0, mc = spec.T0, spec.mc
    return spec.counts[i] * spec.counts[j] * (ratio - mc * mc / T0**2)


def covariance_gamma_ratio(spec: UrnSpec) -> float:
    """Gamma(T0/mc) Gamma((T0-1)/mc) / (Gamma(lambda_1) Gamma(lambda_2))."""
    base = marginal_spec(spec, 0) if spec.model is Model.MC else spec
    lam1, lam2 = closed_form_roots(base)
    T0, mc = base.T0, base.mc
    with mpmath.workdps(_DPS):
        return float(
            mpmath.gamma(mpmath.mpf(T0) / mc) * mpmath.gamma(mpmath.mpf(T0 - 1) / mc)
            / (mpmath.gamma(lam1) * mpmath.gamma(lam2))
        )
