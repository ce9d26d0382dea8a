"""Exact moments of the white-ball count.

The core is the one-step recurrence ``E(W_{n+1}^s) = A_{n,s} E(W_n^s) + B_{n,s}``
where ``B_{n,s}`` is a linear combination of the lower moments ``E(W_n^r)``,
``r < s``, at the same time index.  For model M the coefficients come from the
hypergeometric sample moments (Stirling numbers of both kinds); for model R
from the binomial ones.  All arithmetic is in :class:`fractions.Fraction`.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .combinatorics import falling_factorial, falling_ratio, stirling_first, stirling_second
from .errors import MissingMoment, RequiresCEquals1, SameColor, UnsupportedModel
from .model import Model, UrnSpec, marginal_spec, total_balls

__all__ = [
    "MomentTable",
    "RecurrenceCoefficients",
    "MartingaleCoefficients",
    "recurrence_coefficients",
    "moment_table",
    "moment",
    "moment_stream",
    "multiplier",
    "closed_form_expectation",
    "second_moment_closed_form",
    "root_symmetric_functions",
    "factorial_moment_c1",
    "factorial_moments_from_ordinary",
    "product_factor",
    "covariance_multicolor",
    "friedman_martingale_coefficients",
]


@dataclass(frozen=True)
class RecurrenceCoefficients:
    A: Fraction
    B: Fraction


@dataclass(frozen=True)
class MartingaleCoefficients:
    phi: Fraction
    psi: Fraction
    n: int


class MomentTable(Mapping):
    """Read-only mapping ``(n, s) -> E(W_n^s)``."""

    def __init__(self, spec: UrnSpec, entries: dict, n_max: int, s_max: int):
        self.spec = spec
        self._entries = entries
        self.n_max = n_max
        self.s_max = s_max

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def row(self, n: int) -> list[Fraction]:
        return [self._entries[n, s] for s in range(self.s_max + 1)]

    def __repr__(self):
        return f"MomentTable({self.spec!r}, n_max={self.n_max}, s_max={self.s_max})"


def _require_mr(spec: UrnSpec):
    if spec.model not in (Model.M, Model.R):
        raise UnsupportedModel(f"recurrence defined for models M and R, not {spec.model}")


@lru_cache(maxsize=65536)
def _coefficients(model: Model, m: int, c: int, t: int, s: int):
    """(A, {r: g_r}) with B = sum_r g_r E(W^r), for an urn holding t balls."""
    if model is Model.M:
        A = sum(c**l * comb(s, l) * falling_ratio(m, t, l) for l in range(s + 1))
    else:
        A = sum(c**l * comb(s, l) * Fraction(falling_factorial(m, l)) / t**l for l in range(s + 1))
    lower = {}
    for i in range(2, s + 1):
        r = s + 1 - i
        g = Fraction(0)
        for l in range(i, s + 1):
            w = comb(s, l) * c**l
            if model is Model.M:
                inner = Fraction(0)
                for j in range(l + 1 - i, l + 1):
                    sign = -1 if (j + i - 1 - l) % 2 else 1
                    inner += sign * stirling_second(l, j) * stirling_first(j, l + 1 - i) * falling_ratio(m, t, j)
                g += w * inner
            else:
                p = l + 1 - i
                g += w * stirling_second(l, p) * falling_factorial(m, p) / t**p
        lower[r] = g
    return A, lower


def recurrence_coefficients(spec: UrnSpec, n: int, s: int, lower_moments) -> RecurrenceCoefficients:
    """A = alpha_{n,s} (M) or gamma_{n,s} (R); B = beta_{n,s} or delta_{n,s}.

    ``lower_moments`` is any mapping containing ``(n, r)`` for ``1 <= r < s``.
    """
    _require_mr(spec)
    if s < 1:
        raise ValueError("s must be >= 1")
    A, lower = _coefficients(spec.model, spec.m, spec.c, total_balls(spec, n), s)
    B = Fraction(0)
    for r, g in lower.items():
        try:
            B += g * lower_moments[n, r]
        except KeyError:
            raise MissingMoment(f"E(W_{n}^{r}) not available") from None
    return RecurrenceCoefficients(A, B)


def moment_table(spec: UrnSpec, n_max: int, s_max: int, color: int | None = None) -> MomentTable:
    """Fill E(W_h^r) for all h <= n_max, r <= s_max in lexicographic (h, r) order.

    For model MC, ``color`` (default 0) selects the marginal, which has the
    two-color model-M law.
    """
    if spec.model is Model.MC:
        spec = marginal_spec(spec, 0 if color is None else color)
    _require_mr(spec)
    if n_max < 0 or s_max < 0:
        raise ValueError("n_max and s_max must be non-negative")
    entries = {}
    for h, row in moment_stream(spec, s_max):
        for r, v in enumerate(row):
            entries[h, r] = v
        if h == n_max:
            break
    return MomentTable(spec, entries, n_max, s_max)


def moment_stream(spec: UrnSpec, s_max: int):
    """Yield ``(n, [E(W_n^0), ..., E(W_n^s_max)])`` for n = 0, 1, 2, ... forever."""
    _require_mr(spec)
    cur = [Fraction(spec.W0) ** r for r in range(s_max + 1)]
    h = 0
    while True:
        yield h, cur
        t = total_balls(spec, h)
        nxt = [Fraction(1)]
        for s in range(1, s_max + 1):
            A, lower = _coefficients(spec.model, spec.m, spec.c, t, s)
            val = A * cur[s]
            for r, g in lower.items():
                val += g * cur[r]
            nxt.append(val)
        cur = nxt
        h += 1


def multiplier(spec: UrnSpec, n: int, s: int) -> Fraction:
    """alpha_{n,s} (M) or gamma_{n,s} (R): the coefficient of E(W_n^s)."""
    _require_mr(spec)
    return _coefficients(spec.model, spec.m, spec.c, total_balls(spec, n), s)[0]


def moment(spec: UrnSpec, n: int, s: int) -> Fraction:
    """E(W_n^s) for models M and R (MC: color 0)."""
    return moment_table(spec, n, s)[n, s]


def closed_form_expectation(spec: UrnSpec, n: int, color: int | None = None) -> Fraction:
    """E(W_n) in closed form for M, R, FM, FR, and per color for MC."""
    if spec.model is Model.MC:
        spec = marginal_spec(spec, 0 if color is None else color)
    mc, T0, W0 = spec.mc, spec.T0, spec.W0
    if spec.model in (Model.M, Model.R):
        return Fraction(W0 * (n * mc + T0), T0)
    if spec.model in (Model.FM, Model.FR):
        if n == 0:
            return Fraction(W0)
        if mc == T0:
            return Fraction(mc * (n + 1), 2)
        num = mc * mc * comb(n, 2) + mc * T0 * n + (T0 - mc) * W0
        return Fraction(num, mc * (n - 1) + T0)
    raise UnsupportedModel(f"no closed-form expectation for model {spec.model}")


def root_symmetric_functions(spec: UrnSpec) -> tuple[Fraction, Fraction]:
    """(sum, product) of the two s=2 roots: lambda_1,2 for M, mu_1,2 for R.

    The numerator of the s=2 multiplier is ``(n + root_1)(n + root_2)``; both
    symmetric functions are rational even though the roots are not.
    """
    mc = spec.mc
    if spec.model is Model.M:
        a = Fraction(spec.T0, mc)
        b = Fraction(spec.T0 - 1, mc)
        return 2 + a + b, (2 + a) * b + 1 - Fraction(1, spec.m)
    if spec.model is Model.R:
        a = Fraction(spec.T0, mc)
        return 2 * (a + 1), (a + 1) ** 2 - Fraction(1, spec.m)
    raise UnsupportedModel("root symmetric functions are defined for M and R")


def second_moment_closed_form(spec: UrnSpec, n: int) -> Fraction:
    """E(W_n^2) from the telescoped product/sum representation.

    Evaluated exactly: each factor ``(j + root_1)(j + root_2)`` is expanded as
    ``j^2 + S j + P`` with the rational symmetric functions S and P.
    Independent of :func:`moment_table`.
    """
    _require_mr(spec)
    S, P = root_symmetric_functions(spec)
    mc, T0, W0, m, c = spec.mc, spec.T0, spec.W0, spec.m, spec.c
    a = Fraction(T0, mc)
    b = Fraction(T0 - 1, mc) if spec.model is Model.M else a

    def num(j):
        return j * j + S * j + P

    total = Fraction(0)
    inv = Fraction(1)  # prod_{j <= l} (j + a)(j + b) / num(j)
    for l in range(n):
        inv *= (l + a) * (l + b) / num(l)
        if spec.model is Model.M:
            total += (l + Fraction(T0 - m, mc)) / (l + b) * inv
        else:
            total += inv
    prod = Fraction(1)
    for j in range(n):
        prod *= num(j) / ((j + a) * (j + b))
    return prod * (W0 * W0 + Fraction(W0 * c * c * m, T0) * total)


def factorial_moment_c1(spec: UrnSpec, n: int, s: int) -> Fraction:
    """E((W_n)_s) for model M with c = 1 via the factorial-moment recurrence.

    With T = T_{n-1} and F_r = E((W_{n-1})_r),

        E((W_n)_s) = sum_{i=0}^{s} i! F_{s-i}
                     sum_l binom(s,l) binom(s-l,i) binom(l,i) (m)_l / (T)_l,

    which follows from the product rule for falling factorials and the
    hypergeometric factorial moments (m)_l (W)_l / (T)_l.  Both inner sums use
    the urn total *before* the draw.
    """
    if spec.model is not Model.M:
        raise UnsupportedModel("factorial-moment recurrence is for model M")
    if spec.c != 1:
        raise RequiresCEquals1(f"c = {spec.c}")
    m = spec.m
    cur = [falling_factorial(spec.W0, r) for r in range(s + 1)]
    for h in range(n):
        t = total_balls(spec, h)
        nxt = []
        for r in range(s + 1):
            val = Fraction(0)
            for i in range(r + 1):
                inner = sum(
                    comb(r, l) * comb(r - l, i) * comb(l, i) * falling_ratio(m, t, l)
                    for l in range(i, r - i + 1)
                )
                val += factorial(i) * cur[r - i] * inner
            nxt.append(val)
        cur = nxt
    return cur[s]


def factorial_moments_from_ordinary(ordinary: list[Fraction]) -> list[Fraction]:
    """Convert [E(W^0), ..., E(W^s)] to [E((W)_0), ..., E((W)_s)]."""
    out = []
    for j in range(len(ordinary)):
        out.append(
            sum((-1) ** (j - i) * stirling_first(j, i) * ordinary[i] for i in range(j + 1))
        )
    return out


def product_factor(spec: UrnSpec, n: int) -> Fraction:
    """prod_{l<n} (l+lambda_1)(l+lambda_2) / ((l + T0/mc)(l + (T0-1)/mc)).

    This is ``prod alpha_{l,2}``, the factor multiplying X_{0,i} X_{0,j} in
    E(X_{n,i} X_{n,j}) for the multi-color urn.
    """
    base = spec
    if spec.model is Model.MC:
        base = marginal_spec(spec, 0)
    if base.model is not Model.M:
        raise UnsupportedModel("product factor is defined for M / MC")
    S, P = root_symmetric_functions(base)
    a = Fraction(base.T0, base.mc)
    b = Fraction(base.T0 - 1, base.mc)
    out = Fraction(1)
    for l in range(n):
        out *= (l * l + S * l + P) / ((l + a) * (l + b))
    return out


def covariance_multicolor(spec: UrnSpec, n: int, i: int, j: int) -> Fraction:
    """Cov(X_{n,i}, X_{n,j}) for two distinct colors (0-based indices)."""
    if spec.model is not Model.MC:
        raise UnsupportedModel("covariance_multicolor needs model MC")
    if spec.r < 3:
        raise UnsupportedModel("covariance formula requires r >= 3 colors")
    if i == j:
        raise SameColor(f"i == j == {i}")
    xi, xj = spec.counts[i], spec.counts[j]
    mc, T0 = spec.mc, spec.T0
    mean_prod = Fraction(mc * mc) * (n + Fraction(T0, mc)) ** 2 / (T0 * T0)
    return (product_factor(spec, n) - mean_prod) * xi * xj


def friedman_martingale_coefficients(spec: UrnSpec, n: int) -> MartingaleCoefficients:
    """phi_n, psi_n with phi_n W_n + psi_n a martingale (models FM, FR).

    phi_n = T_{n-1}/T_0 where T_{-1} = T_0 - mc, psi_n = -mc sum_{k<n} T_k / T_0.
    """
    if spec.model not in (Model.FM, Model.FR):
        raise UnsupportedModel("Friedman martingale needs model FM or FR")
    mc, T0 = spec.mc, spec.T0
    phi = Fraction(T0 + (n - 1) * mc, T0)
    psi = Fraction(-mc * sum(T0 + k * mc for k in range(n)), T0)
    return MartingaleCoefficients(phi, psi, n)
