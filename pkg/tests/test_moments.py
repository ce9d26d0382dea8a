from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urnlab import (
    MissingMoment,
    RequiresCEquals1,
    SameColor,
    UnsupportedModel,
    UrnSpec,
    closed_form_expectation,
    covariance_multicolor,
    exact_distribution,
    factorial_moment_c1,
    friedman_martingale_coefficients,
    moment,
    moment_table,
    oracle_moment,
    recurrence_coefficients,
    second_moment_closed_form,
    total_balls,
)
from urnlab.moments import factorial_moments_from_ordinary, multiplier, product_factor, root_symmetric_functions

M21 = UrnSpec("M", 2, 1, (2, 1))
R11 = UrnSpec("R", 2, 1, (1, 1))
MC111 = UrnSpec("MC", 2, 1, (1, 1, 1))


def test_worked_values():
    assert moment(M21, 1, 1) == Fraction(10, 3)
    assert moment(M21, 1, 2) == Fraction(34, 3)
    assert moment(R11, 1, 2) == Fraction(9, 2)
    assert moment(M21, 10, 1) == Fraction(46, 3)


def test_recurrence_coefficients_model_r():
    tab = moment_table(R11, 0, 1)
    co = recurrence_coefficients(R11, 0, 2, tab)
    # E(W_1^2) = A * 1 + B = 9/2
    assert (co.A, co.B) == (Fraction(7, 2), Fraction(1))


def test_missing_lower_moment():
    with pytest.raises(MissingMoment):
        recurrence_coefficients(M21, 3, 3, {(3, 1): Fraction(1)})


def test_unsupported_models():
    with pytest.raises(UnsupportedModel):
        moment_table(UrnSpec("FM", 2, 1, (2, 1)), 2, 2)
    with pytest.raises(UnsupportedModel):
        closed_form_expectation(UrnSpec("NB", 2, 1, (2, 1), nb=(1, 1)), 2)
    with pytest.raises(UnsupportedModel):
        friedman_martingale_coefficients(M21, 1)


def test_table_shape():
    tab = moment_table(M21, 3, 2)
    assert len(tab) == 12
    assert tab.row(0) == [1, 2, 4]
    assert all(tab[n, 0] == 1 for n in range(4))


def test_multicolor_marginal_uses_color():
    spec = UrnSpec("MC", 2, 1, (1, 2, 3))
    for color in range(3):
        tab = moment_table(spec, 3, 2, color=color)
        dists = [exact_distribution(spec, n) for n in range(4)]
        for n, d in enumerate(dists):
            for s in (1, 2):
                idx = tuple(s if i == color else 0 for i in range(3))
                assert tab[n, s] == oracle_moment(d, idx)
        assert closed_form_expectation(spec, 3, color) == tab[3, 1]


def test_multiplier_at_s1_is_mean_growth():
    for spec in (M21, R11):
        for n in range(5):
            t = total_balls(spec, n)
            assert multiplier(spec, n, 1) == Fraction(t + spec.mc, t)


def test_symmetric_functions_match_multiplier():
    # alpha_{n,2} = (n^2 + S n + P) / ((n + a)(n + b))
    for spec in (M21, R11, UrnSpec("M", 3, 2, (3, 2)), UrnSpec("R", 3, 2, (3, 2))):
        S, P = root_symmetric_functions(spec)
        a = Fraction(spec.T0, spec.mc)
        b = Fraction(spec.T0 - 1, spec.mc) if spec.model.value == "M" else a
        for n in range(6):
            assert multiplier(spec, n, 2) == (n * n + S * n + P) / ((n + a) * (n + b))


@pytest.mark.parametrize("spec", [M21, R11, UrnSpec("M", 3, 2, (3, 2)), UrnSpec("R", 2, 2, (2, 1))])
def test_second_moment_closed_form(spec):
    tab = moment_table(spec, 20, 2)
    for n in range(21):
        assert second_moment_closed_form(spec, n) == tab[n, 2]


@pytest.mark.parametrize("spec", [M21, UrnSpec("M", 3, 1, (3, 2)), UrnSpec("M", 1, 1, (1, 4))])
def test_factorial_moments_c1(spec):
    tab = moment_table(spec, 8, 4)
    for n in range(9):
        fact = factorial_moments_from_ordinary(tab.row(n))
        for s in range(5):
            assert factorial_moment_c1(spec, n, s) == fact[s]


def test_factorial_moments_need_c1():
    with pytest.raises(RequiresCEquals1):
        factorial_moment_c1(UrnSpec("M", 2, 2, (2, 1)), 2, 2)
    with pytest.raises(UnsupportedModel):
        factorial_moment_c1(R11, 2, 2)


def test_multicolor_covariance_worked():
    assert product_factor(MC111, 1) == Fraction(8, 3)
    assert covariance_multicolor(MC111, 1, 0, 1) == Fraction(-1, 9)


@pytest.mark.parametrize("spec", [MC111, UrnSpec("MC", 2, 1, (1, 2, 3)), UrnSpec("MC", 3, 2, (2, 1, 1, 1))])
def test_multicolor_covariance_matches_oracle(spec):
    r = spec.r
    for n in range(4):
        d = exact_distribution(spec, n)
        for i in range(r):
            for j in range(r):
                if i == j:
                    continue
                e = lambda *idx: oracle_moment(d, tuple(sum(1 for x in idx if x == k) for k in range(r)))
                cov = e(i, j) - e(i) * e(j)
                assert covariance_multicolor(spec, n, i, j) == cov


def test_covariance_errors():
    with pytest.raises(SameColor):
        covariance_multicolor(MC111, 1, 1, 1)
    with pytest.raises(UnsupportedModel):
        covariance_multicolor(UrnSpec("MC", 2, 1, (1, 2)), 1, 0, 1)


@pytest.mark.parametrize(
    "spec",
    [
        UrnSpec("FM", 2, 1, (1, 1)),  # mc = T0
        UrnSpec("FR", 2, 1, (1, 1)),
        UrnSpec("FM", 2, 1, (2, 1)),  # mc != T0
        UrnSpec("FR", 3, 2, (3, 2)),
        UrnSpec("FM", 1, 3, (1, 2)),  # mc = T0, W0 != B0
    ],
)
def test_friedman_expectation_and_martingale(spec):
    W0, T0, mc = spec.W0, spec.T0, spec.mc
    for n in range(9):
        d = exact_distribution(spec, n)
        mean = oracle_moment(d, 1)
        assert closed_form_expectation(spec, n) == mean
        co = friedman_martingale_coefficients(spec, n)
        assert co.phi * mean + co.psi == Fraction((T0 - mc) * W0, T0)


def test_friedman_forced_first_step():
    # from one white and one black with m = 2 the first sample is forced
    spec = UrnSpec("FM", 2, 1, (1, 1))
    assert exact_distribution(spec, 1).mass == {2: 1}
    assert [closed_form_expectation(spec, n) for n in range(6)] == [1, 2, 3, 4, 5, 6]
    assert len(exact_distribution(spec, 2).mass) == 3


grid_specs = st.builds(
    lambda model, m, c, w, b: UrnSpec(model, m, c, (w, b + max(0, m - w - b))),
    st.sampled_from(["M", "R"]), st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), st.integers(1, 4),
)


@settings(max_examples=40, deadline=None)
@given(grid_specs, st.integers(0, 4), st.integers(1, 3))
def test_recurrence_equals_oracle(spec, n, s):
    assert moment(spec, n, s) == oracle_moment(exact_distribution(spec, n), s)


@settings(max_examples=40, deadline=None)
@given(grid_specs, st.integers(0, 40))
def test_martingale_mean(spec, n):
    assert moment(spec, n, 1) / total_balls(spec, n) == Fraction(spec.W0, spec.T0)


@settings(max_examples=30, deadline=None)
@given(grid_specs, st.integers(0, 12))
def test_moments_are_log_convex(spec, n):
    # Lyapunov: E(W^2)^2 <= E(W) E(W^3), and Jensen E(W)^2 <= E(W^2)
    tab = moment_table(spec, n, 3)
    m1, m2, m3 = tab[n, 1], tab[n, 2], tab[n, 3]
    assert m1 * m1 <= m2
    assert m2 * m2 <= m1 * m3
