from fractions import Fraction

import mpmath
import numpy as np
import pytest

from urnlab import (
    UnsupportedModel,
    UrnSpec,
    estimate_moments,
    exact_distribution,
    martingale_diagnostic,
    moment,
    sample_final_states,
    simulate_path,
    total_balls,
)
from urnlab.moments import friedman_martingale_coefficients

SPECS = [
    UrnSpec("M", 2, 1, (2, 1)),
    UrnSpec("R", 3, 2, (1, 2)),
    UrnSpec("FM", 2, 1, (2, 1)),
    UrnSpec("FR", 2, 3, (1, 1)),
    UrnSpec("MC", 2, 1, (1, 1, 1)),
    UrnSpec("NB", 2, 1, (2, 1), nb=(1, 3)),
    UrnSpec("NB", 2, 1, (1, 1), nb=(2, 1), nb_with_replacement=True),
]


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_path_basics(spec):
    assert simulate_path(spec, 0, 7) == [spec.W0 if spec.model.value in "M R FM FR".split() else spec.counts]
    path = simulate_path(spec, 30, 7)
    assert len(path) == 31
    assert path == simulate_path(spec, 30, 7)


@pytest.mark.parametrize("seed", range(5))
def test_path_invariants(seed):
    m, c = 3, 2
    path = simulate_path(UrnSpec("M", m, c, (2, 3)), 40, seed)
    spec = UrnSpec("M", m, c, (2, 3))
    for h, (a, b) in enumerate(zip(path, path[1:])):
        assert b - a in range(0, m * c + 1, c)
        assert 0 <= b <= total_balls(spec, h + 1)
    fr = UrnSpec("FR", m, c, (2, 3))
    for a, b in zip(simulate_path(fr, 40, seed), simulate_path(fr, 40, seed)[1:]):
        assert b - a in range(0, m * c + 1, c)
    mc = UrnSpec("MC", m, c, (1, 2, 1, 1))
    for h, st in enumerate(simulate_path(mc, 40, seed)):
        assert sum(st) == total_balls(mc, h)
    a_add, b_add = 2, 5
    nb = UrnSpec("NB", m, 1, (2, 3), nb=(a_add, b_add))
    for (w0, b0), (w1, b1) in zip(simulate_path(nb, 40, seed), simulate_path(nb, 40, seed)[1:]):
        k, rem = divmod(w1 - w0, a_add)
        assert rem == 0 and 0 <= k <= m
        assert b1 - b0 == (m - k) * b_add


def test_friedman_forced_first_step():
    spec = UrnSpec("FM", 2, 1, (1, 1))
    summ = estimate_moments(spec, 1, 2, 5000, 3)
    assert summ.empirical_moments[1] == 2 and summ.standard_errors[1] == 0
    assert all(simulate_path(spec, 1, seed)[1] == 2 for seed in range(20))
    # afterwards the path is random, with mean n + 1
    summ = estimate_moments(spec, 6, 1, 100_000, 3)
    assert summ.standard_errors[1] > 0
    assert abs(summ.empirical_moments[1] - 7) < 4 * summ.standard_errors[1]


def test_zeroth_moment():
    summ = estimate_moments(SPECS[0], 5, 1, 100, 1)
    assert summ.empirical_moments[0] == 1 and summ.standard_errors[0] == 0


def test_reproducible_and_partitionable():
    spec = UrnSpec("M", 3, 1, (3, 2))
    a = estimate_moments(spec, 10, 3, 30_000, 123)
    b = estimate_moments(spec, 10, 3, 30_000, 123)
    c = estimate_moments(spec, 10, 3, 30_000, 123, workers=2)
    assert a == b == c
    assert a.power_sums == c.power_sums
    assert estimate_moments(spec, 10, 3, 30_000, 124) != a


def test_bad_arguments():
    with pytest.raises(ValueError):
        estimate_moments(SPECS[0], 2, 1, 0, 1)


def test_model_m_mean():
    spec = UrnSpec("M", 2, 1, (2, 1))
    summ = estimate_moments(spec, 10, 2, 100_000, 2024)
    exact = moment(spec, 10, 1)
    assert exact == Fraction(46, 3)
    assert abs(summ.empirical_moments[1] - float(exact)) < 4 * summ.standard_errors[1]


def test_martingale_diagnostics():
    spec = UrnSpec("R", 2, 1, (1, 1))
    assert martingale_diagnostic(spec, 0, 10, 1) == 0.5
    summ = estimate_moments(spec, 20, 1, 100_000, 5)
    assert abs(summ.martingale_mean - 0.5) < 4 * summ.martingale_se
    fm = UrnSpec("FM", 2, 1, (2, 1))
    summ = estimate_moments(fm, 5, 1, 100_000, 5)
    target = float(friedman_martingale_coefficients(fm, 0).phi * fm.W0)
    assert target == pytest.approx(2 / 3)
    assert abs(summ.martingale_mean - target) < 4 * summ.martingale_se
    with pytest.raises(UnsupportedModel):
        martingale_diagnostic(SPECS[5], 3, 10, 1)


def _chi_square_pvalue(observed: dict, probs: dict, runs: int) -> float:
    stat = 0.0
    for state, p in probs.items():
        e = runs * float(p)
        stat += (observed.get(state, 0) - e) ** 2 / e
    assert set(observed) <= set(probs)
    dof = len(probs) - 1
    return float(mpmath.gammainc(dof / 2, stat / 2, mpmath.inf, regularized=True))


@pytest.mark.parametrize("spec, n", [(s, 3) for s in SPECS] + [(UrnSpec("M", 3, 2, (2, 3)), 4)], ids=str)
def test_law_matches_exact_distribution(spec, n):
    runs = 100_000
    final = sample_final_states(spec, n, runs, 99)
    keys = [tuple(int(v) for v in row) for row in final] if final.ndim == 2 else [int(v) for v in final]
    observed = {}
    for k in keys:
        observed[k] = observed.get(k, 0) + 1
    probs = exact_distribution(spec, n).mass
    assert _chi_square_pvalue(observed, probs, runs) > 1e-3


def test_sample_states_agree_with_summary():
    spec = UrnSpec("MC", 2, 1, (1, 2, 1))
    final = sample_final_states(spec, 6, 20_000, 11)
    summ = estimate_moments(spec, 6, 2, 20_000, 11)
    assert summ.power_sums[1] == int(final[:, 0].sum())
    assert summ.power_sums[2] == int((final[:, 0] ** 2).sum())
    assert np.all(final.sum(axis=1) == total_balls(spec, 6))
