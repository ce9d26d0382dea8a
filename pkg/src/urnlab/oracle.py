"""Ground truth by exact enumeration of the state distribution.

The forward DP pushes exact probability mass through
:func:`urnlab.model.transition_distribution`; it shares nothing with the
moment recurrences beyond the kernel itself, which is why it serves as their
oracle.
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import OutOfRangeState, StateSpaceTooLarge, UnsupportedModel
from .model import Model, UrnSpec, projected_state_count, total_balls, transition_distribution

DEFAULT_STATE_CAP = 10**6


def state_cap() -> int:
    """Oracle state cap, overridable through ``URNLAB_STATE_CAP``."""
    env = os.environ.get("URNLAB_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


def _initial_state(spec: UrnSpec):
    if spec.model is Model.MC or spec.model is Model.NB:
        return tuple(spec.counts)
    return spec.W0


@dataclass(frozen=True)
class StateDistribution:
    """Exact law of the urn state at time ``n``; only positive masses are kept."""

    spec: UrnSpec
    n: int
    mass: dict

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def white_marginal(self) -> dict:
        """Law of the tracked (first) color count."""
        if not isinstance(next(iter(self.mass)), tuple):
            return dict(self.mass)
        out = defaultdict(Fraction)
        for state, p in self.mass.items():
            out[state[0]] += p
        return dict(sorted(out.items()))

    def to_records(self) -> list[dict]:
        recs = []
        for state, p in self.mass.items():
            st = list(state) if isinstance(state, tuple) else state
            recs.append({"state": st, "p": f"{p.numerator}/{p.denominator}"})
        return recs

    @classmethod
    def from_records(cls, spec: UrnSpec, n: int, records: list[dict]) -> "StateDistribution":
        mass = {}
        for rec in records:
            st = rec["state"]
            mass[tuple(st) if isinstance(st, list) else st] = Fraction(rec["p"])
        return cls(spec, n, mass)


def exact_distribution(spec: UrnSpec, n: int, cap: int | None = None) -> StateDistribution:
    """Exact law of the state after ``n`` draws by forward dynamic programming."""
    if n < 0:
        raise ValueError("n must be non-negative")
    cap = state_cap() if cap is None else cap
    projected = projected_state_count(spec, n)
    if projected > cap:
        raise StateSpaceTooLarge(projected, cap)
    dist = {_initial_state(spec): Fraction(1)}
    for h in range(n):
        nxt = defaultdict(Fraction)
        for state, p in dist.items():
            kernel = transition_distribution(spec, state, h)
            for _, q, delta in kernel.items():
                if not q:
                    continue
                if isinstance(state, tuple):
                    new = tuple(x + d for x, d in zip(state, delta))
                else:
                    new = state + delta
                nxt[new] += p * q
        dist = dict(sorted(nxt.items()))
    return StateDistribution(spec, n, dist)


def oracle_moment(dist: StateDistribution, s) -> Fraction:
    """E(state^s).

    An integer ``s`` gives the moment of the tracked color (white, or color 0
    for MC).  A tuple ``s`` gives the joint moment E(prod_i X_i^{s_i}) over the
    state vector (MC colors, or (white, black) for NB).
    """
    total = Fraction(0)
    if isinstance(s, tuple):
        for state, p in dist.mass.items():
            vec = state if isinstance(state, tuple) else (state, total_balls(dist.spec, dist.n) - state)
            term = p
            for x, e in zip(vec, s):
                term *= x**e
            total += term
        return total
    for state, p in dist.mass.items():
        x = state[0] if isinstance(state, tuple) else state
        total += p * x**s
    return total


def _source_states(spec: UrnSpec, n: int, j: int, k: int):
    t = total_balls(spec, n)
    states = [j + spec.c * (k - i) for i in range(spec.m + 1)]
    bad = [w for w in states if not 0 <= w <= t]
    if bad:
        raise OutOfRangeState(f"source states {bad} outside [0, T_{n}={t}]")
    return t, states


def lemma_transition_sum(spec: UrnSpec, n: int, j: int, k: int) -> Fraction:
    """sum_{i=0}^{m} P(W_{n+1} = j+ck | W_n = j+c(k-i)) from the binomial kernel."""
    if spec.model is not Model.R:
        raise UnsupportedModel("transition-sum identity is defined for model R")
    t, states = _source_states(spec, n, j, k)
    m = spec.m
    return sum(
        (Fraction(comb(m, i) * w**i * (t - w) ** (m - i), t**m) for i, w in enumerate(states)),
        Fraction(0),
    )


def lemma_transition_sum_expanded(spec: UrnSpec, n: int, j: int, k: int) -> Fraction:
    """Same sum, regrouped by powers of T_n after expanding (T_n - w)^{m-i}."""
    if spec.model is not Model.R:
        raise UnsupportedModel("transition-sum identity is defined for model R")
    t, states = _source_states(spec, n, j, k)
    m = spec.m
    total = 0
    for l in range(m + 1):
        inner = 0
        for i in range(m - l + 1):
            w = states[i]
            inner += comb(m, i) * comb(m - i, l) * w**i * (-w) ** (m - i - l)
        total += t**l * inner
    return Fraction(total, t**m)


def lemma_bound_residuals(spec: UrnSpec, ell: int, n_values) -> dict[int, Fraction]:
    """max over admissible (j, k) of n^2 (sum - 1 + 1/n), for each n.

    Admissible: cm <= j <= T_{ell-1}, 0 <= k < m(n+1), and every source state
    j + c(k-i) lies in [0, T_n].  The bound ``sum <= 1 - 1/n + kappa/n^2``
    holds at n iff the returned residual is <= kappa.
    """
    cm = spec.mc
    m, c = spec.m, spec.c
    j_hi = total_balls(spec, ell - 1)
    out = {}
    for n in n_values:
        if n < max(ell, 1):
            continue
        t = total_balls(spec, n)
        best = None
        # the sum is (integer)/t^m, so maximize the integer numerator
        for j in range(cm, j_hi + 1):
            k_hi = min(m * (n + 1) - 1, (t - j) // c)
            for k in range(0, k_hi + 1):
                num = 0
                for i in range(m + 1):
                    w = j + c * (k - i)
                    num += comb(m, i) * w**i * (t - w) ** (m - i)
                if best is None or num > best:
                    best = num
        if best is not None:
            out[n] = n * n * (Fraction(best, t**m) - 1 + Fraction(1, n))
    return out
