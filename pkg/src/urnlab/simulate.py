"""Seeded Monte Carlo simulation of every urn variant.

Sampling without replacement is done as ``m`` sequential single-ball
removals, sampling with replacement as ``m`` independent draws; both are
vectorized over runs.  Runs are grouped into fixed-size blocks, block ``b``
seeded by ``SeedSequence(seed, spawn_key=(b,))``, so results do not depend on
how blocks are scheduled.  Per-block power sums are exact Python integers and
merge by plain addition.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import UnsupportedModel
from .model import Model, UrnSpec, total_balls
from .moments import friedman_martingale_coefficients

BLOCK_SIZE = 8192


def _draw_whites(rng, white, total, m, replace):
    """Number of white balls in a size-m sample, per run."""
    k = np.zeros(white.shape, dtype=np.int64)
    if replace:
        for _ in range(m):
            k += rng.integers(0, total, size=white.shape) < white
    else:
        w = white.copy()
        for i in range(m):
            hit = rng.integers(0, total - i, size=white.shape) < w
            k += hit
            w -= hit
    return k


def _draw_colors(rng, x, m):
    """Multivariate hypergeometric sample counts, shape (runs, r)."""
    runs, r = x.shape
    rem = x.copy()
    k = np.zeros_like(x)
    tot = int(x[0].sum())
    rows = np.arange(runs)
    for i in range(m):
        u = rng.integers(0, tot - i, size=runs)
        col = (u[:, None] >= np.cumsum(rem, axis=1)).sum(axis=1)
        k[rows, col] += 1
        rem[rows, col] -= 1
    return k


def _run(spec: UrnSpec, n: int, runs: int, rng, record: bool = False):
    """Final states (or the whole trajectory when ``record``) for ``runs`` urns.

    Two-color balanced models give shape (runs,), MC (runs, r), NB (runs, 2).
    """
    m, c = spec.m, spec.c
    model = spec.model
    if model is Model.MC:
        state = np.tile(np.array(spec.counts, dtype=np.int64), (runs, 1))
    elif model is Model.NB:
        state = np.tile(np.array(spec.counts, dtype=np.int64), (runs, 1))
    else:
        state = np.full(runs, spec.W0, dtype=np.int64)
    path = [state.copy()] if record else None
    for h in range(n):
        if model is Model.MC:
            state = state + c * _draw_colors(rng, state, m)
        elif model is Model.NB:
            a, b = spec.nb
            w, bl = state[:, 0], state[:, 1]
            k = _draw_whites(rng, w, w + bl, m, spec.nb_with_replacement)
            state = np.stack([w + a * k, bl + b * (m - k)], axis=1)
        else:
            k = _draw_whites(rng, state, total_balls(spec, h), m, model in (Model.R, Model.FR))
            state = state + (c * k if model in (Model.M, Model.R) else c * (m - k))
        if record:
            path.append(state.copy())
    return path if record else state


def _as_state(x):
    return tuple(int(v) for v in x) if np.ndim(x) else int(x)


def simulate_path(spec: UrnSpec, n: int, seed: int) -> list:
    """One trajectory of length n+1 starting from the initial state."""
    rng = np.random.default_rng(seed)
    path = _run(spec, n, 1, rng, record=True)
    return [_as_state(p[0]) for p in path]


def _tracked(spec: UrnSpec, final: np.ndarray) -> np.ndarray:
    return final if final.ndim == 1 else final[:, 0]


def sample_final_states(spec: UrnSpec, n: int, runs: int, seed: int, block_size: int = BLOCK_SIZE) -> np.ndarray:
    """Final states of ``runs`` independent urns, using the same per-block seeding."""
    parts = []
    for b, start in enumerate(range(0, runs, block_size)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))
        parts.append(_run(spec, n, min(block_size, runs - start), rng))
    return np.concatenate(parts)


def _block_power_sums(spec: UrnSpec, n: int, runs: int, seed: int, block: int, p_max: int):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    x = _tracked(spec, _run(spec, n, runs, rng))
    vals, counts = np.unique(x, return_counts=True)
    vals = [int(v) for v in vals]
    counts = [int(q) for q in counts]
    return [sum(q * v**p for v, q in zip(vals, counts)) for p in range(p_max + 1)]


def _block_task(args):
    return _block_power_sums(*args)


@dataclass(frozen=True)
class SimulationSummary:
    """Empirical moments of the tracked color count at time ``n``.

    The tracked count is white for two-color models and NB, color 0 for MC.
    ``martingale_mean`` is the empirical mean of W_n/T_n (M, R, MC) or of
    phi_n W_n + psi_n (FM, FR); NaN for NB.
    """

    spec: UrnSpec
    n: int
    runs: int
    seed: int
    empirical_moments: dict
    standard_errors: dict
    martingale_mean: float
    martingale_se: float
    power_sums: tuple = field(default=(), repr=False)


def _summarize(spec, n, runs, seed, s_max, sums) -> SimulationSummary:
    N = sums[0]
    means, ses = {}, {}
    for s in range(s_max + 1):
        means[s] = float(Fraction(sums[s], N))
        if N > 1:
            var = Fraction(N * sums[2 * s] - sums[s] ** 2, N * N * (N - 1))
            ses[s] = math.sqrt(var)
        else:
            ses[s] = 0.0
    if spec.model is Model.NB:
        mart, mart_se = math.nan, math.nan
    elif spec.model in (Model.FM, Model.FR):
        coef = friedman_martingale_coefficients(spec, n)
        mart = float(coef.phi * Fraction(sums[1], N) + coef.psi)
        mart_se = float(abs(coef.phi)) * ses.get(1, 0.0) if s_max >= 1 else 0.0
    else:
        t = total_balls(spec, n)
        mart = float(Fraction(sums[1], N * t))
        mart_se = ses.get(1, 0.0) / t if s_max >= 1 else 0.0
    return SimulationSummary(spec, n, runs, seed, means, ses, mart, mart_se, tuple(sums))


def estimate_moments(
    spec: UrnSpec,
    n: int,
    s_max: int,
    runs: int,
    seed: int,
    block_size: int = BLOCK_SIZE,
    workers: int = 1,
) -> SimulationSummary:
    """Empirical E(W_n^s), s <= s_max, with standard errors of the mean."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    p_max = 2 * max(s_max, 1)
    tasks = []
    for b, start in enumerate(range(0, runs, block_size)):
        tasks.append((spec, n, min(block_size, runs - start), seed, b, p_max))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_task, tasks))
    else:
        parts = [_block_task(t) for t in tasks]
    sums = [sum(col) for col in zip(*parts)]
    return _summarize(spec, n, runs, seed, s_max, sums)


def martingale_diagnostic(spec: UrnSpec, n: int, runs: int, seed: int) -> float:
    """Empirical mean of the model's martingale at time n (target: its value at 0)."""
    if spec.model is Model.NB:
        raise UnsupportedModel("no martingale is known for the non-balanced urn")
    return estimate_moments(spec, n, 1, runs, seed).martingale_mean
