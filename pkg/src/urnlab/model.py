"""Urn specifications and exact one-step transition kernels.

Two-color balanced models (M, R, FM, FR) carry the white count only; the
total ``T_n = T_0 + n m c`` is deterministic.  The multi-color model MC
carries the full color vector and the non-balanced model NB carries the
``(white, black)`` pair.
"""
from __future__ import annotations

import enum
import itertools
import json
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    BadParameter,
    DegenerateUrn,
    ModelMismatch,
    NonPositiveCount,
    OutOfRangeState,
    UnsupportedModel,
)


class Model(str, enum.Enum):
    M = "M"    # m draws without replacement, add c per observed ball
    R = "R"    # m draws with replacement
    FM = "FM"  # Friedman-type, without replacement
    FR = "FR"  # Friedman-type, with replacement
    MC = "MC"  # r-color version of M
    NB = "NB"  # non-balanced (a, b) matrix

    def __str__(self):
        return self.value


BALANCED_TWO_COLOR = (Model.M, Model.R, Model.FM, Model.FR)
WITH_REPLACEMENT = (Model.R, Model.FR)


@dataclass(frozen=True)
class UrnSpec:
    """Parameters of one urn model.

    ``counts`` is ``(W0, B0)`` for two-color models and ``(X_{0,1}, ..., X_{0,r})``
    for MC.  ``nb`` is the ``(a, b)`` pair of the non-balanced model, and
    ``nb_with_replacement`` picks its sampling mode.

    The constructor validates; an existing ``UrnSpec`` is always valid.
    """

    model: Model
    m: int
    c: int
    counts: tuple[int, ...]
    nb: tuple[int, int] | None = None
    nb_with_replacement: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        for name in ("m", "c"):
            try:
                object.__setattr__(self, name, operator.index(getattr(self, name)))
            except TypeError:
                raise BadParameter(f"{name} must be an integer, got {getattr(self, name)!r}") from None
        object.__setattr__(self, "counts", tuple(int(x) for x in self.counts))
        if self.nb is not None:
            object.__setattr__(self, "nb", tuple(int(x) for x in self.nb))
        validate_spec(self)

    @property
    def W0(self) -> int:
        return self.counts[0]

    @property
    def B0(self) -> int:
        if self.model is Model.MC:
            return self.T0 - self.counts[0]
        return self.counts[1]

    @property
    def T0(self) -> int:
        return sum(self.counts)

    @property
    def r(self) -> int:
        return len(self.counts)

    @property
    def mc(self) -> int:
        return self.m * self.c

    def to_dict(self) -> dict:
        d = {"model": self.model.value, "m": self.m, "c": self.c, "counts": list(self.counts)}
        if self.nb is not None:
            d["nb"] = list(self.nb)
            if self.nb_with_replacement:
                d["nb_with_replacement"] = True
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "UrnSpec":
        unknown = set(d) - {"model", "m", "c", "counts", "nb", "nb_with_replacement"}
        if unknown:
            raise BadParameter(f"unknown keys in urn spec: {sorted(unknown)}")
        nb = d.get("nb")
        return cls(
            model=d["model"],
            m=d["m"],
            c=d.get("c", 1),
            counts=tuple(d["counts"]),
            nb=tuple(nb) if nb is not None else None,
            nb_with_replacement=bool(d.get("nb_with_replacement", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "UrnSpec":
        return cls.from_dict(json.loads(text))


def validate_spec(spec: UrnSpec) -> None:
    """Raise a :class:`SpecError` subclass unless every invariant holds."""
    if spec.m < 1:
        raise BadParameter(f"m must be an integer >= 1, got {spec.m!r}")
    if spec.c < 1:
        raise BadParameter(f"c must be an integer >= 1, got {spec.c!r}")
    want = "r >= 2" if spec.model is Model.MC else "2"
    if (spec.model is Model.MC and len(spec.counts) < 2) or (
        spec.model is not Model.MC and len(spec.counts) != 2
    ):
        raise BadParameter(f"model {spec.model} needs {want} initial counts, got {len(spec.counts)}")
    if any(x <= 0 for x in spec.counts):
        raise NonPositiveCount(f"initial counts must be positive, got {spec.counts}")
    if spec.model is Model.NB:
        if spec.nb is None:
            raise ModelMismatch("model NB requires nb=(a, b)")
        if len(spec.nb) != 2 or any(v < 1 for v in spec.nb):
            raise BadParameter(f"nb parameters must be two integers >= 1, got {spec.nb}")
    else:
        if spec.nb is not None:
            raise ModelMismatch(f"model {spec.model} does not take nb parameters")
        if spec.nb_with_replacement:
            raise ModelMismatch("nb_with_replacement only applies to model NB")
    if spec.T0 < spec.m:
        raise DegenerateUrn(f"T0 = {spec.T0} < m = {spec.m}")


def total_balls(spec: UrnSpec, n: int) -> int:
    """T_n = T_0 + n m c for the balanced models."""
    if spec.model is Model.NB:
        raise UnsupportedModel("the total is random for the non-balanced urn")
    if n < 0:
        raise ValueError("n must be non-negative")
    return spec.T0 + n * spec.mc


def marginal_spec(spec: UrnSpec, color: int = 0) -> UrnSpec:
    """Two-color model-M spec whose white count has the law of one MC color."""
    if spec.model is not Model.MC:
        raise UnsupportedModel("marginal_spec applies to model MC")
    x = spec.counts[color]
    return UrnSpec(Model.M, spec.m, spec.c, (x, spec.T0 - x))


@dataclass(frozen=True)
class TransitionDistribution:
    """PMF of the sample composition at one step, with the induced increments.

    ``outcomes`` maps k (white balls in the sample, or a color composition for
    MC) to its probability; ``deltas`` maps k to the balls added, an int for the
    tracked color or a tuple for MC/NB.
    """

    n: int
    outcomes: dict
    deltas: dict

    def white_delta(self, k):
        return self.deltas[k]

    def items(self):
        for k, p in self.outcomes.items():
            yield k, p, self.deltas[k]


def _hypergeom(w: int, t: int, m: int, k: int) -> Fraction:
    return Fraction(comb(w, k) * comb(t - w, m - k), comb(t, m))


def _binomial(w: int, t: int, m: int, k: int) -> Fraction:
    return Fraction(comb(m, k) * w**k * (t - w) ** (m - k), t**m)


def compositions(total: int, parts: int):
    """All non-negative integer vectors of length ``parts`` summing to ``total``,
    in lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _multi_hypergeom(x: tuple[int, ...], m: int, k: tuple[int, ...]) -> Fraction:
    num = 1
    for xi, ki in zip(x, k):
        num *= comb(xi, ki)
    return Fraction(num, comb(sum(x), m))


def transition_distribution(spec: UrnSpec, state, n: int = 0) -> TransitionDistribution:
    """Exact one-step kernel out of ``state`` at time ``n``.

    ``state`` is the white count for M/R/FM/FR, the color vector for MC and the
    ``(white, black)`` pair for NB (``n`` is then irrelevant).
    """
    m, c = spec.m, spec.c
    model = spec.model
    if model is Model.MC:
        x = tuple(state)
        if len(x) != spec.r or any(v < 0 for v in x) or sum(x) != total_balls(spec, n):
            raise OutOfRangeState(f"{x} is not a color vector of total T_{n}")
        outcomes, deltas = {}, {}
        for k in compositions(m, spec.r):
            outcomes[k] = _multi_hypergeom(x, m, k)
            deltas[k] = tuple(c * ki for ki in k)
        return TransitionDistribution(n, outcomes, deltas)

    if model is Model.NB:
        w, b = state
        if w < 0 or b < 0 or w + b < m:
            raise OutOfRangeState(f"state {(w, b)} cannot supply a sample of size {m}")
        a_add, b_add = spec.nb
        kernel = _binomial if spec.nb_with_replacement else _hypergeom
        outcomes = {k: kernel(w, w + b, m, k) for k in range(m + 1)}
        deltas = {k: (k * a_add, (m - k) * b_add) for k in range(m + 1)}
        return TransitionDistribution(n, outcomes, deltas)

    t = total_balls(spec, n)
    w = int(state)
    if not 0 <= w <= t:
        raise OutOfRangeState(f"white count {w} outside [0, T_{n}={t}]")
    kernel = _binomial if model in WITH_REPLACEMENT else _hypergeom
    outcomes = {k: kernel(w, t, m, k) for k in range(m + 1)}
    if model in (Model.M, Model.R):
        deltas = {k: c * k for k in range(m + 1)}
    else:
        deltas = {k: c * (m - k) for k in range(m + 1)}
    return TransitionDistribution(n, outcomes, deltas)


def projected_state_count(spec: UrnSpec, n: int) -> int:
    """Upper bound on the number of reachable states at time n."""
    steps = spec.m * n
    if spec.model is Model.MC:
        return comb(steps + spec.r - 1, spec.r - 1)
    return steps + 1


def iter_grid(models=("M", "R"), ms=(2, 3), cs=(1, 2), counts=((1, 1), (2, 1), (3, 2))):
    """Valid two-color specs over a parameter grid (T0 >= m enforced by skipping)."""
    for model, m, c, wb in itertools.product(models, ms, cs, counts):
        if sum(wb) >= m:
            yield UrnSpec(Model(model), m, c, wb)
