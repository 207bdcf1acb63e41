"""Closed-form large-deviation bounds, evaluated in natural-log space.

Every function returns a :class:`BoundResult`.  The raw value may exceed 1
(a vacuous bound); it is kept unclamped because the inequality-chain checks
compare raw values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class BoundResult:
    """A bound carried as its natural log.

    ``params`` echoes the inputs the bound was computed from.
    """

    log_value: float
    name: str = ""
    params: tuple = ()

    @property
    def value(self) -> float:
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    @property
    def clamped(self) -> float:
        return min(self.value, 1.0)

    @property
    def vacuous(self) -> bool:
        return self.log_value >= 0.0


def _check_even_t(t: int) -> None:
    if isinstance(t, bool) or int(t) != t:
        raise ValueError(f"t must be an integer, got {t!r}")
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if t % 2:
        raise ValueError(f"t must be even, got {t}")


def _check_positive_int(name: str, v: int, minimum: int = 1) -> None:
    if isinstance(v, bool) or int(v) != v or v < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {v!r}")


@dataclass(frozen=True)
class TailQuery:
    """Inputs of the two-sided tail bound for a sum of n [0,1] variables."""

    n: int
    t: int
    a: float
    chi: int

    def __post_init__(self):
        _check_positive_int("n", self.n)
        _check_even_t(self.t)
        _check_positive_int("chi", self.chi)
        if self.chi > self.n:
            raise ValueError(f"chi must be <= n, got chi={self.chi}, n={self.n}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")


@dataclass(frozen=True)
class BernoulliQuery:
    """Inputs of the Bernoulli/bounded-degree bound (relative deviation a)."""

    n: int
    d: int
    t: int
    p: float
    a: float

    def __post_init__(self):
        _check_positive_int("n", self.n)
        _check_positive_int("d", self.d, minimum=0)
        _check_even_t(self.t)
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly inside (0, 1), got {self.p}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")


@dataclass(frozen=True)
class ColorClassSizes:
    sizes: tuple

    def __init__(self, sizes: Sequence[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValueError("color class list is empty")
        if any(s < 1 for s in sizes):
            raise ValueError(f"color class sizes must be >= 1, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)


def _twise_log_constant(t: int) -> float:
    # log of 2 e^{1/(6t)} sqrt(pi t) (t/e)^{t/2}
    return LOG2 + 1.0 / (6 * t) + 0.5 * math.log(math.pi * t) + 0.5 * t * (math.log(t) - 1.0)


def moment_bound_twise(m: int, t: int) -> BoundResult:
    """Upper bound on E[(Y - mu)^t] for a sum of m t-wise independent [0,1] variables.

    Value: 2 e^{1/(6t)} sqrt(pi t) (m t / e)^{t/2}.
    """
    _check_positive_int("m", m)
    _check_even_t(t)
    log_value = _twise_log_constant(t) + 0.5 * t * math.log(m)
    return BoundResult(log_value, "moment_twise", (("m", m), ("t", t)))


def chernoff_tail(m: int, a: float) -> BoundResult:
    """2 exp(-a^2 / (2m)), the independent-case reference bound on Pr[|Y - mu| > a]."""
    _check_positive_int("m", m)
    if a < 0:
        raise ValueError(f"a must be nonnegative, got {a}")
    return BoundResult(LOG2 - a * a / (2.0 * m), "chernoff", (("m", m), ("a", a)))


def combined_tail_bound(n: int, t: int, chi: int, a: float) -> BoundResult:
    """Bound on Pr[|X - mu| >= a] when X_1..X_n take values in [0,1] and t-agree
    with a graph of chromatic number (at most) chi.

    Value: 2 sqrt(pi t) (sqrt(n t chi) / a)^t.
    """
    q = TailQuery(n=n, t=t, a=a, chi=chi)
    log_value = LOG2 + 0.5 * math.log(math.pi * q.t) + q.t * (
        0.5 * math.log(q.n * q.t * q.chi) - math.log(q.a)
    )
    return BoundResult(log_value, "theorem", (("n", n), ("t", t), ("chi", chi), ("a", a)))


def bernoulli_tail_bound(n: int, d: int, t: int, p: float, a: float, side: str = "upper") -> BoundResult:
    """Bound on Pr[X >= (1+a) p n] (side="upper") or Pr[X <= (1-a) p n]
    (side="lower") for Be(p) variables that t-agree with a graph of max degree d.

    Both sides share one value: 2 sqrt(pi t) (sqrt((d+1) t) / (a p sqrt(n)))^t.
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    q = BernoulliQuery(n=n, d=d, t=t, p=p, a=a)
    log_value = LOG2 + 0.5 * math.log(math.pi * q.t) + q.t * (
        0.5 * math.log((q.d + 1) * q.t)
        - math.log(q.a)
        - math.log(q.p)
        - 0.5 * math.log(q.n)
    )
    params = (("n", n), ("d", d), ("t", t), ("p", p), ("a", a), ("side", side))
    return BoundResult(log_value, "corollary", params)


def refined_moment_bound(classes: ColorClassSizes | Sequence[int], t: int) -> BoundResult:
    """Moment bound using the actual color-class sizes and optimal Jensen weights.

    Equals 2 e^{1/(6t)} sqrt(pi t) (t/e)^{t/2} (sum_j sqrt(|V_j|))^t.
    """
    if not isinstance(classes, ColorClassSizes):
        classes = ColorClassSizes(classes)
    _check_even_t(t)
    root_sum = math.fsum(math.sqrt(s) for s in classes.sizes)
    log_value = _twise_log_constant(t) + t * math.log(root_sum)
    return BoundResult(log_value, "refined_moment", (("sizes", classes.sizes), ("t", t)))


def headline_moment_bound(n: int, k: int, t: int) -> BoundResult:
    """2 sqrt(pi t) (k n t)^{t/2}: the moment bound after the Cauchy-Schwarz step."""
    _check_positive_int("n", n)
    _check_positive_int("k", k)
    _check_even_t(t)
    log_value = LOG2 + 0.5 * math.log(math.pi * t) + 0.5 * t * math.log(k * n * t)
    return BoundResult(log_value, "headline_moment", (("n", n), ("k", k), ("t", t)))


def markov_tail_from_moment(moment_bound: BoundResult, t: int, a: float) -> BoundResult:
    """Turn a bound on E[(X-mu)^t] into a bound on Pr[|X-mu| >= a] (t even)."""
    _check_even_t(t)
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    params = (("moment", moment_bound.name), ("t", t), ("a", a))
    return BoundResult(moment_bound.log_value - t * math.log(a), "markov", params)


def optimize_t(
    n: int,
    chi: int,
    a: float,
    t_max: int,
    jensen_refinement: ColorClassSizes | Sequence[int] | None = None,
) -> tuple[int, BoundResult]:
    """Scan even t in 2..t_max and return the order giving the smallest bound.

    With ``jensen_refinement`` the refined moment bound (through Markov) is
    minimized instead of the headline tail bound.  Ties go to the smaller t.
    """
    if isinstance(t_max, bool) or int(t_max) != t_max or t_max < 2:
        raise ValueError(f"t_max must be an integer >= 2, got {t_max!r}")
    best_t, best = 0, None
    for t in range(2, int(t_max) + 1, 2):
        if jensen_refinement is None:
            cand = combined_tail_bound(n, t, chi, a)
        else:
            cand = markov_tail_from_moment(refined_moment_bound(jensen_refinement, t), t, a)
        if best is None or cand.log_value < best.log_value:
            best_t, best = t, cand
    return best_t, best
