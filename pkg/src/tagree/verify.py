"""Exact and Monte Carlo oracles that check the bounds against real distributions."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .bounds import (
    BoundResult,
    bernoulli_tail_bound,
    chernoff_tail,
    combined_tail_bound,
    headline_moment_bound,
    markov_tail_from_moment,
    moment_bound_twise,
    refined_moment_bound,
)
from .sampler import (
    DEFAULT_BUDGET,
    DependentEnsemble,
    TwiseFamily,
    exact_sum_counts,
    family_ensemble,
    simulate_sums,
)

CSV_COLUMNS = (
    "a",
    "empirical",
    "stderr",
    "bound_theorem",
    "bound_refined",
    "bound_corollary",
    "bound_chernoff",
    "vacuous",
    "violation",
)
SIGMAS = 3.0


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(float(x))


@dataclass
class TailRow:
    a: float
    empirical: float
    stderr: float
    bound_theorem: float
    bound_refined: float | None
    bound_corollary: float | None
    bound_chernoff: float

    @property
    def vacuous(self) -> bool:
        return self.bound_theorem >= 1.0

    @property
    def violation(self) -> bool:
        """Empirical frequency exceeds some attached bound by more than 3 sigma."""
        floor = self.empirical - SIGMAS * self.stderr
        bounds = (self.bound_theorem, self.bound_refined, self.bound_corollary)
        return any(b is not None and floor > b for b in bounds)

    def cells(self) -> list[str]:
        return [
            _fmt(self.a),
            _fmt(self.empirical),
            _fmt(self.stderr),
            _fmt(self.bound_theorem),
            _fmt(self.bound_refined),
            _fmt(self.bound_corollary),
            _fmt(self.bound_chernoff),
            _fmt(self.vacuous),
            _fmt(self.violation),
        ]


@dataclass
class ExperimentReport:
    config: dict
    rows: list[TailRow] = field(default_factory=list)

    @property
    def violations(self) -> list[TailRow]:
        return [r for r in self.rows if r.violation]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.config.items():
            buf.write(f"# {k}={v}\n")
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for row in sorted(self.rows, key=lambda r: r.a):
            buf.write(",".join(row.cells()) + "\n")
        return buf.getvalue()


@dataclass
class MomentReport:
    t: int
    moment: Fraction | float
    lemma_bound: BoundResult | None
    refined_bound: BoundResult
    headline_bound: BoundResult
    method: str

    @property
    def dominated(self) -> bool:
        ok = self.moment < self.refined_bound.value and self.moment < self.headline_bound.value
        if self.lemma_bound is not None:
            ok = ok and self.moment < self.lemma_bound.value
        return ok


def tail_threshold(denominator: int, mean: Fraction, a) -> tuple[int, int, int]:
    """Integers (Q, P, c) with |X - mean| >= a  <=>  |S*Q - P| >= c, where X = S/denominator."""
    scaled = Fraction(mean) * denominator
    a = Fraction(a)
    return scaled.denominator, scaled.numerator, math.ceil(a * denominator * scaled.denominator)


def _bound_order(e: DependentEnsemble, t: int | None) -> int:
    t = e.family.t if t is None else t
    t -= t % 2
    if t < 2:
        raise ValueError("the ensemble needs independence order >= 2 for an even moment")
    return t


def _row_bounds(e: DependentEnsemble, t: int, a: float, chi: int, classes) -> tuple:
    n = e.n
    theorem = combined_tail_bound(n, t, chi, a).value
    refined = markov_tail_from_moment(refined_moment_bound(classes, t), t, a).value
    corollary = None
    no_flips = not any(flip for _, flip in e.vertex_map)
    if e.bernoulli and no_flips and 0 < e.p_num < e.family.prime:
        p = e.p_num / e.family.prime
        corollary = bernoulli_tail_bound(n, e.graph.max_degree, t, p, a / (p * n)).value
    return theorem, refined, corollary, chernoff_tail(n, a).value


def estimate_tail(
    e: DependentEnsemble,
    a_grid: Sequence[float],
    trials: int,
    master_seed: int,
    threads: int = 1,
    t: int | None = None,
    config: dict | None = None,
) -> ExperimentReport:
    """Monte Carlo frequency of |X - mu| >= a for each a, with every applicable bound.

    mu is the exact mean of the ensemble.  The corollary column uses the
    relative deviation a / (p n) and is filled only for unflipped Bernoulli ensembles.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    t = _bound_order(e, t)
    sums = simulate_sums(e, trials, master_seed, threads)
    coloring = e.coloring()
    mean = e.mean()
    report = ExperimentReport(dict(config or {}))
    for a in sorted(set(float(x) for x in a_grid)):
        q, p, c = tail_threshold(e.denominator, mean, a)
        hits = int(np.count_nonzero(np.abs(sums * q - p) >= c))
        f = hits / trials
        se = math.sqrt(f * (1 - f) / trials)
        if a > 0:
            bounds = _row_bounds(e, t, a, coloring.k, coloring.class_sizes)
        else:
            bounds = (math.inf, math.inf, None, chernoff_tail(e.n, 0.0).value)
        report.rows.append(TailRow(a, f, se, *bounds))
    return report


def exact_tail(e: DependentEnsemble, a_grid: Sequence[float], budget: int = DEFAULT_BUDGET) -> dict:
    """Exact Pr[|X - mu| >= a] over the full seed space, as Fractions keyed by a."""
    counts = exact_sum_counts(e, budget)
    total = e.family.seed_space
    mean = e.mean()
    out = {}
    for a in a_grid:
        q, p, c = tail_threshold(e.denominator, mean, a)
        hits = sum(k for s, k in counts.items() if abs(s * q - p) >= c)
        out[a] = Fraction(hits, total)
    return out


def _moment_bounds(e: DependentEnsemble, t: int):
    coloring = e.coloring()
    lemma = moment_bound_twise(e.n, t) if e.graph.num_edges == 0 else None
    refined = refined_moment_bound(coloring.class_sizes, t)
    headline = headline_moment_bound(e.n, coloring.k, t)
    return lemma, refined, headline


def _as_ensemble(obj) -> DependentEnsemble:
    return family_ensemble(obj) if isinstance(obj, TwiseFamily) else obj


def exact_moment(obj: DependentEnsemble | TwiseFamily, t: int | None = None, budget: int = DEFAULT_BUDGET) -> MomentReport:
    """E[(X - mu)^t] by enumerating every seed, in exact rational arithmetic.

    A bare family is read as its m grid-uniform variables.  The default order
    is the largest even number not above the family's independence order.
    """
    e = _as_ensemble(obj)
    t = _bound_order(e, t)
    counts = exact_sum_counts(e, budget)
    mean = e.mean()
    d = e.denominator
    total = sum(counts.values())
    moment = sum((k * (Fraction(s, d) - mean) ** t for s, k in counts.items()), Fraction(0)) / total
    return MomentReport(t, moment, *_moment_bounds(e, t), method="exhaustive")


def estimate_moment(obj, trials: int, master_seed: int, t: int | None = None, threads: int = 1) -> MomentReport:
    e = _as_ensemble(obj)
    t = _bound_order(e, t)
    sums = simulate_sums(e, trials, master_seed, threads)
    dev = sums / e.denominator - float(e.mean())
    return MomentReport(t, float(np.mean(dev**t)), *_moment_bounds(e, t), method="monte-carlo")


def integral_identity_check(values: Sequence[float], weights: Sequence[float] | None = None, tol: float = 1e-12) -> bool:
    """Check E[Z] = integral_0^inf Pr[Z >= x] dx for a finite nonnegative distribution.

    The survival function is a step function, so the integral is a finite sum
    over the gaps between consecutive support points.
    """
    values = [float(v) for v in values]
    if any(v < 0 for v in values):
        raise ValueError("support must be nonnegative")
    if weights is None:
        weights = [1.0] * len(values)
    total = math.fsum(weights)
    probs = [w / total for w in weights]
    mass: dict[float, float] = {}
    for v, p in zip(values, probs):
        mass[v] = mass.get(v, 0.0) + p
    expectation = math.fsum(v * p for v, p in mass.items())
    integral, prev = [], 0.0
    support = sorted(mass)
    for i, s in enumerate(support):
        survival = math.fsum(mass[u] for u in support[i:])
        integral.append((s - prev) * survival)
        prev = s
    rhs = math.fsum(integral)
    return abs(expectation - rhs) <= tol * max(1.0, abs(expectation))


def stirling_gamma_check(t_grid: Sequence[int], rel_tol: float = 1e-8) -> bool:
    """For each even t: (t/2)! <= e^{1/(6t)} sqrt(pi t) (t/(2e))^{t/2}, and the
    Gamma integral of x^{t/2-1} e^{-x} matches (t/2-1)! by quadrature."""
    for t in t_grid:
        if t < 2 or t % 2:
            raise ValueError(f"t must be even and >= 2, got {t}")
        k = t // 2
        log_stirling = 1.0 / (6 * t) + 0.5 * math.log(math.pi * t) + k * (math.log(t) - math.log(2) - 1)
        if math.lgamma(k + 1) > log_stirling:
            return False
        quad, _ = integrate.quad(lambda x: x ** (k - 1) * math.exp(-x), 0, math.inf, epsabs=0, epsrel=1e-12)
        exact = math.factorial(k - 1)
        if abs(quad - exact) > rel_tol * exact:
            return False
    return True


def chernoff_consistency_check(m_grid: Sequence[int], t_grid: Sequence[int] = (2, 4, 6), rel_tol: float = 1e-6) -> bool:
    """Check 2 int_0^inf exp(-x^{2/t}/(2m)) dx = 2 (t/2) (2m)^{t/2} int_0^inf x^{t/2-1} e^{-x} dx.

    The left side is integrated after substituting x = s^t (a different
    substitution from the one being checked) so quadrature sees a Gaussian tail.
    """
    for m in m_grid:
        for t in t_grid:
            lhs, _ = integrate.quad(
                lambda s: t * s ** (t - 1) * math.exp(-s * s / (2 * m)), 0, math.inf, epsabs=0, epsrel=1e-12
            )
            lhs *= 2
            gamma_int, _ = integrate.quad(
                lambda x: x ** (t / 2 - 1) * math.exp(-x), 0, math.inf, epsabs=0, epsrel=1e-12
            )
            rhs = 2 * (t / 2) * (2 * m) ** (t / 2) * gamma_int
            if abs(lhs - rhs) > rel_tol * abs(rhs):
                return False
    return True
