"""Pattern occurrences in random strings whose letters come from a t-wise
independent family, and tail bounds for the window-occurrence count."""
from __future__ import annotations

import math
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .bounds import (
    BoundResult,
    bernoulli_tail_bound,
    chernoff_tail,
    combined_tail_bound,
    markov_tail_from_moment,
    refined_moment_bound,
)
from .graph import greedy_coloring, make_window_overlap_graph
from .sampler import TRIAL_CHUNK, next_prime, trial_coefficients
from .verify import ExperimentReport, TailRow, tail_threshold

LETTERS = string.ascii_lowercase


class InsufficientIndependence(ValueError):
    pass


def count_window_occurrences(s: Sequence, w: Sequence) -> int:
    """Contiguous (possibly overlapping) occurrences of w in s."""
    d = len(w)
    if d == 0 or d > len(s):
        return 0
    w = list(w)
    return sum(1 for i in range(len(s) - d + 1) if list(s[i : i + d]) == w)


def count_subsequence_occurrences(s: Sequence, w: Sequence) -> int:
    """Number of index tuples i_1 < ... < i_d with s[i_1] ... s[i_d] = w."""
    ways = [1] + [0] * len(w)
    for ch in s:
        for j in range(len(w), 0, -1):
            if w[j - 1] == ch:
                ways[j] += ways[j - 1]
    return ways[len(w)]


@dataclass(frozen=True)
class PatternInstance:
    """Word over an alphabet of the first ``alphabet_size`` lowercase letters,
    searched in a random string of length n.

    ``letter_chi`` bounds the chromatic number of the letters' own dependency
    graph (1 when the letters are t-wise independent outright).
    """

    alphabet_size: int
    word: str
    n: int
    letter_chi: int = 1

    def __post_init__(self):
        if not 2 <= self.alphabet_size <= len(LETTERS):
            raise ValueError(f"alphabet size must be in 2..{len(LETTERS)}")
        if not 1 <= len(self.word) <= self.n:
            raise ValueError("need 1 <= len(word) <= n")
        bad = set(self.word) - set(LETTERS[: self.alphabet_size])
        if bad:
            raise ValueError(f"word uses letters outside the alphabet: {''.join(sorted(bad))}")
        if self.letter_chi < 1:
            raise ValueError("letter_chi must be >= 1")

    @property
    def d(self) -> int:
        return len(self.word)

    @property
    def num_windows(self) -> int:
        return self.n - self.d + 1

    @property
    def codes(self) -> list[int]:
        return [LETTERS.index(c) for c in self.word]

    def default_prime(self, t: int) -> int:
        return next_prime(max(self.n, 2 * t))


def indicator_order(t: int, d: int) -> int:
    """Largest even order at which d-letter window indicators are independent
    on non-overlapping windows, given t-wise independent letters."""
    order = t // d
    order -= order % 2
    if order < 2:
        raise InsufficientIndependence(
            f"insufficient independence order: t={t} letters give {t // d}-wise indicators for d={d}; need >= 2"
        )
    return order


def window_chi(p: PatternInstance) -> int:
    return min(p.d * p.letter_chi, p.num_windows)


def window_count_bound(p: PatternInstance, a: float, t: int) -> BoundResult:
    """Tail bound on |W - E W| >= a for the window count W, given t-wise independent letters."""
    order = indicator_order(t, p.d)
    return combined_tail_bound(p.num_windows, order, window_chi(p), a)


def letter_probabilities(alphabet_size: int, prime: int) -> list[Fraction]:
    """Law of letter floor(y * A / prime) for y uniform on GF(prime)."""
    counts = [0] * alphabet_size
    for y in range(prime):
        counts[y * alphabet_size // prime] += 1
    return [Fraction(c, prime) for c in counts]


def match_probability(p: PatternInstance, prime: int) -> Fraction:
    probs = letter_probabilities(p.alphabet_size, prime)
    out = Fraction(1)
    for c in p.codes:
        out *= probs[c]
    return out


def letters_from_coeffs(coeffs: np.ndarray, n: int, alphabet_size: int, prime: int) -> np.ndarray:
    return kernels.poly_values(coeffs, n, prime) * alphabet_size // prime


def window_counts_from_letters(letters: np.ndarray, codes: Sequence[int]) -> np.ndarray:
    d = len(codes)
    nw = letters.shape[1] - d + 1
    hit = np.ones((letters.shape[0], nw), dtype=bool)
    for j, c in enumerate(codes):
        hit &= letters[:, j : j + nw] == c
    return hit.sum(axis=1)


def format_string(letters: Sequence[int]) -> str:
    return "".join(LETTERS[c] for c in letters)


def simulate_strings(p: PatternInstance, t: int, trials: int, master_seed: int, prime: int | None = None, threads: int = 1, mode: str = "window") -> np.ndarray:
    """Occurrence count per trial; each trial's string comes from a fresh
    t-wise independent family over the n positions."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if mode not in ("window", "subsequence"):
        raise ValueError(f"unknown mode {mode!r}")
    prime = prime or p.default_prime(t)
    codes = p.codes
    step = TRIAL_CHUNK * 4
    spans = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]

    def work(span):
        coeffs = trial_coefficients(master_seed, span[0], span[1], t, prime)
        letters = letters_from_coeffs(coeffs, p.n, p.alphabet_size, prime)
        if mode == "window":
            return window_counts_from_letters(letters, codes)
        return np.array(
            [count_subsequence_occurrences(row.tolist(), codes) for row in letters], dtype=object
        )

    if threads <= 1:
        parts = [work(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, spans))
    return np.concatenate(parts)


def window_tail_report(
    p: PatternInstance,
    t: int,
    a_grid: Sequence[float],
    trials: int,
    master_seed: int,
    prime: int | None = None,
    threads: int = 1,
    config: dict | None = None,
) -> ExperimentReport:
    """Monte Carlo tail of the window count against the window bounds."""
    order = indicator_order(t, p.d)
    prime = prime or p.default_prime(t)
    counts = simulate_strings(p, t, trials, master_seed, prime, threads)
    nw = p.num_windows
    pm = match_probability(p, prime)
    mean = nw * pm
    chi = window_chi(p)
    g = make_window_overlap_graph(p.n, p.d)
    classes = greedy_coloring(g).class_sizes
    report = ExperimentReport(dict(config or {}))
    for a in sorted(set(float(x) for x in a_grid)):
        q, num, c = tail_threshold(1, mean, a)
        hits = int(np.count_nonzero(np.abs(counts * q - num) >= c))
        f = hits / trials
        se = math.sqrt(f * (1 - f) / trials)
        if a > 0:
            theorem = combined_tail_bound(nw, order, chi, a).value
            refined = corollary = None
            # window-graph classes are only t'-wise independent when letters are
            if p.letter_chi == 1:
                refined = markov_tail_from_moment(refined_moment_bound(classes, order), order, a).value
            if p.letter_chi == 1 and 0 < pm < 1:
                pf = float(pm)
                corollary = bernoulli_tail_bound(nw, g.max_degree, order, pf, a / (pf * nw)).value
            row = TailRow(a, f, se, theorem, refined, corollary, chernoff_tail(nw, a).value)
        else:
            row = TailRow(a, f, se, math.inf, None, None, chernoff_tail(nw, 0.0).value)
        report.rows.append(row)
    return report
