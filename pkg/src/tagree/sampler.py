"""Exactly t-wise independent polynomial families and ensembles that t-agree
with a dependency graph.

A family of degree t-1 polynomials over GF(prime) with uniformly random
coefficients, evaluated at the distinct points 0..m-1, gives m exactly
t-wise independent values.  One coefficient vector is one joint sample.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .graph import Coloring, DependencyGraph, greedy_coloring, is_independent_set, make_clique_blocks

# per-trial coefficients are generated in fixed chunks so that trial i's seed
# depends only on (master_seed, i), never on the thread layout
TRIAL_CHUNK = 4096
DEFAULT_BUDGET = 10**7


class NotExhaustivelyCheckable(RuntimeError):
    """The seed space exceeds the enumeration budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % f for f in range(3, math.isqrt(n) + 1, 2))


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class TwiseFamily:
    prime: int
    t: int
    m: int
    coeffs: tuple

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"modulus {self.prime} is not prime")
        if self.prime > kernels.MAX_PRIME:
            raise ValueError(f"prime must be < 2**31, got {self.prime}")
        if self.t < 1 or self.m < 1:
            raise ValueError("t and m must be >= 1")
        # t evaluation points must be distinct field elements
        if self.prime < max(self.m, self.t):
            raise ValueError(f"prime {self.prime} < max(m, t) = {max(self.m, self.t)}")
        if len(self.coeffs) != self.t:
            raise ValueError(f"need {self.t} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.prime for c in self.coeffs):
            raise ValueError("coefficients must lie in [0, prime)")

    def with_coeffs(self, coeffs) -> "TwiseFamily":
        return TwiseFamily(self.prime, self.t, self.m, tuple(int(c) for c in coeffs))

    def field_value(self, i: int) -> int:
        if not 0 <= i < self.m:
            raise IndexError(f"index {i} out of range for m={self.m}")
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * i + c) % self.prime
        return acc

    def field_values(self) -> list[int]:
        return [self.field_value(i) for i in range(self.m)]

    @property
    def seed_space(self) -> int:
        return self.prime**self.t


def new_family(m: int, t: int, rng_seed: int, prime: int | None = None) -> TwiseFamily:
    """Family on m variables with a coefficient vector drawn from rng_seed.

    The default modulus is the smallest prime >= max(m, 2t).
    """
    if m < 1 or t < 1:
        raise ValueError("m and t must be >= 1")
    if prime is None:
        prime = next_prime(max(m, 2 * t))
    coeffs = trial_coefficients(rng_seed, 0, 1, t, prime)[0]
    return TwiseFamily(prime, t, m, tuple(int(c) for c in coeffs))


def sample_uniform(f: TwiseFamily, i: int) -> float:
    return f.field_value(i) / f.prime


def sample_bernoulli(f: TwiseFamily, i: int, p_num: int) -> int:
    """1 iff the field value at i is below p_num; success probability p_num/prime."""
    if not 0 <= p_num <= f.prime:
        raise ValueError(f"p_num must be in [0, {f.prime}], got {p_num}")
    return int(f.field_value(i) < p_num)


def closest_p_num(p: float, prime: int) -> tuple[int, float]:
    """Nearest representable bias p_num/prime to p, and the rounding error."""
    p_num = min(max(int(round(p * prime)), 0), prime)
    return p_num, p_num / prime - p


def trial_coefficients(master_seed: int, start: int, stop: int, t: int, prime: int) -> np.ndarray:
    """Coefficient rows for trials start..stop-1, shape (stop-start, t).

    Row i is a pure function of (master_seed, i): each chunk of TRIAL_CHUNK
    rows comes from a Philox stream keyed by master_seed at counter = chunk index.
    """
    key = int(master_seed) % 2**64
    rows = []
    first, last = start // TRIAL_CHUNK, (stop - 1) // TRIAL_CHUNK
    for chunk in range(first, last + 1):
        rng = np.random.Generator(np.random.Philox(key=key, counter=chunk))
        block = rng.integers(0, prime, size=(TRIAL_CHUNK, t), dtype=np.int64)
        lo = max(start - chunk * TRIAL_CHUNK, 0)
        hi = min(stop - chunk * TRIAL_CHUNK, TRIAL_CHUNK)
        rows.append(block[lo:hi])
    if not rows:
        return np.empty((0, t), dtype=np.int64)
    return np.concatenate(rows)


def iter_all_seeds(prime: int, t: int, chunk: int = 1 << 16):
    """Yield every coefficient vector of GF(prime)^t, in lexicographic blocks."""
    total = prime**t
    powers = prime ** np.arange(t, dtype=np.int64)
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        yield (codes[:, None] // powers) % prime


@dataclass(frozen=True)
class DependentEnsemble:
    """Vertex v of ``graph`` reads family index ``vertex_map[v][0]``, flipped
    (value -> top - value) when ``vertex_map[v][1]`` is true.

    ``p_num`` selects Bernoulli values [field value < p_num]; None keeps the
    raw field value, i.e. uniform values on the grid {0, 1/prime, ...}.
    """

    graph: DependencyGraph
    family: TwiseFamily
    vertex_map: tuple
    p_num: int | None = None
    descriptor: dict = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if len(self.vertex_map) != self.graph.n:
            raise ValueError("vertex_map must cover every vertex")
        for idx, _ in self.vertex_map:
            if not 0 <= idx < self.family.m:
                raise ValueError(f"family index {idx} out of range")
        if self.p_num is not None and not 0 <= self.p_num <= self.family.prime:
            raise ValueError(f"p_num must be in [0, {self.family.prime}]")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def bernoulli(self) -> bool:
        return self.p_num is not None

    @property
    def denominator(self) -> int:
        """Vertex values are integers divided by this."""
        return 1 if self.bernoulli else self.family.prime

    @property
    def threshold(self) -> int:
        return self.p_num if self.bernoulli else -1

    def weights(self) -> tuple[np.ndarray, np.ndarray]:
        id_w = np.zeros(self.family.m, dtype=np.int64)
        flip_w = np.zeros(self.family.m, dtype=np.int64)
        for idx, flip in self.vertex_map:
            (flip_w if flip else id_w)[idx] += 1
        return id_w, flip_w

    def vertex_mean(self, v: int) -> Fraction:
        q = self.family.prime
        if self.bernoulli:
            m = Fraction(self.p_num, q)
            return 1 - m if self.vertex_map[v][1] else m
        # uniform on {0..q-1}/q; flipped: {1..q}/q
        return Fraction(q + 1 if self.vertex_map[v][1] else q - 1, 2 * q)

    def mean(self) -> Fraction:
        return sum((self.vertex_mean(v) for v in range(self.n)), Fraction(0))

    def coloring(self) -> Coloring:
        return greedy_coloring(self.graph)

    def vertex_values(self, coeffs: np.ndarray) -> np.ndarray:
        """Integer numerators of every vertex value, shape (rows, n)."""
        vals = kernels.poly_values(coeffs, self.family.m, self.family.prime)
        if self.bernoulli:
            vals = (vals < self.p_num).astype(np.int64)
        idx = np.array([i for i, _ in self.vertex_map], dtype=np.int64)
        flip = np.array([f for _, f in self.vertex_map], dtype=bool)
        out = vals[:, idx]
        out[:, flip] = self.denominator - out[:, flip]
        return out

    def sums(self, coeffs: np.ndarray) -> np.ndarray:
        """Numerators of X = sum of vertex values, one per coefficient row."""
        id_w, flip_w = self.weights()
        return kernels.weighted_sums(coeffs, self.family.prime, self.threshold, id_w, flip_w)


def make_clique_ensemble(
    num_blocks: int,
    block_size: int,
    t: int,
    p_num: int | None,
    rng_seed: int,
    flips: str = "none",
    prime: int | None = None,
) -> DependentEnsemble:
    """Every vertex of clique b reads family value b; ``alternating`` flips
    odd positions within each block."""
    if flips not in ("none", "alternating"):
        raise ValueError(f"flips must be 'none' or 'alternating', got {flips!r}")
    g = make_clique_blocks(num_blocks, block_size)
    fam = new_family(num_blocks, t, rng_seed, prime=prime)
    vmap = tuple(
        (b, flips == "alternating" and pos % 2 == 1)
        for b in range(num_blocks)
        for pos in range(block_size)
    )
    desc = {
        "blocks": num_blocks,
        "block_size": block_size,
        "t": t,
        "prime": fam.prime,
        "p_num": "uniform" if p_num is None else p_num,
        "flips": flips,
    }
    return DependentEnsemble(g, fam, vmap, p_num, descriptor=desc)


def family_ensemble(f: TwiseFamily, p_num: int | None = None) -> DependentEnsemble:
    """The family's own m variables on an edgeless graph."""
    g = DependencyGraph.from_edges(f.m, [])
    return DependentEnsemble(g, f, tuple((i, False) for i in range(f.m)), p_num)


def draw_sum(e: DependentEnsemble, rng_seed: int) -> Fraction:
    """X for a fresh family seed derived from rng_seed."""
    coeffs = trial_coefficients(rng_seed, 0, 1, e.family.t, e.family.prime)
    return Fraction(int(e.sums(coeffs)[0]), e.denominator)


def simulate_sums(e: DependentEnsemble, trials: int, master_seed: int, threads: int = 1) -> np.ndarray:
    """Sum numerators for trials 0..trials-1; identical for any thread count."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    t, prime = e.family.t, e.family.prime
    step = TRIAL_CHUNK * 4
    spans = [(lo, min(lo + step, trials)) for lo in range(0, trials, step)]

    def work(span):
        return e.sums(trial_coefficients(master_seed, span[0], span[1], t, prime))

    if threads <= 1:
        parts = [work(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, spans))
    return np.concatenate(parts)


def _check_budget(e: DependentEnsemble, budget: int) -> None:
    if e.family.seed_space > budget:
        raise NotExhaustivelyCheckable(
            f"seed space {e.family.prime}^{e.family.t} = {e.family.seed_space} exceeds budget {budget}"
        )


def exact_sum_counts(e: DependentEnsemble, budget: int = DEFAULT_BUDGET) -> dict[int, int]:
    """Number of seeds giving each value of the sum numerator, over the full seed space."""
    _check_budget(e, budget)
    top = e.n * e.denominator
    counts = np.zeros(top + 1, dtype=np.int64)
    for coeffs in iter_all_seeds(e.family.prime, e.family.t):
        counts += np.bincount(e.sums(coeffs), minlength=top + 1)
    return {int(v): int(c) for v, c in enumerate(counts) if c}


def verify_t_agreement(e: DependentEnsemble, max_check_size: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Exhaustively check that every independent set S with
    |S| <= min(t, max_check_size) has a joint law equal to the product of marginals.

    Raises NotExhaustivelyCheckable when the seed space exceeds ``budget``.
    """
    _check_budget(e, budget)
    size_cap = min(e.family.t, max_check_size)
    subsets = [
        s
        for r in range(1, size_cap + 1)
        for s in itertools.combinations(range(e.n), r)
        if is_independent_set(e.graph, s)
    ]
    if not subsets:
        return True
    support = e.denominator + 1
    total = e.family.seed_space
    joint = {s: np.zeros(support ** len(s), dtype=np.int64) for s in subsets}
    for coeffs in iter_all_seeds(e.family.prime, e.family.t):
        vals = e.vertex_values(coeffs)
        for s in subsets:
            code = np.zeros(vals.shape[0], dtype=np.int64)
            for v in s:
                code = code * support + vals[:, v]
            joint[s] += np.bincount(code, minlength=support ** len(s))
    for s, counts in joint.items():
        r = len(s)
        table = counts.reshape((support,) * r).astype(object)
        margins = [table.sum(axis=tuple(a for a in range(r) if a != ax)) for ax in range(r)]
        product = margins[0]
        for mg in margins[1:]:
            product = np.multiply.outer(product, mg)
        # P(joint) = prod P(marginals)  <=>  count * total^(r-1) = prod counts
        if not np.array_equal(table * total ** (r - 1), product):
            return False
    return True


DESCRIPTOR_KEYS = ("blocks", "block_size", "t", "prime", "p_num", "flips", "master_seed")


def format_descriptor(e: DependentEnsemble, master_seed: int) -> str:
    if e.descriptor is None:
        raise ValueError("only clique ensembles carry a descriptor")
    d = dict(e.descriptor, master_seed=master_seed)
    return "".join(f"{k}={d[k]}\n" for k in DESCRIPTOR_KEYS)


def parse_descriptor(text: str) -> dict:
    """Parse key=value lines (a leading '#' is ignored) into make_clique_ensemble arguments."""
    raw = {}
    for line in text.splitlines():
        line = line.strip().lstrip("#").strip()
        if not line or "=" not in line:
            continue
        k, v = line.split("=", 1)
        raw[k.strip()] = v.strip()
    missing = [k for k in DESCRIPTOR_KEYS if k not in raw]
    if missing:
        raise ValueError(f"descriptor missing keys: {missing}")
    return {
        "num_blocks": int(raw["blocks"]),
        "block_size": int(raw["block_size"]),
        "t": int(raw["t"]),
        "prime": int(raw["prime"]),
        "p_num": None if raw["p_num"] == "uniform" else int(raw["p_num"]),
        "flips": raw["flips"],
        "rng_seed": int(raw["master_seed"]),
    }
