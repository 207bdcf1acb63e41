import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tagree.bounds import (
    BoundResult,
    ColorClassSizes,
    bernoulli_tail_bound,
    chernoff_tail,
    combined_tail_bound,
    headline_moment_bound,
    markov_tail_from_moment,
    moment_bound_twise,
    optimize_t,
    refined_moment_bound,
)

even_t = st.integers(1, 15).map(lambda k: 2 * k)


def rel(x, y):
    return abs(float(x) - float(y)) / abs(float(y))


class TestMomentBoundTwise:
    def test_m10_t2(self):
        r = moment_bound_twise(10, 2)
        assert rel(r.value, oracles.lemma(10, 2)) < 1e-13
        assert r.value == pytest.approx(40.0910, abs=1e-4)
        # ten fair coins: exact variance 2.5
        assert 2.5 < r.value

    def test_m1_t2_two_point_distributions(self):
        r = moment_bound_twise(1, 2)
        assert r.value == pytest.approx(4.009097796728906, rel=1e-13)
        # variance of any law on {0,1}, scanned exhaustively on a fine grid, is <= 1/4
        worst = max(q * (1 - q) for q in np.linspace(0, 1, 1001))
        assert worst <= 0.25 < r.value

    def test_positive(self):
        for m in (1, 7, 1000):
            for t in (2, 4, 30):
                assert moment_bound_twise(m, t).value > 0

    @pytest.mark.parametrize("m,t", [(1, 3), (5, 0), (5, -2), (0, 2)])
    def test_rejects(self, m, t):
        with pytest.raises(ValueError):
            moment_bound_twise(m, t)


class TestChernoff:
    def test_spot(self):
        assert rel(chernoff_tail(2, 2).value, oracles.chernoff(2, 2)) < 1e-14
        assert chernoff_tail(2, 2).value == pytest.approx(0.735758, abs=1e-6)

    def test_zero_deviation(self):
        r = chernoff_tail(17, 0)
        assert r.value == 2.0 and r.vacuous and r.clamped == 1.0

    def test_monotone_to_zero(self):
        logs = [chernoff_tail(1, a).log_value for a in np.linspace(0, 50, 200)]
        assert all(x > y for x, y in zip(logs, logs[1:]))
        assert chernoff_tail(1, 50).value < 1e-300

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            chernoff_tail(3, -1)


class TestCombined:
    def test_spot(self):
        r = combined_tail_bound(100, 4, 5, 200)
        assert rel(r.value, oracles.combined(100, 4, 5, 200)) < 1e-12
        assert not r.vacuous

    def test_small(self):
        assert rel(combined_tail_bound(1, 2, 1, 10).value, oracles.combined(1, 2, 1, 10)) < 1e-12
        assert combined_tail_bound(1, 2, 1, 10).value == pytest.approx(0.10027, abs=1e-5)

    @pytest.mark.parametrize("n,t,chi", [(10, 2, 5), (200, 6, 3), (7, 10, 7)])
    def test_ratio_one(self, n, t, chi):
        r = combined_tail_bound(n, t, chi, math.sqrt(n * t * chi))
        assert r.value == pytest.approx(2 * math.sqrt(math.pi * t), rel=1e-12)
        assert r.vacuous

    def test_rejects(self):
        with pytest.raises(ValueError, match="even"):
            combined_tail_bound(10, 3, 2, 5)
        with pytest.raises(ValueError):
            combined_tail_bound(10, 2, 2, 0)
        with pytest.raises(ValueError):
            combined_tail_bound(10, 2, 11, 5)

    def test_large_t_stays_finite(self):
        r = combined_tail_bound(10**6, 400, 50, 10.0)
        assert math.isfinite(r.log_value)
        assert r.value == math.inf and r.vacuous and r.clamped == 1.0

    def test_monotone_grid(self):
        for t in (2, 4, 8):
            a_vals = [combined_tail_bound(50, t, 4, a).value for a in range(5, 200, 5)]
            assert all(x > y for x, y in zip(a_vals, a_vals[1:]))
            n_vals = [combined_tail_bound(n, t, 4, 50).value for n in range(4, 200, 7)]
            assert all(x < y for x, y in zip(n_vals, n_vals[1:]))
            c_vals = [combined_tail_bound(50, t, c, 50).value for c in range(1, 50)]
            assert all(x < y for x, y in zip(c_vals, c_vals[1:]))


class TestBernoulli:
    def test_spot(self):
        r = bernoulli_tail_bound(10000, 4, 4, 0.5, 0.2)
        assert rel(r.value, oracles.bernoulli(10000, 4, 4, 0.5, 0.2)) < 1e-12

    def test_vacuous_example(self):
        r = bernoulli_tail_bound(100, 4, 4, 0.5, 0.9)
        assert r.value == pytest.approx(6.9158, abs=1e-4)
        assert r.vacuous and r.clamped == 1.0

    def test_sides_identical(self):
        up = bernoulli_tail_bound(300, 2, 6, 0.3, 0.5, side="upper")
        lo = bernoulli_tail_bound(300, 2, 6, 0.3, 0.5, side="lower")
        assert up.value == lo.value

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_rejects_p(self, p):
        with pytest.raises(ValueError):
            bernoulli_tail_bound(100, 2, 4, p, 0.5)

    def test_rejects_odd(self):
        with pytest.raises(ValueError):
            bernoulli_tail_bound(100, 2, 5, 0.5, 0.5)

    def test_monotone_grid(self):
        base = dict(n=400, d=3, t=4, p=0.4, a=0.5)
        for key, grid in (("a", np.linspace(0.1, 2, 30)), ("p", np.linspace(0.05, 0.95, 30)), ("n", range(10, 2000, 50))):
            vals = [bernoulli_tail_bound(**dict(base, **{key: v})).value for v in grid]
            assert all(x > y for x, y in zip(vals, vals[1:])), key

    def test_matches_theorem_at_scaled_deviation(self):
        # chi <= d+1 and absolute deviation a p n turn the theorem into this bound
        n, d, t, p, a = 900, 4, 6, 0.3, 0.7
        assert bernoulli_tail_bound(n, d, t, p, a).value == pytest.approx(
            combined_tail_bound(n, t, d + 1, a * p * n).value, rel=1e-12
        )


class TestRefined:
    def test_spot(self):
        r = refined_moment_bound([3, 3, 4], 2)
        assert rel(r.value, oracles.refined([3, 3, 4], 2)) < 1e-12
        assert r.value == pytest.approx(119.697, abs=1e-3)
        h = headline_moment_bound(10, 3, 2)
        assert rel(h.value, oracles.headline(10, 3, 2)) < 1e-12
        assert r.value < h.value

    @pytest.mark.parametrize("m,t", [(1, 2), (9, 4), (100, 10)])
    def test_single_class_is_lemma(self, m, t):
        assert refined_moment_bound([m], t).value == pytest.approx(moment_bound_twise(m, t).value, rel=1e-13)

    def test_singletons(self):
        n, t = 12, 6
        expected = 2 * math.exp(1 / (6 * t)) * math.sqrt(math.pi * t) * (t / math.e) ** (t / 2) * n**t
        assert refined_moment_bound([1] * n, t).value == pytest.approx(expected, rel=1e-12)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            refined_moment_bound([], 2)
        with pytest.raises(ValueError):
            ColorClassSizes([3, 0])

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.integers(1, 60), min_size=1, max_size=12), even_t)
    def test_refined_below_headline(self, sizes, t):
        r = refined_moment_bound(sizes, t)
        h = headline_moment_bound(sum(sizes), len(sizes), t)
        assert r.log_value <= h.log_value + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 10), even_t)
    def test_equal_classes_ratio(self, size, k, t):
        r = refined_moment_bound([size] * k, t)
        h = headline_moment_bound(size * k, k, t)
        assert r.log_value - h.log_value == pytest.approx(1 / (6 * t) - t / 2, abs=1e-9)


class TestMarkov:
    def test_unit_deviation(self):
        m = moment_bound_twise(10, 4)
        assert markov_tail_from_moment(m, 4, 1.0).value == pytest.approx(m.value, rel=1e-15)

    def test_spot_vs_theorem(self):
        r = markov_tail_from_moment(refined_moment_bound([3, 3, 4], 2), 2, 200)
        assert rel(r.value, oracles.refined([3, 3, 4], 2) / 40000) < 1e-12
        c = combined_tail_bound(10, 2, 3, 200)
        assert rel(c.value, oracles.combined(10, 2, 3, 200)) < 1e-12
        assert r.value <= c.value

    def test_doubling(self):
        m = moment_bound_twise(10, 2)
        v1 = markov_tail_from_moment(m, 2, 3.0).value
        v2 = markov_tail_from_moment(m, 2, 6.0).value
        assert v1 / v2 == pytest.approx(4.0, rel=1e-13)

    def test_rejects(self):
        with pytest.raises(ValueError):
            markov_tail_from_moment(moment_bound_twise(3, 2), 2, 0)


class TestOptimizeT:
    def test_brute_force(self):
        cands = {t: oracles.combined(100, t, 5, 600) for t in (2, 4, 6, 8)}
        t_best, r = optimize_t(100, 5, 600, 8)
        assert t_best == min(cands, key=cands.get) == 8
        assert rel(r.value, cands[8]) < 1e-12

    def test_single_candidate(self):
        assert optimize_t(50, 3, 1.0, 2)[0] == 2
        assert optimize_t(50, 3, 1000.0, 3)[0] == 2

    def test_vacuous_still_returns(self):
        t, r = optimize_t(100, 5, 1.0, 10)
        assert r.vacuous
        assert t == 2

    def test_refined_variant(self):
        t, r = optimize_t(10, 3, 200, 10, jensen_refinement=[3, 3, 4])
        brute = min(
            range(2, 11, 2),
            key=lambda t: markov_tail_from_moment(refined_moment_bound([3, 3, 4], t), t, 200).log_value,
        )
        assert t == brute

    def test_rejects(self):
        with pytest.raises(ValueError):
            optimize_t(10, 2, 5, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**6), even_t, st.floats(0.5, 1e4))
def test_log_linear_consistency(n, t, a):
    chi = max(1, n // 3)
    for r in (combined_tail_bound(n, t, chi, a), moment_bound_twise(n, t), chernoff_tail(n, a)):
        if r.value not in (0.0, math.inf):
            assert r.value == pytest.approx(math.exp(r.log_value), rel=1e-12)
            assert r.value > 0
        assert r.vacuous == (r.value >= 1)
        assert r.clamped == min(r.value, 1.0)


def test_boundresult_overflow():
    r = BoundResult(1e6)
    assert r.value == math.inf and r.clamped == 1.0 and r.vacuous
