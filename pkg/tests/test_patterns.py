import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

import oracles
from tagree.bounds import combined_tail_bound
from tagree.patterns import (
    InsufficientIndependence,
    PatternInstance,
    count_subsequence_occurrences,
    count_window_occurrences,
    indicator_order,
    letter_probabilities,
    letters_from_coeffs,
    match_probability,
    simulate_strings,
    window_count_bound,
    window_counts_from_letters,
    window_tail_report,
)
from tagree.sampler import iter_all_seeds, trial_coefficients


class TestCounting:
    def test_window_examples(self):
        assert count_window_occurrences("aaaa", "aa") == 3
        assert count_window_occurrences("ab", "abc") == 0
        assert count_window_occurrences("ababa", "aba") == 2

    def test_subsequence_examples(self):
        assert count_subsequence_occurrences("aaaa", "aa") == 6
        assert count_subsequence_occurrences("abcab", "b") == 2
        assert count_subsequence_occurrences("abab", "ab") == oracles.brute_subsequences("abab", "ab") == 3

    def test_subsequence_matches_brute_force_small(self):
        for n in range(0, 8):
            for s in itertools.product("ab", repeat=n):
                for d in range(1, 4):
                    for w in itertools.product("ab", repeat=d):
                        assert count_subsequence_occurrences(s, w) == oracles.brute_subsequences(s, w)

    def test_window_counts_vectorized(self):
        rng = np.random.default_rng(2)
        letters = rng.integers(0, 3, size=(200, 25))
        for word in ([0], [1, 2], [0, 0, 1]):
            got = window_counts_from_letters(letters, word)
            want = [count_window_occurrences(row.tolist(), word) for row in letters]
            assert got.tolist() == want


class TestInstance:
    def test_validation(self):
        with pytest.raises(ValueError):
            PatternInstance(2, "abc", 10)
        with pytest.raises(ValueError):
            PatternInstance(2, "aaaa", 3)
        with pytest.raises(ValueError):
            PatternInstance(1, "a", 3)

    def test_indicator_order(self):
        assert indicator_order(8, 2) == 4
        assert indicator_order(9, 2) == 4
        assert indicator_order(6, 1) == 6
        assert indicator_order(12, 5) == 2
        with pytest.raises(InsufficientIndependence, match="insufficient independence order"):
            indicator_order(5, 3)

    def test_letter_probabilities(self):
        probs = letter_probabilities(2, 61)
        assert probs == [Fraction(31, 61), Fraction(30, 61)]
        assert sum(letter_probabilities(5, 23)) == 1


class TestWindowBound:
    def test_d1_reduces_to_theorem(self):
        p = PatternInstance(2, "a", 50)
        assert window_count_bound(p, 10.0, 4).value == combined_tail_bound(50, 4, 1, 10.0).value

    def test_d2_t8(self):
        p = PatternInstance(2, "ab", 60)
        assert window_count_bound(p, 15.0, 8).value == combined_tail_bound(59, 4, 2, 15.0).value

    def test_letter_graph_composition(self):
        p = PatternInstance(2, "ab", 60, letter_chi=3)
        assert window_count_bound(p, 15.0, 8).value == combined_tail_bound(59, 4, 6, 15.0).value

    def test_insufficient(self):
        with pytest.raises(InsufficientIndependence):
            window_count_bound(PatternInstance(2, "abb", 30), 5.0, 4)


def _all_letter_strings(prime, t, n, alphabet):
    return np.concatenate([letters_from_coeffs(c, n, alphabet, prime) for c in iter_all_seeds(prime, t)])


class TestExhaustiveOracles:
    def test_window_indicators_are_floor_t_over_d_wise(self):
        # letters 4-wise independent, d = 2: non-overlapping windows give 2-wise independent indicators
        prime, t, n, word = 7, 4, 7, [0, 1]
        letters = _all_letter_strings(prime, t, n, 2)
        total = letters.shape[0]
        ind = np.stack([(letters[:, i] == word[0]) & (letters[:, i + 1] == word[1]) for i in range(n - 1)], axis=1)
        pm = Fraction(int(ind[:, 0].sum()), total)
        for i, j in itertools.combinations(range(n - 1), 2):
            if j - i < 2:
                continue
            joint = Counter(zip(ind[:, i].tolist(), ind[:, j].tolist()))
            assert len(joint) == 4
            for (x, y), c in joint.items():
                px = pm if x else 1 - pm
                py = pm if y else 1 - pm
                assert Fraction(c, total) == px * py

    def test_three_disjoint_windows_jointly_independent(self):
        # 6-wise letters, d = 2: any three disjoint windows are jointly independent
        prime, t, n = 7, 6, 7
        p = PatternInstance(2, "ab", n)
        pm = match_probability(p, prime)
        letters = _all_letter_strings(prime, t, n, 2)
        ind = [(letters[:, i] == 0) & (letters[:, i + 1] == 1) for i in (0, 2, 4)]
        code = sum(ind[k].astype(np.int64) << k for k in range(3))
        counts = np.bincount(code, minlength=8)
        for c in range(8):
            expect = Fraction(1)
            for k in range(3):
                expect *= pm if c >> k & 1 else 1 - pm
            assert Fraction(int(counts[c]), len(code)) == expect

    def test_expected_window_count(self):
        prime, t, n = 7, 4, 7
        for word in ("ab", "aa", "b"):
            p = PatternInstance(2, word, n)
            letters = _all_letter_strings(prime, t, n, 2)
            counts = window_counts_from_letters(letters, p.codes)
            assert Fraction(int(counts.sum()), len(counts)) == p.num_windows * match_probability(p, prime)


class TestSimulation:
    def test_deterministic_and_thread_stable(self):
        p = PatternInstance(2, "ab", 60)
        a = simulate_strings(p, 8, 20000, 3)
        b = simulate_strings(p, 8, 20000, 3, threads=3)
        assert np.array_equal(a, b)

    def test_subsequence_mode(self):
        p = PatternInstance(2, "ab", 12)
        sub = simulate_strings(p, 4, 50, 1, mode="subsequence")
        letters = letters_from_coeffs(
            trial_coefficients(1, 0, 50, 4, p.default_prime(4)),
            12,
            2,
            p.default_prime(4),
        )
        assert [int(x) for x in sub] == [oracles.brute_subsequences(row.tolist(), [0, 1]) for row in letters]

    def test_tail_report(self):
        p = PatternInstance(2, "ab", 60)
        rep = window_tail_report(p, 8, [0, 5, 10, 20], 5000, 0)
        assert not rep.violations
        assert rep.rows[0].empirical == 1.0
        for r in rep.rows[1:]:
            assert r.bound_refined <= r.bound_theorem
