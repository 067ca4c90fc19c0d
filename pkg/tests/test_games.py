"""Transition-matrix construction: entries, stochasticity, signed variant."""

from fractions import Fraction

import numpy as np
import pytest

from parrondo_ring import (
    Configuration,
    ParamVector,
    PatternSpec,
    build_game_a,
    build_game_b,
    build_game_b_signed,
    neighbor_index,
)
from parrondo_ring.games import neighbor_code

from conftest import random_params


class TestConfiguration:
    def test_int_round_trip(self):
        for n in (3, 5, 8):
            for code in range(1 << n):
                assert Configuration.from_int(n, code).to_int() == code

    def test_circular_indexing(self):
        x = Configuration(4, (1, 0, 1, 1))
        assert x.bit(0) == x.bit(4) == 1
        assert x.bit(5) == x.bit(1) == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            Configuration(2, (0, 1))
        with pytest.raises(ValueError):
            Configuration(3, (0, 1))
        with pytest.raises(ValueError):
            Configuration(3, (0, 1, 2))


class TestNeighborIndex:
    def test_all_zero(self):
        assert neighbor_index(Configuration(3, (0, 0, 0)), 1) == 0

    def test_all_one(self):
        assert neighbor_index(Configuration(3, (1, 1, 1)), 2) == 3

    def test_hand_values(self):
        x = Configuration(3, (1, 0, 0))
        assert neighbor_index(x, 1) == 0  # 2*x3 + x2
        assert neighbor_index(x, 2) == 2  # 2*x1 + x3
        assert neighbor_index(x, 3) == 1  # 2*x2 + x1

    def test_out_of_range(self):
        x = Configuration(3, (1, 0, 0))
        with pytest.raises(ValueError):
            neighbor_index(x, 0)
        with pytest.raises(ValueError):
            neighbor_index(x, 4)

    def test_matches_int_fast_path(self, rng):
        for _ in range(50):
            n = int(rng.integers(3, 9))
            code = int(rng.integers(0, 1 << n))
            x = Configuration.from_int(n, code)
            i = int(rng.integers(1, n + 1))
            assert neighbor_index(x, i) == neighbor_code(code, i - 1, n)


class TestGameB:
    def test_all_zero_row(self):
        params = ParamVector.parse("4/5,3/5,3/5,3/10")
        p = build_game_b(3, params)
        q0 = Fraction(1, 5)
        for i in range(3):
            assert p.entry(0, 1 << i) == Fraction(4, 5) / 3
        assert p.entry(0, 0) == q0

    def test_fair_params_match_game_a(self):
        pa = build_game_a(3)
        assert pa.entry(0, 0) == pytest.approx(0.5)
        for x in range(8):
            for i in range(3):
                assert pa.entry(x, x ^ (1 << i)) == pytest.approx(1 / 6)

    def test_game_a_n4(self):
        pa = build_game_a(4)
        for x in range(16):
            assert pa.entry(x, x) == pytest.approx(0.5)
            for i in range(4):
                assert pa.entry(x, x ^ (1 << i)) == pytest.approx(1 / 8)

    def test_row_sums_random_params(self, rng):
        for n in range(3, 13):
            reps = 100 if n <= 6 else 10
            for _ in range(reps):
                p = build_game_b(n, random_params(rng))
                assert np.max(np.abs(np.array(p.row_sums()) - 1.0)) < 1e-12

    def test_row_sums_exact(self, rng):
        for n in (3, 4, 5):
            num = rng.integers(1, 20, size=4)
            den = rng.integers(20, 40, size=4)
            params = ParamVector(*(Fraction(int(a), int(b)) for a, b in zip(num, den)))
            p = build_game_b(n, params)
            assert all(total == 1 for total in p.row_sums())

    def test_single_flip_support(self, rng):
        n = 5
        p = build_game_b(n, random_params(rng))
        for x in range(1 << n):
            for y in p.rows[x]:
                assert y == x or bin(x ^ y).count("1") == 1

    def test_row_sparsity(self, rng):
        n = 6
        p = build_game_b(n, random_params(rng))
        assert max(len(row) for row in p.rows) <= n + 1


class TestSignedMatrix:
    def test_all_zero_row_signed(self):
        params = ParamVector.parse("4/5,3/5,3/5,3/10")
        pdot = build_game_b_signed(3, params)
        assert pdot.entry(0, 0) == -Fraction(1, 5)
        for i in range(3):
            assert pdot.entry(0, 1 << i) == Fraction(4, 5) / 3

    def test_all_one_row_signed(self):
        params = ParamVector.parse("1,4/25,4/25,7/10")
        pdot = build_game_b_signed(3, params)
        top = 7
        assert pdot.entry(top, top) == Fraction(7, 10)
        for i in range(3):
            assert pdot.entry(top, top ^ (1 << i)) == -Fraction(3, 10) / 3

    def test_signed_game_a_rows_sum_to_zero(self):
        pdot = build_game_b_signed(4, ParamVector(0.5, 0.5, 0.5, 0.5))
        assert np.max(np.abs(np.array(pdot.row_sums()))) < 1e-15

    def test_signed_equals_p_minus_2q(self, rng):
        for n in (3, 4, 6):
            params = random_params(rng)
            p = build_game_b(n, params).to_numpy()
            pdot = build_game_b_signed(n, params).to_numpy()
            q = _q_part(n, params)
            assert np.max(np.abs(pdot - (p - 2 * q))) < 1e-15

    def test_row_sum_difference_is_twice_q(self, rng):
        n = 5
        params = random_params(rng)
        p = build_game_b(n, params)
        pdot = build_game_b_signed(n, params)
        q = _q_part(n, params)
        diff = np.array(p.row_sums()) - np.array(pdot.row_sums())
        assert np.max(np.abs(diff - 2 * q.sum(axis=1))) < 1e-14

    def test_not_stochastic_flag(self):
        pdot = build_game_b_signed(3, ParamVector(0.4, 0.3, 0.2, 0.1))
        assert not pdot.stochastic


def _q_part(n, params):
    """Independent construction of the q-weighted entries of the game-B matrix."""
    q = [1.0 - v for v in params.as_floats()]
    out = np.zeros((1 << n, 1 << n))
    for x in range(1 << n):
        for j in range(n):
            m = neighbor_code(x, j, n)
            if (x >> j) & 1 == 0:
                out[x, x] += q[m] / n
            else:
                out[x, x ^ (1 << j)] += q[m] / n
    return out


class TestParamVector:
    def test_parse_fractions_forces_exact(self):
        params = ParamVector.parse("1,4/25,4/25,7/10")
        assert params.exact
        assert params.p1 == Fraction(4, 25)

    def test_parse_three_values_implies_p2(self):
        params = ParamVector.parse("0.3,0.4,0.9")
        assert params.p2 == params.p1 == 0.4

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            ParamVector(0.5, 1.2, 0.5, 0.5)
        with pytest.raises(ValueError):
            ParamVector.parse("-0.1,0.5,0.5,0.5")

    def test_rejects_mixed_representations(self):
        with pytest.raises(ValueError):
            ParamVector(Fraction(1, 2), 0.5, 0.5, 0.5)

    def test_complement_exactness(self):
        params = ParamVector.parse("1/3,2/7,2/7,9/11")
        for m in range(4):
            assert params.p(m) + params.q(m) == 1

    def test_coupled(self):
        params = ParamVector(0.1, 0.2, 0.3, 0.4)
        assert params.coupled().as_floats() == (0.6, 0.7, 0.8, 0.9)

    def test_mixed_substitution(self):
        params = ParamVector.parse("1/10,3/5,3/5,3/4")
        mixed = params.mixed(Fraction(1, 2))
        assert mixed.p0 == Fraction(1, 4) + Fraction(1, 20)
        assert all(0 < p < 1 for p in mixed.as_tuple())


class TestPatternSpec:
    def test_pattern_validation(self):
        with pytest.raises(ValueError):
            PatternSpec.pattern(0, 1)
        with pytest.raises(ValueError):
            PatternSpec.pattern(1, 0)

    def test_mixture_validation(self):
        with pytest.raises(ValueError):
            PatternSpec.mixture(0.0)
        with pytest.raises(ValueError):
            PatternSpec.mixture(1)

    def test_labels(self):
        assert PatternSpec.game_b().label() == "B"
        assert PatternSpec.pattern(2, 1).label() == "[2,1]"
