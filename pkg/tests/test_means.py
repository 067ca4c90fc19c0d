"""Mean-profit computations: benchmark anchors, oracles, coupling symmetry."""

from fractions import Fraction

import numpy as np
import pytest

from parrondo_ring import (
    ParamVector,
    PatternSpec,
    UnsupportedBoundary,
    closed_form_n3,
    full_state_mean,
    mean_for,
    mean_game_b,
    mean_mixture,
    mean_pattern,
    six_significant,
)

from conftest import random_params
from reference_tables import BENCHMARKS, PATTERNS, printed_tolerance

TORAL = ParamVector.parse("1,4/25,4/25,7/10")


def random_exact_params(rng, symmetric=False):
    vals = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(1, 30, 4), rng.integers(30, 60, 4))]
    if symmetric:
        vals[2] = vals[1]
    return ParamVector(*vals)


class TestBenchmarkAnchors:
    def test_n3_boundary_anchor(self):
        report = mean_pattern(3, TORAL, 1, 1)
        assert float(report.mu) == pytest.approx(-0.00695879, abs=5e-9)
        assert report.case_id == 1 and report.group == "dihedral"

    def test_n5_boundary_anchor(self):
        report = mean_pattern(5, ParamVector.parse("7/10,17/25,17/25,0"), 2, 2)
        assert float(report.mu) == pytest.approx(0.00944220, abs=5e-9)

    def test_n4_interior_anchor(self):
        report = mean_pattern(4, ParamVector.parse("1/10,3/5,3/5,3/4"), 1, 2)
        assert float(report.mu) == pytest.approx(0.0137926, abs=5e-8)

    def test_fair_game_is_zero(self):
        for r, s in ((1, 1), (2, 2), (3, 1)):
            report = mean_pattern(4, ParamVector(0.5, 0.5, 0.5, 0.5), r, s)
            assert abs(report.mu) < 1e-14

    def test_coupled_point_is_zero(self):
        # p0 + p3 = 1 and p1 + p2 = 1, with p1 != p2 (cyclic reduction)
        report = mean_pattern(6, ParamVector(0.3, 0.6, 0.4, 0.7), 2, 1)
        assert report.group == "cyclic"
        assert abs(report.mu) < 1e-12


class TestGameB:
    def test_closed_form_hand_value(self):
        report = mean_game_b(3, ParamVector(0.8, 0.6, 0.6, 0.3))
        assert float(report.mu) == pytest.approx(0.2 / 1.88, abs=1e-12)

    def test_absorbing_losers(self):
        report = mean_game_b(4, ParamVector(0.0, 0.3, 0.6, 0.9))
        assert report.mu == -1 and report.method == "absorbing"

    def test_absorbing_winners(self):
        report = mean_game_b(4, ParamVector(0.2, 0.3, 0.6, 1.0))
        assert report.mu == 1

    def test_fair(self):
        assert abs(mean_game_b(5, ParamVector(0.5, 0.5, 0.5, 0.5)).mu) < 1e-14

    def test_double_absorbing_rejected(self):
        with pytest.raises(UnsupportedBoundary):
            mean_game_b(4, ParamVector(0.0, 0.3, 0.6, 1.0))

    def test_exact_value(self):
        report = mean_game_b(3, TORAL)
        assert report.mu == Fraction(-1, 11)


class TestClosedFormsN3:
    def test_anchor_values(self):
        assert float(closed_form_n3(TORAL, (1, 1))) == pytest.approx(-0.00695879, abs=5e-9)
        assert float(closed_form_n3(TORAL, (2, 1))) == pytest.approx(0.00067249, abs=5e-9)

    def test_requires_symmetric_params(self):
        with pytest.raises(ValueError):
            closed_form_n3(ParamVector(0.5, 0.4, 0.3, 0.5), "B")

    def test_coupled_points_vanish(self, rng):
        # p0 + p3 = 1 with p1 = p2 forces p1 = 1/2 on the coupled locus
        for _ in range(20):
            p0 = float(rng.uniform(0.05, 0.95))
            params = ParamVector(p0, 0.5, 0.5, 1.0 - p0)
            for pattern in ("B", (1, 1), (1, 2), (2, 1)):
                assert abs(closed_form_n3(params, pattern)) < 1e-13

    def test_matches_pipeline_exactly_in_rational_mode(self, rng):
        for _ in range(25):
            params = random_exact_params(rng, symmetric=True)
            for pattern in ("B", (1, 1), (1, 2), (2, 1)):
                cf = closed_form_n3(params, pattern)
                if pattern == "B":
                    assert mean_game_b(3, params).mu == cf
                else:
                    assert mean_pattern(3, params, *pattern).mu == cf

    def test_matches_pipeline_float(self, rng):
        for _ in range(25):
            params = random_params(rng, symmetric=True)
            for pattern in ("B", (1, 1), (1, 2), (2, 1)):
                cf = float(closed_form_n3(params, pattern))
                got = (
                    mean_game_b(3, params).mu
                    if pattern == "B"
                    else mean_pattern(3, params, *pattern).mu
                )
                assert got == pytest.approx(cf, abs=1e-12)


class TestMixture:
    def test_routes_agree_exactly(self):
        params = ParamVector.parse("1/10,3/5,3/5,3/4")
        direct = mean_mixture(4, params, Fraction(1, 2))
        sub = mean_mixture(4, params, Fraction(1, 2), route="substitution")
        assert direct.mu == sub.mu

    def test_routes_agree_float(self, rng):
        for n in (3, 4, 5):
            params = random_params(rng)
            gamma = float(rng.uniform(0.1, 0.9))
            direct = mean_mixture(n, params, gamma)
            sub = mean_mixture(n, params, gamma, route="substitution")
            assert direct.mu == pytest.approx(sub.mu, abs=1e-12)

    def test_fair_mixture_zero(self):
        assert abs(mean_mixture(4, ParamVector(0.5, 0.5, 0.5, 0.5), 0.3).mu) < 1e-14

    def test_boundary_params_allowed(self):
        # the substituted probabilities are interior even when p0 = 1
        report = mean_mixture(3, TORAL, Fraction(1, 2))
        assert -1 < report.mu < 1

    def test_regression_anchor_full_state(self):
        # frozen from the unreduced full-state pipeline at first computation
        got = mean_mixture(3, TORAL.to_float(), 0.5).mu
        oracle = full_state_mean(3, TORAL.to_float(), PatternSpec.mixture(0.5))
        assert got == pytest.approx(oracle, abs=1e-13)
        assert got == pytest.approx(-0.01837740923352748, abs=1e-12)


class TestFullStateOracle:
    @pytest.mark.parametrize("n", range(3, 9))
    def test_matches_reduced_pipeline(self, n, rng):
        for symmetric in (True, False):
            params = random_params(rng, symmetric=symmetric)
            for r, s in ((1, 1), (2, 2), (1, 3)):
                oracle = full_state_mean(n, params, PatternSpec.pattern(r, s))
                got = mean_pattern(n, params, r, s).mu
                assert got == pytest.approx(oracle, abs=1e-12)

    def test_exact_match(self):
        params = ParamVector.parse("2/5,3/7,3/7,1/3")
        oracle = full_state_mean(4, params, PatternSpec.pattern(1, 2))
        assert mean_pattern(4, params, 1, 2).mu == oracle

    def test_caps_at_ten_players(self):
        with pytest.raises(ValueError):
            full_state_mean(11, ParamVector(0.5, 0.5, 0.5, 0.5), PatternSpec.pattern(1, 1))


class TestCouplingAntisymmetry:
    @pytest.mark.parametrize("n", range(3, 9))
    def test_pattern_means(self, n, rng):
        params = random_params(rng)
        coupled = params.coupled()
        for r, s in ((1, 1), (2, 1), (1, 2)):
            lhs = mean_pattern(n, params, r, s).mu
            rhs = mean_pattern(n, coupled, r, s).mu
            assert lhs == pytest.approx(-rhs, abs=1e-10)

    def test_game_b_means(self, rng):
        for n in (3, 5, 6):
            params = random_params(rng)
            lhs = mean_game_b(n, params).mu
            rhs = mean_game_b(n, params.coupled()).mu
            assert lhs == pytest.approx(-rhs, abs=1e-10)


class TestReductionInvariance:
    @pytest.mark.parametrize("n", (3, 4, 5, 6))
    def test_cyclic_and_dihedral_agree(self, n, rng):
        params = random_params(rng, symmetric=True)
        a = mean_pattern(n, params, 2, 1, group="cyclic").mu
        b = mean_pattern(n, params, 2, 1, group="dihedral").mu
        assert a == pytest.approx(b, abs=1e-12)

    def test_dihedral_rejected_for_asymmetric_params(self):
        with pytest.raises(ValueError):
            mean_pattern(4, ParamVector(0.5, 0.2, 0.3, 0.5), 1, 1, group="dihedral")


class TestModePolicy:
    def test_rational_caps_at_six_players(self):
        with pytest.raises(ValueError):
            mean_pattern(7, TORAL, 1, 1, mode="rational")

    def test_auto_mode_uses_float_above_six(self):
        report = mean_pattern(7, TORAL, 1, 1)
        assert isinstance(report.mu, float)

    def test_rational_and_float_agree(self):
        exact = mean_pattern(5, TORAL, 2, 1)
        approx = mean_pattern(5, TORAL, 2, 1, mode="float")
        assert isinstance(exact.mu, Fraction)
        assert float(exact.mu) == pytest.approx(approx.mu, abs=1e-13)


class TestSixSignificant:
    def test_formatting(self):
        assert six_significant(0.004662318899) == "0.00466232"
        assert six_significant(-0.00695878602) == "-0.00695879"
        assert six_significant(0.0154167049) == "0.0154167"
        assert six_significant(0.0) == "0.00000"

    def test_matches_printed_benchmark_rows(self):
        for table in BENCHMARKS.values():
            params = ParamVector.parse(table["params"])
            printed = table["rows"][4]
            for (r, s), text in zip(PATTERNS, printed):
                got = mean_pattern(4, params, r, s, mode="float")
                assert float(got.mu) == pytest.approx(float(text), abs=printed_tolerance(text))
