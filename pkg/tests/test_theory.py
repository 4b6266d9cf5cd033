import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixdetect.dist import GAUSSIAN, LAPLACE
from mixdetect.errors import DomainError
from mixdetect.spacing import analytic_threshold, dyadic_scales
from mixdetect.theory import (
    Regime,
    RegimePoint,
    adaptive_rate,
    check_side_conditions,
    detection_boundary,
    rho_k_n,
    rho_lower_bound,
    separation_margins,
    separation_set_member,
    threshold_ceiling,
    working_level,
)


class TestRhoLowerBound:
    def test_example(self):
        # c = 1 - 0.9^2/2 = 0.595, C(M)^2 = 0.5 + (2/3)(0.01) e^{0.0025}
        c = 0.595
        C = math.sqrt(0.5 + 0.02 / 3 * math.exp(0.0025))
        want = math.sqrt(-2 * math.log(c) / 100) * math.sqrt(1 + math.log(c) / 200) / C
        got = rho_lower_bound(100, 0.05, 0.05, 0.1)
        assert got == pytest.approx(want, rel=1e-14)
        assert got == pytest.approx(0.14297, abs=1e-4)

    def test_vanishes_as_alpha_plus_beta_to_one(self):
        assert rho_lower_bound(100, 0.5, 0.4999999, 0.1) < 1e-6

    def test_root_n_scaling(self):
        a = rho_lower_bound(10**6, 0.05, 0.1, 1.0) * math.sqrt(10**6)
        b = rho_lower_bound(4 * 10**6, 0.05, 0.1, 1.0) * math.sqrt(4 * 10**6)
        assert b == pytest.approx(a, rel=0.01)

    def test_decreases_in_M(self):
        assert rho_lower_bound(100, 0.05, 0.1, 2.0) < rho_lower_bound(100, 0.05, 0.1, 1.0)

    @pytest.mark.parametrize("beta", [0.0, 0.95, -0.1])
    def test_beta_domain(self, beta):
        with pytest.raises(DomainError):
            rho_lower_bound(100, 0.05, beta, 1.0)


class TestRhoKN:
    def test_example(self):
        assert rho_k_n(16, 100, 0.05) == pytest.approx(0.16 + (1 + math.sqrt(2.6)) / 5, rel=1e-15)
        assert rho_k_n(16, 100, 0.05) == pytest.approx(0.68249, abs=1e-5)

    @pytest.mark.parametrize("k", [0, 51])
    def test_scale_domain(self, k):
        with pytest.raises(DomainError):
            rho_k_n(k, 100, 0.1)

    def test_adaptive_rate(self):
        assert adaptive_rate(1000) == pytest.approx(math.sqrt(math.log(math.log(1000)) / 1000))


class TestWorkingLevel:
    def test_bonferroni_default(self):
        assert working_level(100, 0.05) == pytest.approx(0.05 / 6)

    def test_table_level(self):
        class T:
            alpha_n = 0.0123

        assert working_level(100, 0.05, T()) == 0.0123

    def test_ceiling(self):
        assert threshold_ceiling(100, 0.5) == pytest.approx(2 * math.sqrt(math.log(100)))


def membership_oracle(eps, sep, t, rho, grid=2048):
    """Pointwise loop over the witness grid with scalar survival calls."""
    span = t / 2 + sep + 10
    for j in range(-grid, grid + 1):
        c = t / 2 + j * span / grid
        up = (1 - eps) * GAUSSIAN.survival(t - c + eps * sep) + eps * GAUSSIAN.survival(t - c - (1 - eps) * sep)
        lo = (1 - eps) * GAUSSIAN.survival(c - eps * sep) + eps * GAUSSIAN.survival(c + (1 - eps) * sep)
        if min(up, lo) >= rho + 1e-12:
            return True
    return False


class TestSeparationSet:
    def test_vanishing_separation_excluded(self):
        n, k, beta = 1000, 64, 0.1
        a = working_level(n, 0.05)
        m = separation_set_member(0.5, 0.0, 1e-9, a, rho_k_n(k, n, beta), k, n)
        assert not m.member and m.witness is None

    def test_sup_equals_half_threshold_tail(self):
        # with no separation the best witness is c = t/2 and both sides equal P(Z > t/2)
        n, k = 1000, 64
        t = analytic_threshold(n, k, 0.01)
        up, lo = separation_margins(0.5, 0.0, t, np.array([t / 2]))
        assert up[0] == lo[0] == GAUSSIAN.survival(t / 2)

    def test_wide_separation_member(self):
        n, k = 100, 32
        a = 0.05
        t = analytic_threshold(n, k, a)
        m = separation_set_member(0.5, 0.0, 50.0, a, 0.3, k, n)
        assert m.member
        assert abs(m.witness - t / 2) < 1.0

    def test_infinite_threshold_is_empty(self):
        assert separation_set_member(0.5, 0.0, 50.0, 0.05, 1e-6, 4, 100) == (False, None)

    def test_non_dyadic_scale(self):
        with pytest.raises(DomainError):
            separation_set_member(0.5, 0.0, 5.0, 0.05, 0.1, 3, 100)

    @given(
        eps=st.floats(0.05, 0.95),
        sep=st.floats(0.1, 12.0),
        rho=st.floats(0.05, 0.6),
    )
    @settings(max_examples=25, deadline=None)
    def test_matches_loop_oracle(self, eps, sep, rho):
        n, k, a = 1000, 128, 0.05 / 9
        t = analytic_threshold(n, k, a)
        m = separation_set_member(eps, 0.0, sep, a, rho, k, n)
        assert m.member == membership_oracle(eps, sep, t, rho)
        if m.member:
            up, lo = separation_margins(eps, sep, t, m.witness)
            assert min(up, lo) >= rho + 1e-12

    def test_membership_monotone_in_rho(self):
        n, k, a = 1000, 128, 0.05 / 9
        flags = [separation_set_member(0.3, 0.0, 4.0, a, r, k, n).member for r in np.linspace(0.01, 0.6, 30)]
        assert flags == sorted(flags, reverse=True)

    def test_laplace_base(self):
        assert separation_set_member(0.5, 0.0, 50.0, 0.05, 0.3, 32, 100, base=LAPLACE).member


class TestDetectionBoundary:
    def test_dense(self):
        assert detection_boundary("dense", 0.3) == pytest.approx(0.10, abs=1e-15)

    def test_sparse_gaussian_low(self):
        assert detection_boundary("sparse_gaussian", 0.6) == pytest.approx(0.10, abs=1e-15)

    def test_sparse_gaussian_high(self):
        assert detection_boundary("sparse_gaussian", 0.84) == pytest.approx(0.36, abs=1e-15)

    def test_sparse_laplace(self):
        assert detection_boundary("sparse_laplace", 0.75) == 0.5

    def test_continuity(self):
        left = 0.75 - 0.5
        right = (1 - math.sqrt(1 - 0.75)) ** 2
        assert left == right == 0.25 == detection_boundary("sparse_gaussian", 0.75)
        below = detection_boundary("sparse_gaussian", math.nextafter(0.75, 0))
        assert abs(below - 0.25) <= 1e-15

    def test_endpoints(self):
        assert detection_boundary("dense", 0.5) == 0.0
        assert detection_boundary("sparse_laplace", 0.5 + 1e-12) == pytest.approx(0.0, abs=1e-11)

    @pytest.mark.parametrize("regime, delta", [("dense", 0.6), ("dense", 0.0), ("sparse_gaussian", 0.5), ("sparse_laplace", 1.0)])
    def test_domain(self, regime, delta):
        with pytest.raises(DomainError):
            detection_boundary(regime, delta)

    def test_unknown_regime(self):
        with pytest.raises(DomainError):
            Regime.parse("medium")

    @given(st.floats(0.5001, 0.9999))
    def test_sparse_gaussian_in_unit_interval(self, delta):
        assert 0 < detection_boundary("sparse_gaussian", delta) < 1


class TestRegimePoint:
    def test_detectable_sides(self):
        assert RegimePoint(0.3, 0.05, "dense").detectable
        assert not RegimePoint(0.3, 0.2, "dense").detectable
        assert RegimePoint(0.8, 0.9, "sparse_gaussian").detectable
        assert not RegimePoint(0.8, 0.2, "sparse_laplace").detectable

    def test_parameters(self):
        eps, sep = RegimePoint(0.6, 0.5, "sparse_gaussian").parameters(10_000)
        assert eps == pytest.approx(10_000**-0.6)
        assert sep == pytest.approx(math.sqrt(math.log(10_000)))

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            RegimePoint(0.3, 0.6, "dense")


class TestSideConditions:
    def test_power_guarantee_arithmetic(self):
        r = check_side_conditions(49, 0.05)
        assert r.power_guarantee_bound == pytest.approx(8 * math.log(4 * math.log2(24.5) / 0.05))
        assert r.power_guarantee_holds

    def test_power_guarantee_first_n(self):
        first = next(n for n in range(3, 200) if check_side_conditions(n, 0.05).power_guarantee_holds)
        assert first == 48

    def test_dense_condition_arithmetic(self):
        r = check_side_conditions(200, 0.05, M=0.1)
        want = 8.25 * math.log(4 * math.log2(100) / 0.05) / 200
        assert r.dense_upper_lhs == pytest.approx(want)
        assert r.dense_upper_rhs == pytest.approx(GAUSSIAN.survival(0.1))
        assert r.dense_upper_holds

    def test_dense_condition_skipped_without_M(self):
        r = check_side_conditions(200, 0.05)
        assert r.dense_upper_holds is None
        assert r.to_dict()["dense_upper_bound"] is None

    def test_tiny_n_reports_false(self):
        r = check_side_conditions(2, 0.05, M=0.1)
        assert not r.power_guarantee_holds and not r.dense_upper_holds
        json.dumps(r.to_dict(), allow_nan=False)

    def test_bad_M(self):
        with pytest.raises(DomainError):
            check_side_conditions(100, 0.05, M=0.0)

    def test_scales_used(self):
        assert len(dyadic_scales(107)) == 6
