import math

import numpy as np
import pytest
from scipy import stats

from mixdetect.baselines import (
    P_CLIP,
    BaselineKind,
    BaselineTable,
    calibrate_baseline,
    clip_audit,
    hc_statistic,
    ks_statistic,
    run_baseline,
)
from mixdetect.dist import GAUSSIAN, LAPLACE
from mixdetect.errors import ContractError, DomainError
from mixdetect.procedures import dumps_table, loads_table
from mixdetect.streams import stream

from .conftest import cached_table


def hc_oracle(sample, sf):
    """Loop form of the HC statistic over the ascending p-values."""
    p = sorted(min(max(sf(x), P_CLIP), 1 - P_CLIP) for x in sample)
    n = len(p)
    return max(math.sqrt(n) * ((i + 1) / n - pi) / math.sqrt(pi * (1 - pi)) for i, pi in enumerate(p))


class TestKolmogorovSmirnov:
    @pytest.mark.parametrize("seed", range(5))
    def test_known_matches_scipy(self, seed):
        x = np.random.default_rng(seed).normal(0.2, 1.1, size=150)
        want = stats.kstest(x, "norm").statistic * math.sqrt(150)
        assert ks_statistic(x) == pytest.approx(want, rel=1e-12)

    def test_laplace_matches_scipy(self):
        x = np.random.default_rng(1).laplace(size=80)
        want = stats.kstest(x, "laplace").statistic * math.sqrt(80)
        assert ks_statistic(x, LAPLACE) == pytest.approx(want, rel=1e-12)

    def test_plugin_matches_scipy_on_centred_data(self):
        x = np.random.default_rng(2).normal(3.0, 1.0, size=120)
        want = stats.kstest(x - x.mean(), "norm").statistic * math.sqrt(120)
        assert ks_statistic(x, plugin=True) == pytest.approx(want, rel=1e-10)

    def test_known_threshold_near_asymptotic(self):
        assert cached_table("ks_known", 100).threshold == pytest.approx(1.34, abs=0.02)

    def test_plugin_threshold_is_lilliefors_sized(self):
        # estimating the mean shrinks the statistic well below the known-mean quantile
        assert cached_table("ks_plugin", 100).threshold < cached_table("ks_known", 100).threshold - 0.2


class TestHigherCriticism:
    @pytest.mark.parametrize("seed", range(3))
    def test_known_matches_oracle(self, seed):
        x = np.random.default_rng(seed).normal(size=60)
        assert hc_statistic(x) == pytest.approx(hc_oracle(x, GAUSSIAN.survival), rel=1e-12)

    def test_plugin_matches_oracle(self):
        x = np.random.default_rng(4).laplace(5.0, 1.0, size=60)
        m = x.mean()
        assert hc_statistic(x, LAPLACE, plugin=True) == pytest.approx(
            hc_oracle(x, lambda v: LAPLACE.survival(v - m)), rel=1e-10
        )

    def test_literal_matches_oracle(self):
        x = np.random.default_rng(5).normal(1.0, 1.0, size=60)
        m = x.mean()
        got = hc_statistic(x, plugin=True, literal=True)
        assert got == pytest.approx(hc_oracle(x, lambda v: GAUSSIAN.survival(v + m)), rel=1e-10)

    def test_literal_is_not_location_free(self):
        x = np.random.default_rng(6).normal(size=100)
        assert hc_statistic(x, plugin=True, literal=True) != pytest.approx(
            hc_statistic(x + 3.0, plugin=True, literal=True), rel=1e-3
        )

    def test_plugin_threshold_ignores_null_location(self):
        a = calibrate_baseline("hc_plugin", 100, budget=20_000, seed=3, location=0.0)
        b = calibrate_baseline("hc_plugin", 100, budget=20_000, seed=3, location=7.0)
        assert a.threshold == pytest.approx(b.threshold, rel=1e-9)

    def test_clip_audit_counts_extreme_points(self):
        clip_audit.reset()
        x = np.r_[np.zeros(49), 40.0]
        hc_statistic(x)
        assert clip_audit.events == 1
        clip_audit.reset()
        hc_statistic(np.linspace(-1, 1, 50))
        assert clip_audit.events == 0

    def test_detects_sparse_bump(self):
        t = cached_table("hc_known", 100)
        x = np.r_[GAUSSIAN.draw(stream(7), 95), np.full(5, 4.0)]
        assert run_baseline(x, t).reject


class TestTables:
    @pytest.mark.parametrize("kind", ["hc_known", "hc-plugin", "KS_KNOWN", BaselineKind.KS_PLUGIN])
    def test_parse(self, kind):
        assert isinstance(BaselineKind.parse(kind), BaselineKind)

    def test_parse_unknown(self):
        with pytest.raises(DomainError):
            BaselineKind.parse("anderson")

    @pytest.mark.parametrize("name", ["hc_known", "hc_plugin", "ks_known", "ks_plugin"])
    def test_json_round_trip(self, name):
        t = cached_table(name, 100)
        back = loads_table(dumps_table(t))
        assert isinstance(back, BaselineTable) and back == t

    def test_literal_flag_only_for_hc_plugin(self):
        assert not calibrate_baseline("ks_plugin", 30, budget=1000, literal=True).literal
        assert calibrate_baseline("hc_plugin", 30, budget=1000, literal=True).literal

    def test_size_mismatch(self):
        with pytest.raises(ContractError):
            run_baseline(np.zeros(5), cached_table("ks_known", 100))
