import math
from statistics import NormalDist

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from upcross.errors import NoExceedancesError, NoRunsError, ThresholdRangeError
from upcross.estimators import (STATUS_DEGENERATE_CI, STATUS_NO_UPCROSSINGS, STATUS_OK,
                                estimate_eta, estimate_eta_star, estimate_theta_via_relation,
                                eta_curve, run_length_distribution, upcrossing_counts_by_k)
from upcross.series import Fixed, TopOrderStatistic
from upcross.simulate import ProcessSpec, simulate

from . import oracle

TWO_RUNS = [0, 5, 0, 0, 5, 0, 7, 0, 0, 5, 0]
# runs of length 3 (gap index 1) and 1 (gap index 9)
LONG_RUN = [0, 0, 0, 5, 0, 5, 0, 5, 0, 0, 0, 5, 0, 0]


def _oracle_eta(x, u):
    ups = oracle.upcrossings(x, u)
    starts, lengths = oracle.runs(x, u)
    return len(starts) / len(ups), sum(y * y for y in lengths) / len(starts), sum(lengths)


class TestEstimateEta:
    def test_two_runs(self):
        assert oracle.upcrossings(TWO_RUNS, 4) == [1, 4, 6, 9]
        assert oracle.runs(TWO_RUNS, 4) == ([2, 7], [2, 1])
        e = estimate_eta(TWO_RUNS, Fixed(4))
        assert e.eta_hat == 0.5 and e.sigma2_hat == 2.5
        assert (e.n_upcrossings, e.n_run_starts, e.n_run_upcrossings) == (4, 2, 3)
        assert e.status == STATUS_OK and e.ci is None

    def test_isolated_upcrossings(self):
        x = [0, 0, 0, 5, 0, 0, 0, 5, 0, 0, 0, 5, 0]
        e = estimate_eta(x, Fixed(4), ci_level=0.95)
        assert e.eta_hat == 1.0 and e.sigma2_hat == 1.0
        assert e.ci.degenerate and e.ci.lower == e.ci.upper == 1.0
        assert e.status == STATUS_DEGENERATE_CI

    def test_boundary_run_gives_zero(self):
        e = estimate_eta([0, 5, 0, 5, 0], Fixed(4), ci_level=0.9)
        assert e.eta_hat == 0.0 and e.sigma2_hat == 0.0
        assert e.ci.degenerate

    def test_no_upcrossings_is_a_status(self):
        e = estimate_eta([1.0] * 10, Fixed(0.5), ci_level=0.95)
        assert e.eta_hat is None and e.status == STATUS_NO_UPCROSSINGS and not e.ok

    def test_confidence_interval(self):
        eta, s2, nbar = _oracle_eta(LONG_RUN, 4)
        assert (eta, s2, nbar) == (0.5, 5.0, 4)
        z = NormalDist().inv_cdf(0.975)
        half = z * math.sqrt(eta * (eta * eta * s2 - 1) / nbar)
        e = estimate_eta(LONG_RUN, Fixed(4), ci_level=0.95)
        assert e.status == STATUS_OK and not e.ci.degenerate
        assert e.ci.lower == pytest.approx(eta - half, abs=1e-12)
        assert e.ci.upper == pytest.approx(eta + half, abs=1e-12)
        assert e.ci.level == 0.95

    def test_ci_clipped_to_unit_interval(self):
        e = estimate_eta(LONG_RUN, Fixed(4), ci_level=0.999999)
        assert 0.0 <= e.ci.lower and e.ci.upper <= 1.0

    @pytest.mark.parametrize("level", [0.0, 1.0, 1.5, -0.1])
    def test_bad_level(self, level):
        with pytest.raises(ValueError):
            estimate_eta(TWO_RUNS, Fixed(4), ci_level=level)

    def test_width_scales_with_inverse_root(self):
        # repeating the pattern keeps eta and sigma^2 but multiplies N_bar
        one = estimate_eta(LONG_RUN, Fixed(4), ci_level=0.95)
        four = estimate_eta(LONG_RUN * 4, Fixed(4), ci_level=0.95)
        assert (four.eta_hat, four.sigma2_hat) == (one.eta_hat, one.sigma2_hat)
        assert four.n_run_upcrossings == 4 * one.n_run_upcrossings
        assert four.ci.width == pytest.approx(one.ci.width / 2, rel=1e-12)


class TestEtaStar:
    def test_example(self):
        assert estimate_eta_star(TWO_RUNS, Fixed(4)) == pytest.approx(2 / 3, abs=1e-15)

    def test_single_run_of_four(self):
        x = [0, 0, 0, 5, 0, 5, 0, 5, 0, 5, 0, 0]
        assert estimate_eta_star(x, Fixed(4)) == 0.25

    def test_no_runs(self):
        with pytest.raises(NoRunsError):
            estimate_eta_star([0, 5, 0, 5, 0], Fixed(4))


class TestRunLengthDistribution:
    def test_example(self):
        d = run_length_distribution(TWO_RUNS, Fixed(4))
        assert d == {1: 0.5, 2: 0.5}
        mean = sum(k * p for k, p in d.items())
        assert mean == pytest.approx(1 / estimate_eta_star(TWO_RUNS, Fixed(4)), abs=1e-12)

    def test_all_length_one(self):
        assert run_length_distribution([0, 0, 0, 5, 0, 0, 0, 5, 0], Fixed(4)) == {1: 1.0}

    def test_no_runs(self):
        with pytest.raises(NoRunsError):
            run_length_distribution([1, 2, 3], Fixed(10))


class TestThetaRelation:
    def test_isolated(self):
        x = [0, 0, 0, 5, 0, 0, 0, 5, 0, 0, 0, 5, 5, 0]
        # 3 upcrossings, 4 exceedances, eta_hat = 1
        assert estimate_theta_via_relation(x, Fixed(4)) == pytest.approx(3 / 4)

    def test_no_exceedances(self):
        with pytest.raises(NoExceedancesError):
            estimate_theta_via_relation([1, 2, 3], Fixed(3))


class TestEtaCurve:
    def test_singleton_matches_point_estimate(self):
        x = simulate(ProcessSpec("armax", 400, seed=3))
        curve = eta_curve(x, [20], ci_level=0.95)
        assert curve.entries == [(20, estimate_eta(x, TopOrderStatistic(20), 0.95))]

    def test_default_grid_and_hint(self):
        x = simulate(ProcessSpec("iid", 101, seed=1))
        curve = eta_curve(x)
        assert curve.k == list(range(1, 26)) and curve.scale_hint == "logarithmic"

    def test_iid_small_k_is_one(self):
        # isolated upcrossings: spaced peaks over a flat baseline
        x = np.zeros(200)
        x[10::20] = np.arange(1, 11)
        curve = eta_curve(x, [1, 2, 3, 5, 8])
        assert all(e.eta_hat == 1.0 for _, e in curve.entries)

    def test_constant_series_no_upcrossings(self):
        curve = eta_curve([3.0] * 20, [1, 2, 3])
        assert [e.status for _, e in curve.entries] == [STATUS_NO_UPCROSSINGS] * 3
        assert np.isnan(curve.eta_values()).all()

    def test_thresholds_follow_order_statistics(self):
        x = simulate(ProcessSpec("ar1", 300, seed=2, r=3))
        for k, e in eta_curve(x, [1, 7, 50]).entries:
            assert e.threshold == sorted(x.values, reverse=True)[k]

    @pytest.mark.parametrize("grid, exc", [([], ValueError), ([3, 2], ValueError),
                                           ([1, 1], ValueError), ([0, 1], ThresholdRangeError),
                                           ([5, 20], ThresholdRangeError)])
    def test_bad_grid(self, grid, exc):
        with pytest.raises(exc):
            eta_curve(list(range(20)), grid)

    def test_armax_stabilises_near_half(self):
        x = simulate(ProcessSpec("armax", 5000, seed=11))
        vals = eta_curve(x, range(20, 101)).eta_values()
        assert abs(np.nanmedian(vals) - 0.5) < 0.03


class TestCountsByK:
    """The all-k difference-array path against per-k direct evaluation."""

    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 5), min_size=2, max_size=40))
    def test_matches_oracle_with_ties(self, x):
        n_up, n_start = upcrossing_counts_by_k(np.array(x, float), len(x) - 1)
        for k in range(len(x)):
            u = oracle.order_stat_threshold(x, k)
            assert n_up[k] == len(oracle.upcrossings(x, u))
            assert n_start[k] == len(oracle.runs(x, u)[0])

    def test_batch_equals_rows(self, rng):
        batch = rng.random((7, 300))
        n_up, n_start = upcrossing_counts_by_k(batch, 75)
        for row, a, b in zip(batch, n_up, n_start):
            ra, rb = upcrossing_counts_by_k(row, 75)
            assert (a == ra).all() and (b == rb).all()
            e = estimate_eta(row, TopOrderStatistic(40))
            assert (a[40], b[40]) == (e.n_upcrossings, e.n_run_starts)

    def test_k_max_range(self):
        with pytest.raises(ThresholdRangeError):
            upcrossing_counts_by_k(np.arange(5.0), 5)


class TestIdentities:
    @given(st.lists(st.integers(0, 4), min_size=4, max_size=60), st.data())
    def test_counts_and_star(self, x, data):
        k = data.draw(st.integers(1, len(x) - 1))
        spec = TopOrderStatistic(k)
        e = estimate_eta(x, spec)
        assert e.n_run_starts <= e.n_run_upcrossings <= e.n_upcrossings
        if e.ok:
            assert 0.0 <= e.eta_hat <= 1.0
        if e.n_run_starts:
            assert e.sigma2_hat >= 1.0
            star = estimate_eta_star(x, spec)
            d = run_length_distribution(x, spec)
            assert abs(sum(d.values()) - 1) <= 1e-12
            assert abs(star * sum(k * p for k, p in d.items()) - 1) <= 1e-12

    # values on a 0.01 lattice so arctan keeps them strictly ordered in floating point
    @given(st.lists(st.integers(-300, 300).map(lambda i: i / 100), min_size=5, max_size=50),
           st.data())
    def test_monotone_invariance(self, x, data):
        k = data.draw(st.integers(1, len(x) - 1))
        a = estimate_eta(x, TopOrderStatistic(k))
        b = estimate_eta(np.arctan(np.array(x)) * 1e3, TopOrderStatistic(k))
        assert (a.eta_hat, a.n_upcrossings, a.n_run_starts, a.sigma2_hat) == \
            (b.eta_hat, b.n_upcrossings, b.n_run_starts, b.sigma2_hat)
