import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from manifoldcast import (
    DenoisedSet,
    Diagnostics,
    ForecastConfig,
    InvalidArgumentError,
    SameConfig,
    TimeSeries,
    embed,
    epanechnikov,
    knn_weights,
    one_step_forecast,
    predict,
)


def history(points, times=None):
    points = np.asarray(points, dtype=float)
    if times is None:
        times = np.arange(1, len(points) + 1)
    return DenoisedSet(points, times)


class TestKnnWeights:
    def test_equidistant_points_weights_follow_discount(self):
        # all kernel factors tie at the support boundary; the fallback keeps
        # the recency discount over the k nearest
        pts = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
        diag = Diagnostics()
        w = knn_weights(np.zeros(2), history(pts), query_time=5, k=3, tau=2.0, diagnostics=diag)
        assert diag.counts.get("knn_uniform_fallback") == 1
        positive = w[w > 0]
        assert positive.size == 3
        expected = np.exp(-(5 - np.array([1, 2, 3])) / 2.0)
        np.testing.assert_allclose(w[:3], expected, rtol=1e-12)

    def test_no_discount_distances_123(self):
        pts = [[1.0], [2.0], [3.0]]
        w = knn_weights(np.zeros(1), history(pts), query_time=4, k=2, tau=np.inf)
        np.testing.assert_allclose(w, [0.5625, 0.0, 0.0], atol=1e-15)

    def test_beyond_kth_neighbor_zero(self):
        pts = [[1.0], [2.0], [10.0]]
        w = knn_weights(np.zeros(1), history(pts), query_time=4, k=2, tau=np.inf)
        assert w[2] == 0.0

    def test_coincident_kth_neighbor_uniform_fallback(self):
        pts = [[0.0], [0.0], [5.0]]
        diag = Diagnostics()
        w = knn_weights(np.zeros(1), history(pts), query_time=4, k=2, tau=np.inf,
                        diagnostics=diag)
        assert diag.counts.get("knn_uniform_fallback") == 1
        np.testing.assert_allclose(w, [1.0, 1.0, 0.0])

    def test_k_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            knn_weights(np.zeros(1), history([[1.0]]), query_time=3, k=2, tau=1.0)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_nonnegative_and_normalizable(self, seed):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((10, 3))
        q = rng.standard_normal(3)
        k = int(rng.integers(1, 10))
        w = knn_weights(q, history(pts), query_time=11, k=k, tau=5.0)
        assert np.all(w >= 0)
        assert w.sum() > 0
        np.testing.assert_allclose((w / w.sum()).sum(), 1.0, rtol=1e-12)


class TestOneStepForecast:
    def test_constant_series(self):
        series = TimeSeries(np.full((6, 2), 3.5))
        out = one_step_forecast(series, np.array([1.0, 2.0]), np.array([3, 4]))
        np.testing.assert_array_equal(out, [3.5, 3.5])

    def test_unit_increments(self):
        series = TimeSeries(np.arange(1.0, 7.0))
        out = one_step_forecast(series, np.array([0.3, 0.9]), np.array([3, 5]))
        assert out[0] == pytest.approx(7.0, abs=1e-12)

    def test_weighted_average_value(self):
        series = TimeSeries(np.array([0.0, 1.0, 3.0]))
        out = one_step_forecast(series, np.array([0.25, 0.75]), np.array([2, 3]))
        assert out[0] == pytest.approx(4.75, abs=1e-14)

    def test_zero_sum_is_contract_violation(self):
        series = TimeSeries(np.array([0.0, 1.0, 3.0]))
        with pytest.raises(InvalidArgumentError):
            one_step_forecast(series, np.zeros(2), np.array([2, 3]))


def knn_oracle_one_step(values, b, k, tau):
    """Hand-rolled raw-patch forecast used as an independent check."""
    values = np.atleast_2d(np.asarray(values, dtype=float).T).T
    T, p = values.shape
    query = values[T - b:][::-1].T.reshape(-1)
    hist_times = np.arange(b + 1, T + 1)
    patches = np.stack([values[t - b - 1:t - 1][::-1].T.reshape(-1) for t in hist_times])
    dist = np.linalg.norm(patches - query, axis=1)
    out = np.empty(p)
    for c in range(p):
        kk = k[c] if isinstance(k, (tuple, list)) else k
        h_k = np.sort(dist)[kk - 1]
        w = np.exp(-(T + 1 - hist_times) / tau) * epanechnikov(dist / h_k)
        inc = values[hist_times - 1, c] - values[hist_times - 2, c]
        out[c] = values[-1, c] + (w @ inc) / w.sum()
    return out


class TestPredict:
    def test_ar1_matches_oracle(self):
        z = 0.5 ** np.arange(50)
        series = TimeSeries(z)
        got = predict(series, b=2, cfg=ForecastConfig(k=5, tau=20.0), m=1)
        expected = knn_oracle_one_step(z, b=2, k=5, tau=20.0)
        np.testing.assert_allclose(got[0], expected, rtol=1e-12)

    def test_constant_series_multi_step(self):
        series = TimeSeries(np.full(30, 7.25))
        out = predict(series, b=3, cfg=ForecastConfig(k=4, tau=10.0), m=3)
        np.testing.assert_allclose(out, 7.25, atol=1e-14)

    def test_linear_trend_exact(self):
        series = TimeSeries(np.arange(1.0, 41.0))
        out = predict(series, b=2, cfg=ForecastConfig(k=5, tau=20.0), m=2)
        np.testing.assert_allclose(out[:, 0], [41.0, 42.0], atol=1e-12)

    def test_per_component_k_matches_two_pass_oracle(self):
        rng = np.random.default_rng(19)
        values = rng.standard_normal((40, 2)).cumsum(axis=0)
        series = TimeSeries(values)
        got = predict(series, b=3, cfg=ForecastConfig(k=(2, 4), tau=15.0), m=1)
        expected = knn_oracle_one_step(values, b=3, k=(2, 4), tau=15.0)
        np.testing.assert_allclose(got[0], expected, rtol=1e-12)

    def test_m1_equals_explicit_one_step(self):
        rng = np.random.default_rng(23)
        values = rng.standard_normal(35).cumsum()
        series = TimeSeries(values)
        got = predict(series, b=4, cfg=ForecastConfig(k=6, tau=8.0), m=1)

        patches = embed(series, 4, include_query=True)
        den = DenoisedSet(patches.patches, patches.times)
        hist = DenoisedSet(den.points[:-1], den.times[:-1])
        w = knn_weights(den.points[-1], hist, int(den.times[-1]), k=6, tau=8.0)
        expected = one_step_forecast(series, w, hist.times)
        np.testing.assert_allclose(got[0], expected, atol=1e-14)

    def test_forecast_within_increment_hull(self):
        rng = np.random.default_rng(29)
        values = rng.standard_normal(30)
        series = TimeSeries(values)
        out = predict(series, b=2, cfg=ForecastConfig(k=5, tau=10.0), m=1)[0, 0]
        inc = np.diff(values)[1:]  # increments available to patches at t=3..30
        assert values[-1] + inc.min() - 1e-12 <= out <= values[-1] + inc.max() + 1e-12

    def test_denoiser_requires_config(self):
        series = TimeSeries(np.arange(30.0))
        with pytest.raises(InvalidArgumentError):
            predict(series, b=2, cfg=ForecastConfig(k=3, tau=5.0, denoiser="same"), m=1)

    def test_freeze_denoise_runs_denoiser_once(self):
        rng = np.random.default_rng(41)
        values = np.column_stack([np.cos(np.linspace(0, 12, 60)),
                                  np.sin(np.linspace(0, 12, 60))])
        values += 0.02 * rng.standard_normal(values.shape)
        series = TimeSeries(values)
        cfg = ForecastConfig(k=6, tau=30.0, denoiser="same")
        scfg = SameConfig(d=1, iterations=2, tau0=2.0)
        frozen = predict(series, 4, cfg, scfg, m=3, freeze_denoise=True)
        fresh = predict(series, 4, cfg, scfg, m=3, freeze_denoise=False)
        assert np.all(np.isfinite(frozen))
        np.testing.assert_allclose(frozen[0], fresh[0], atol=1e-12)  # first step identical

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_translation_equivariance_raw(self, seed):
        rng = np.random.default_rng(seed)
        values = rng.standard_normal((25, 2))
        shift = rng.uniform(-10, 10, size=2)
        cfg = ForecastConfig(k=4, tau=7.0)
        base = predict(TimeSeries(values), b=3, cfg=cfg, m=2)
        shifted = predict(TimeSeries(values + shift), b=3, cfg=cfg, m=2)
        np.testing.assert_allclose(shifted, base + shift, atol=1e-9)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_translation_equivariance_same_pipeline(self, seed):
        rng = np.random.default_rng(seed)
        values = rng.standard_normal((25, 2)).cumsum(axis=0) * 0.2
        shift = rng.uniform(-10, 10, size=2)
        cfg = ForecastConfig(k=4, tau=7.0, denoiser="same")
        scfg = SameConfig(d=1, iterations=2, tau0=5.0, h0=1.0)
        base = predict(TimeSeries(values), b=3, cfg=cfg, denoise_cfg=scfg, m=1)
        shifted = predict(TimeSeries(values + shift), b=3, cfg=cfg, denoise_cfg=scfg, m=1)
        np.testing.assert_allclose(shifted, base + shift, atol=1e-8)
