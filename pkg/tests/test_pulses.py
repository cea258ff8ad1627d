import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zakotfs.pulses import (
    PulseSpec,
    gaussian_window,
    nyquist_value,
    raised_cosine_value,
    rectangular_pulse,
    root_raised_cosine_sampled,
    sample_delayed_nyquist,
    truncated_delayed_nyquist,
)
from zakotfs.zak import dzt


@pytest.mark.parametrize("beta", [0.0, 0.1, 0.25, 0.5, 1.0])
def test_nyquist_property(beta):
    assert raised_cosine_value(0.0, beta) == 1.0
    u = np.arange(-20, 21)
    u = u[u != 0]
    assert np.all(raised_cosine_value(u, beta) == 0.0)


def test_peak_sample_half_delay():
    expected = (2 / math.pi) * math.cos(math.pi / 4) / 0.75
    assert raised_cosine_value(-0.5, 0.5) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.6002, abs=1e-4)


@pytest.mark.parametrize("beta", [0.25, 0.5, 0.8, 1.0])
def test_singularity_is_continuous(beta):
    u0 = 1 / (2 * beta)
    limit = raised_cosine_value(u0, beta)
    assert limit == pytest.approx((math.pi / 4) * np.sinc(u0), abs=1e-15)
    for eps in (1e-5, -1e-5):
        assert raised_cosine_value(u0 + eps, beta) == pytest.approx(limit, abs=1e-4)


def test_triangle_for_rectangular_family():
    spec = PulseSpec("rectangular", 0.0)
    np.testing.assert_allclose(nyquist_value(spec, [-1.5, -0.5, 0, 0.25, 1, 2]), [0, 0.5, 1, 0.75, 0, 0])


def test_pulse_spec_validation():
    with pytest.raises(ValueError):
        PulseSpec("gaussian", 0.5)
    with pytest.raises(ValueError):
        PulseSpec("raised-cosine", 1.5)
    with pytest.raises(ValueError):
        PulseSpec("raised-cosine", 0.5, T=0)


class TestDelayedPulse:
    def test_half_sample_delay_support(self):
        K = L = 30
        spec = PulseSpec("raised-cosine", 0.5)
        h = sample_delayed_nyquist(spec, 0.5, (K, L))
        n = np.arange(-14, 16)
        np.testing.assert_allclose(h[n % (K * L)], raised_cosine_value(n - 0.5, 0.5), atol=0)
        assert np.count_nonzero(h) == L
        significant = n[np.abs(h[n % (K * L)]) > 0.005 * np.max(np.abs(h))]
        assert significant.min() == -3 and significant.max() == 4

    def test_integer_delay_is_delta(self):
        h = sample_delayed_nyquist(PulseSpec(), 2.0, (4, 8))
        expected = np.zeros(32)
        expected[2] = 1
        np.testing.assert_array_equal(h, expected)

    def test_window_is_half_open(self):
        # tau = 0.5, L = 4: n - 0.5 in [-2, 2) -> n = -1..2
        n, _ = truncated_delayed_nyquist(PulseSpec(), 0.5, 4)
        np.testing.assert_array_equal(n, [-1, 0, 1, 2])
        n, _ = truncated_delayed_nyquist(PulseSpec(), 2.5, 5)
        np.testing.assert_array_equal(n, [0, 1, 2, 3, 4])

    def test_rejects_bad_delay(self):
        with pytest.raises(ValueError):
            sample_delayed_nyquist(PulseSpec(), -0.5, (4, 4))
        with pytest.raises(ValueError):
            sample_delayed_nyquist(PulseSpec(), 16.0, (4, 4))
        with pytest.raises(ValueError):
            sample_delayed_nyquist(PulseSpec(), float("nan"), (4, 4))

    def test_delay_in_seconds(self):
        spec = PulseSpec("raised-cosine", 0.3, T=20e-9)
        a = sample_delayed_nyquist(spec, 10e-9, (8, 16))
        b = sample_delayed_nyquist(PulseSpec("raised-cosine", 0.3), 0.5, (8, 16))
        np.testing.assert_allclose(a, b, atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(
        K=st.integers(1, 12),
        L=st.integers(1, 24),
        frac=st.floats(0, 1, exclude_max=True),
        beta=st.sampled_from([0.1, 0.5, 1.0]),
        family=st.sampled_from(["raised-cosine", "rectangular"]),
    )
    def test_column_constant_magnitude(self, K, L, frac, beta, family):
        tau = frac * K * L
        h = sample_delayed_nyquist(PulseSpec(family, beta), tau, (K, L))
        # support bound: at most L consecutive (circular) nonzero samples
        nz = np.flatnonzero(h)
        if nz.size:
            gaps = np.diff(np.concatenate([nz, [nz[0] + K * L]]))
            span = K * L - gaps.max() + 1
            assert span <= L
        mag = np.abs(dzt(h, (K, L)))
        assert np.max(np.abs(mag - mag[:, :1])) <= 1e-12

    def test_one_sample_delay_shifts_magnitude_one_bin(self):
        K, L = 8, 16
        spec = PulseSpec("raised-cosine", 0.5)
        a = np.abs(dzt(sample_delayed_nyquist(spec, 3.3, (K, L)), (K, L)))
        b = np.abs(dzt(sample_delayed_nyquist(spec, 4.3, (K, L)), (K, L)))
        np.testing.assert_allclose(b, np.roll(a, 1, axis=0), atol=1e-12)


class TestRectangular:
    def test_dzt_is_constant(self):
        K, L = 5, 6
        np.testing.assert_allclose(dzt(rectangular_pulse((K, L)), (K, L)), np.full((L, K), 1 / math.sqrt(K * L)), atol=1e-15)

    def test_unit_energy(self):
        assert np.sum(rectangular_pulse((7, 3)) ** 2) == pytest.approx(1.0, abs=1e-15)


class TestRootRaisedCosine:
    @pytest.fixture
    def autocorr(self):
        def run(beta, os=8, L=30):
            p = root_raised_cosine_sampled(PulseSpec("root-raised-cosine", beta), (4, L), os)
            r = np.correlate(p, p, "full")
            return r[len(p) - 1:], os

        return run

    def test_lag_zero(self, autocorr):
        r, _ = autocorr(0.5)
        assert abs(r[0] - 1) <= 1e-3

    @pytest.mark.parametrize("beta", [0.25, 0.5, 1.0])
    def test_integer_lags(self, autocorr, beta):
        r, os = autocorr(beta)
        assert np.max(np.abs(r[os::os])) <= 1e-3

    def test_half_symbol_lag(self, autocorr):
        r, os = autocorr(0.5)
        assert abs(r[os // 2] - raised_cosine_value(0.5, 0.5)) <= 1e-3

    def test_edge_singularity(self):
        # beta = 0.25, os = 4: t = T/(4 beta) = 1 lands on a tap
        p = root_raised_cosine_sampled(PulseSpec("root-raised-cosine", 0.25), (1, 20), 4)
        assert np.all(np.isfinite(p))

    def test_rejects_zero_rolloff(self):
        with pytest.raises(ValueError):
            root_raised_cosine_sampled(PulseSpec("root-raised-cosine", 0.0), (1, 8))


def test_gaussian_window():
    g = gaussian_window((4, 10), 0.3)
    assert np.linalg.norm(g) == pytest.approx(1.0)
    assert np.all(g[10:] == 0) and np.all(g[:10] > 0)
    assert np.argmax(g) == 5
    with pytest.raises(ValueError):
        gaussian_window((4, 10), 0.0)
