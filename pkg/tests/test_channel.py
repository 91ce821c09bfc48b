import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from latency_race import (
    ChannelSpec,
    DomainError,
    Message,
    Mode,
    error_probabilities,
    gammas,
    make_stream,
    q_function,
    sample_received_mean,
)
from latency_race.channel import q_function_array, sample_received_means
from latency_race.simulate import monte_carlo_error_rate


def _tail_quadrature(x):
    val, _ = integrate.quad(lambda z: math.exp(-z * z / 2) / math.sqrt(2 * math.pi), x, math.inf,
                            epsabs=1e-14, epsrel=1e-13)
    return val


class TestQFunction:
    def test_zero(self):
        assert q_function(0.0) == 0.5

    def test_deep_tail(self):
        assert q_function(8.0) < 1e-15
        assert q_function(8.0) <= math.exp(-32.0)

    @pytest.mark.parametrize("x", [1.0, 0.3, 2.5, -1.7])
    def test_matches_quadrature(self, x):
        assert q_function(x) == pytest.approx(_tail_quadrature(x), abs=1e-10)

    def test_cutoffs(self):
        assert q_function(38.5) == 0.0
        assert q_function(-40.0) == 1.0

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_non_finite(self, bad):
        with pytest.raises(DomainError):
            q_function(bad)

    @given(st.floats(-37, 37))
    def test_symmetry(self, x):
        assert q_function(-x) == pytest.approx(1.0 - q_function(x), abs=1e-15)

    @given(st.floats(-8, 8), st.floats(1e-3, 1.0))
    def test_strictly_decreasing(self, x, dx):
        assert q_function(x + dx) < q_function(x)

    def test_vector_agrees_with_scalar(self):
        xs = np.linspace(-39, 39, 301)
        vec = q_function_array(xs)
        for x, v in zip(xs, vec):
            assert v == pytest.approx(q_function(float(x)), rel=1e-12, abs=1e-300)


class TestGammas:
    @pytest.mark.parametrize(
        "h, expected", [(0.0, (0.5, 0.5)), (1.0, (0.0, 2.0)), (-0.25, (0.78125, 0.28125))]
    )
    def test_values(self, h, expected):
        assert gammas(h) == pytest.approx(expected, abs=1e-15)

    @given(st.floats(-5, 5))
    def test_swap_symmetry(self, h):
        g1, g2 = gammas(h)
        assert gammas(-h) == pytest.approx((g2, g1))


class TestChannelSpec:
    def test_amplitude_consistency(self):
        spec = ChannelSpec(snr=0.7, snr_max=1.0, noise_power=2.5)
        assert spec.amplitude**2 / spec.noise_power == pytest.approx(spec.snr, rel=1e-12)

    def test_snr_above_max(self):
        with pytest.raises(DomainError):
            ChannelSpec(snr=2.0, snr_max=1.0)

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            ChannelSpec(snr=0.0, snr_max=1.0)


class TestErrorProbabilities:
    def test_zero_symbols(self):
        assert error_probabilities(0, ChannelSpec(1.3, 2.0), 0.0) == (0.5, 0.5)

    def test_q2(self):
        pe = error_probabilities(4, ChannelSpec(1.0, 2.0), 0.0)
        assert pe.pe1 == pe.pe2 == pytest.approx(q_function(2.0))

    def test_negative_t(self):
        with pytest.raises(DomainError):
            error_probabilities(-1, ChannelSpec(1.0, 2.0), 0.0)

    def test_approx_form(self):
        pe = error_probabilities(10, ChannelSpec(2.0, 2.0, mode=Mode.APPROX), 0.2)
        assert pe.pe1 == pytest.approx(math.exp(-10 * 2 * 0.32))
        assert pe.pe2 == pytest.approx(math.exp(-10 * 2 * 0.72))

    def test_approx_truncated_at_t0(self):
        assert error_probabilities(0, ChannelSpec(1.0, 2.0, mode=Mode.APPROX), 0.3) == (1.0, 1.0)

    @pytest.mark.slow
    def test_monte_carlo_1e7(self):
        # T=10, S=2, h=0.2 against 10^7 explicit draws per message
        spec = ChannelSpec(2.0, 2.0)
        n = 10_000_000
        exact = error_probabilities(10, spec, 0.2)
        approx = error_probabilities(10, ChannelSpec(2.0, 2.0, mode=Mode.APPROX), 0.2)
        for i, msg in enumerate((Message.BUY, Message.SELL)):
            freq = monte_carlo_error_rate(10, spec, 0.2, msg, n, make_stream(11 + i))
            p = exact[i]
            se = math.sqrt(p * (1 - p) / n)
            assert abs(freq - p) <= 3 * se
            # the exponential form overstates the error rate (Chernoff)
            assert approx[i] >= freq - 3 * se

    @settings(max_examples=200)
    @given(st.integers(0, 200), st.floats(0.01, 5.0), st.floats(-0.99, 0.99), st.sampled_from(list(Mode)))
    def test_non_increasing_in_t(self, T, snr, h, mode):
        spec = ChannelSpec(snr, 5.0, mode=mode)
        a, b = error_probabilities(T, spec, h), error_probabilities(T + 1, spec, h)
        assert b.pe1 <= a.pe1 and b.pe2 <= a.pe2

    @settings(max_examples=300)
    @given(st.integers(0, 200), st.floats(0.01, 5.0), st.floats(-0.999, 0.999))
    def test_chernoff_ordering(self, T, snr, h):
        ex = error_probabilities(T, ChannelSpec(snr, 5.0), h)
        ap = error_probabilities(T, ChannelSpec(snr, 5.0, mode=Mode.APPROX), h)
        assert ex.pe1 <= ap.pe1 and ex.pe2 <= ap.pe2


class TestSampling:
    def test_noiseless_limit(self):
        spec = ChannelSpec(snr=1e40, snr_max=1e40, noise_power=1e-40)
        assert sample_received_mean(Message.BUY, 5, spec, make_stream(0)) == spec.amplitude

    def test_deterministic(self):
        spec = ChannelSpec(1.0, 1.0)
        a = sample_received_mean(Message.BUY, 8, spec, make_stream(42))
        b = sample_received_mean(Message.BUY, 8, spec, make_stream(42))
        assert a == b

    def test_zero_t(self):
        with pytest.raises(DomainError):
            sample_received_mean(Message.SELL, 0, ChannelSpec(1.0, 1.0), make_stream(0))

    def test_law_of_large_numbers(self):
        spec = ChannelSpec(1.0, 1.0, noise_power=0.5)
        T, n = 8, 1_000_000
        means = sample_received_means(Message.BUY, T, spec, n, make_stream(5))
        assert abs(means.mean() - spec.amplitude) <= 4 * math.sqrt(spec.noise_power / (T * n))

    def test_decode_frequency_matches_exact(self):
        spec = ChannelSpec(0.3, 1.0)
        n = 1_000_000
        for i, msg in enumerate((Message.BUY, Message.SELL)):
            p = error_probabilities(6, spec, -0.1)[i]
            freq = monte_carlo_error_rate(6, spec, -0.1, msg, n, make_stream(100 + i))
            assert abs(freq - p) <= 3 * math.sqrt(p * (1 - p) / n)
