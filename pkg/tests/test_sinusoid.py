import numpy as np
import pytest
from numpy.testing import assert_allclose

from models.sinusoid import (LinWeights, SinusoidParams, params_from_weights, synthesize, synthesize_linear,
                             weights_from_params)
from models.utils import wrap_phase


class TestSinusoidParams:

    def test_wraps_phase(self):
        assert SinusoidParams(1.0, 0.5, 2 * np.pi + 0.5).phase == pytest.approx(0.5)

    @pytest.mark.parametrize('amp, freq', [(-1.0, 0.5), (1.0, 0.0), (1.0, np.pi), (np.nan, 0.5)])
    def test_rejects_invalid(self, amp, freq):
        with pytest.raises(ValueError):
            SinusoidParams(amp, freq)

    def test_wrap_phase_range(self):
        phases = wrap_phase(np.linspace(-10, 10, 101))
        assert np.all(phases > -np.pi)
        assert np.all(phases <= np.pi)


class TestLinWeights:

    def test_vector_layout(self):
        weights = LinWeights([1, 2], [3, 4], [5, 6], [7, 8])
        assert weights.n_partials == 2
        assert_allclose(weights.as_vector(), [1, 2, 3, 4, 5, 6, 7, 8])
        assert weights.partial(1) == (2, 4, 6, 8)

    def test_rejects_ragged_or_non_finite(self):
        with pytest.raises(ValueError):
            LinWeights([1, 2], [3], [5, 6], [7, 8])
        with pytest.raises(ValueError):
            LinWeights([np.inf], [0], [0], [0])
        with pytest.raises(ValueError):
            LinWeights.from_vector(np.zeros(6))


def test_params_weights_params_identity():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        amp = 10 ** rng.uniform(-6, 1)
        slope = amp * rng.uniform(-0.01, 0.01)
        phase = rng.uniform(-np.pi, np.pi)
        dtheta = rng.uniform(-0.05, 0.05)
        weights = weights_from_params(SinusoidParams(amp, 1.0, phase, slope), dtheta)
        params, recovered, vanished = params_from_weights(weights, 1.0)
        assert not vanished
        assert params.amp == pytest.approx(amp, rel=1e-12)
        assert abs(wrap_phase(params.phase - phase)) < 1e-12
        assert params.amp_slope == pytest.approx(slope, rel=1e-12, abs=1e-15)
        assert recovered == pytest.approx(dtheta, rel=1e-12, abs=1e-15)
        assert params.freq == 1.0


def test_weights_params_weights_identity():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        c, s = rng.uniform(-2, 2, 2)
        if np.hypot(c, s) <= 1e-6:
            continue
        d, t = rng.uniform(-0.1, 0.1, 2)
        params, dtheta, _ = params_from_weights((c, s, d, t), 0.7)
        assert_allclose(weights_from_params(params, dtheta), (c, s, d, t), rtol=1e-12, atol=1e-12)


def test_vanished_partial_below_floor():
    params, dtheta, vanished = params_from_weights((1e-9, -1e-9, 0.3, 0.2), 0.4, amp_floor=1e-8)
    assert vanished
    assert params.amp == 0.0
    assert params.freq == 0.4
    assert dtheta == 0.0


def test_synthesize_matches_closed_form(small_cfg):
    params = SinusoidParams(0.8, 0.9, -0.4, 2e-3)
    n = small_cfg.time_index
    expected = (0.8 + 2e-3 * n) * np.cos(0.9 * n - 0.4)
    assert_allclose(synthesize([params], small_cfg), expected, atol=1e-14)
    assert_allclose(synthesize([params], small_cfg, windowed=True), small_cfg.window * expected, atol=1e-14)


def test_zero_amplitude_synthesizes_silence(small_cfg):
    x = synthesize([SinusoidParams(0.0, 0.3)], small_cfg)
    assert x.shape == (64,)
    assert np.all(x == 0.0)


def test_synthesize_needs_partials(small_cfg):
    with pytest.raises(ValueError):
        synthesize([], small_cfg)


def test_linear_model_is_exact_without_frequency_offset(small_cfg):
    params = [SinusoidParams(1.0, 0.6, 0.3, 1e-3), SinusoidParams(0.5, 1.7, -2.0, -4e-3)]
    weights = LinWeights(*np.array([weights_from_params(p) for p in params]).T)
    assert_allclose(synthesize_linear(weights, [0.6, 1.7], small_cfg), synthesize(params, small_cfg), atol=1e-12)


def test_linear_model_rejects_normalized_weights(small_cfg):
    with pytest.raises(ValueError, match='de-normalized'):
        synthesize_linear(LinWeights.zeros(1, normalized=True), [0.5], small_cfg)


def test_linearization_error_is_second_order(cfg):
    """Halving the frequency offset and amplitude slope cuts the model error about four times."""
    rng = np.random.default_rng(11)
    half = cfg.frame_len / 2
    passed = 0
    for _ in range(200):
        theta0 = rng.uniform(0.2, 2.8)
        phase = rng.uniform(-np.pi, np.pi)
        dtheta = rng.uniform(-0.05, 0.05) / half
        slope = rng.uniform(-0.05, 0.05) / half

        def error(scale):
            exact = synthesize([SinusoidParams(1.0, theta0 + scale * dtheta, phase, scale * slope)], cfg)
            weights = weights_from_params(SinusoidParams(1.0, theta0, phase, scale * slope), scale * dtheta)
            linear = synthesize_linear(LinWeights(*[[w] for w in weights]), [theta0], cfg)
            return np.max(np.abs(exact - linear))

        passed += error(0.5) <= 0.3 * error(1.0)
    assert passed >= 190
