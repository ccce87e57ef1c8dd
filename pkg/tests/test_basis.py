import numpy as np
import pytest
from numpy.testing import assert_allclose

from config.param import BASIS_FLOPS, Parity
from metrics.flops import FlopCounter
from models.basis import BLOCKS, build_basis
from models.frame import make_frame_config
from models.sinusoid import LinWeights

FREQS = [0.3, 0.9, 1.6, 2.4]


@pytest.fixture
def basis(cfg):
    return build_basis(FREQS, cfg)


def test_columns_have_unit_norm(basis):
    assert basis.columns.shape == (256, 16)
    assert_allclose(np.linalg.norm(basis.columns, axis=0), 1.0, rtol=1e-12)
    assert np.all(basis.col_norms > 0)


def test_parity_of_columns(basis):
    for j, parity in enumerate(basis.parity):
        column = basis.columns[:, j]
        sign = 1.0 if parity is Parity.EVEN else -1.0
        assert_allclose(column, sign * column[::-1], atol=1e-15)
    assert [basis.parity[basis.column_index(b, 0)] for b in BLOCKS] == \
        [Parity.EVEN, Parity.ODD, Parity.ODD, Parity.EVEN]


def test_even_and_odd_columns_are_orthogonal(basis):
    gram = basis.gram()
    even = basis.even_mask
    assert np.max(np.abs(gram[np.ix_(even, ~even)])) <= 1e-12


def test_cos_sin_orthogonal_at_quarter_rate(cfg):
    basis = build_basis([np.pi / 2], cfg)
    c = basis.columns[:, basis.column_index('c', 0)]
    s = basis.columns[:, basis.column_index('s', 0)]
    assert abs(c @ s) <= 1e-12


def test_half_columns_preserve_inner_products(basis, rng):
    x = rng.standard_normal(256)
    even = (x + x[::-1]) / 2
    j = basis.column_index('c', 2)
    half_even = np.sqrt(2) * even[:128]
    assert basis.half_columns[:, j] @ half_even == pytest.approx(basis.columns[:, j] @ x, rel=1e-12)


def test_normalize_denormalize_inverse(basis, rng):
    raw = LinWeights.from_vector(rng.standard_normal(16))
    normalized = basis.normalize(raw)
    assert normalized.normalized
    assert_allclose(normalized.as_vector(), raw.as_vector() * basis.col_norms)
    assert_allclose(basis.denormalize(normalized).as_vector(), raw.as_vector(), rtol=1e-14)
    assert basis.denormalize(raw) is raw


def test_charges_basis_flops(cfg):
    counter = FlopCounter()
    build_basis(FREQS, cfg, counter=counter)
    assert counter.total == BASIS_FLOPS * 256 * 4


def test_rejects_underdetermined_system():
    with pytest.raises(ValueError, match='columns'):
        build_basis([0.5, 1.0, 1.5], make_frame_config(8))


def test_rejects_duplicate_frequencies(cfg):
    with pytest.raises(ValueError, match='rank deficient'):
        build_basis([0.5, 0.5 + 1e-10], cfg)


@pytest.mark.parametrize('freqs', [[0.0], [np.pi], [-0.1], [0.5, 4.0]])
def test_rejects_out_of_band_frequencies(cfg, freqs):
    with pytest.raises(ValueError, match='outside'):
        build_basis(freqs, cfg)


def test_basis_is_read_only(basis):
    with pytest.raises(ValueError):
        basis.columns[0, 0] = 1.0
