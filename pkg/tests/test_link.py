import numpy as np
import pytest

from scfeedback.errors import InvalidParameterError
from scfeedback.framing import qpsk_modulate
from scfeedback.link import LinkConfig, superimpose, transmit, transmit_tdm_symbols
from scfeedback.spreading import gen_walsh, spread


def test_superimpose_boundaries(rng):
    s = rng.standard_normal(8) + 0j
    d = rng.standard_normal(8) + 1j
    np.testing.assert_allclose(superimpose(s, d, LinkConfig(0.0, e_k=2.0)), np.sqrt(2.0) * d)
    np.testing.assert_allclose(superimpose(s, d, LinkConfig(1.0, e_k=2.0)), np.sqrt(2.0) * s)
    ones = np.ones(5)
    np.testing.assert_allclose(
        superimpose(ones, ones, LinkConfig(0.2)), (np.sqrt(0.2) + np.sqrt(0.8)) * ones
    )
    with pytest.raises(InvalidParameterError):
        superimpose(np.ones(3), np.ones(4), LinkConfig(0.2))


@pytest.mark.parametrize("kwargs", [dict(rho=1.2), dict(rho=0.2, e_k=0), dict(rho=0.2, noise_var=-1)])
def test_config_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        LinkConfig(**kwargs)


def test_snr_definition():
    cfg = LinkConfig.from_snr(4.0, 0.2, e_k=2.0)
    assert cfg.snr_db == pytest.approx(4.0)
    assert cfg.noise_var == pytest.approx(2.0 / 10**0.4)


def test_transmit_identity(rng):
    x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    y = transmit(x, np.array([1.0 + 0j]), LinkConfig(0.2), rng)
    np.testing.assert_array_equal(y[0], x)


def test_transmit_noiseless_rank_one(rng):
    x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
    g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    y = transmit(x, g, LinkConfig(0.2), rng)
    assert np.linalg.matrix_rank(y) == 1


def test_transmit_noise_variance():
    rng = np.random.default_rng(4)
    cfg = LinkConfig(0.2, noise_var=0.3)
    acc = 0.0
    trials = 10_000
    for _ in range(trials):
        acc += np.mean(np.abs(transmit(np.zeros(16), np.ones(4), cfg, rng)) ** 2)
    assert 0.97 * 0.3 <= acc / trials <= 1.03 * 0.3


def test_tdm_noiseless_span(rng):
    x = qpsk_modulate(rng.integers(0, 2, 40))
    g = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    cfg = LinkConfig(0.0, e_k=3.0)
    y = transmit_tdm_symbols(x, g, cfg, rng) / np.sqrt(3.0)
    np.testing.assert_allclose(y, np.outer(g, x), atol=1e-12)
    assert np.linalg.matrix_rank(y) == 1


def test_tdm_unit_vector_channel(rng):
    x = qpsk_modulate(rng.integers(0, 2, 4000))
    g = np.zeros(3, dtype=complex)
    g[0] = 1.0
    y = transmit_tdm_symbols(x, g, LinkConfig(0.0, noise_var=0.1), rng)
    assert np.mean(np.abs(y[0] - x) ** 2) == pytest.approx(0.1, rel=0.1)
    assert np.mean(np.abs(y[1:]) ** 2) == pytest.approx(0.1, rel=0.1)


def test_tdm_mrc_snr():
    rng = np.random.default_rng(21)
    g = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    cfg = LinkConfig(0.0, e_k=1.5, noise_var=4.0)
    gain = np.vdot(g, g).real
    errs = []
    for _ in range(200):
        x = qpsk_modulate(rng.integers(0, 2, 200))
        y = transmit_tdm_symbols(x, g, cfg, rng)
        est = g.conj() @ y / (np.sqrt(cfg.e_k) * gain)
        errs.append(np.abs(est - x) ** 2)
    measured_snr = 1.0 / np.mean(errs)
    assert measured_snr == pytest.approx(cfg.e_k * gain / cfg.noise_var, rel=0.05)


def test_composite_power(rng):
    p, l = 1024, 132
    q = gen_walsh(p, l)
    verbatim, normed = [], []
    for _ in range(200):
        x = qpsk_modulate(rng.integers(0, 2, 2 * l))
        d = qpsk_modulate(rng.integers(0, 2, 2 * p))
        verbatim.append(np.mean(np.abs(superimpose(spread(x, q), d, LinkConfig(0.2))) ** 2))
        normed.append(np.mean(np.abs(superimpose(spread(x, q, True), d, LinkConfig(0.2))) ** 2))
    assert np.mean(normed) == pytest.approx(1.0, rel=0.02)
    assert np.mean(verbatim) == pytest.approx(0.2 * l + 0.8, rel=0.02)
