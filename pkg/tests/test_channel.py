import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scfeedback.channel import (
    SparseChannel,
    gen_noise,
    gen_sparse_channel,
    gen_uplink_channel,
    support_vector,
)
from scfeedback.errors import InvalidParameterError


def test_zero_sparsity(rng):
    h = gen_sparse_channel(5, 0, rng)
    assert not np.any(h.coeffs)
    assert h.support == frozenset()


def test_full_support(rng):
    h = gen_sparse_channel(5, 5, rng)
    assert np.all(h.coeffs != 0)
    assert h.sparsity == 5


@pytest.mark.parametrize("n,xi", [(5, 6), (0, 0), (3, -1)])
def test_sparse_channel_rejects_bad_params(rng, n, xi):
    with pytest.raises(InvalidParameterError):
        gen_sparse_channel(n, xi, rng)


def test_nonzero_entries_unit_variance(rng):
    vals = np.concatenate([gen_sparse_channel(64, 8, rng).coeffs for _ in range(10_000)])
    vals = vals[vals != 0]
    assert vals.size == 80_000
    assert 0.9 <= np.mean(np.abs(vals) ** 2) <= 1.1


def test_positions_uniform():
    rng = np.random.default_rng(7)
    counts = np.zeros(8)
    for _ in range(100_000):
        counts += support_vector(gen_sparse_channel(8, 1, rng))
    np.testing.assert_allclose(counts / 100_000, 1 / 8, atol=0.01)


def test_coeffs_are_read_only(rng):
    h = gen_sparse_channel(8, 2, rng)
    with pytest.raises(ValueError):
        h.coeffs[0] = 1.0


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 80), data=st.data(), seed=st.integers(0, 2**32 - 1))
def test_support_popcount_matches_sparsity(n, data, seed):
    xi = data.draw(st.integers(0, n))
    h = gen_sparse_channel(n, xi, np.random.default_rng(seed))
    z = support_vector(h)
    assert z.sum() == xi == h.sparsity
    assert set(np.flatnonzero(z)) == h.support


def test_support_vector_example():
    h = SparseChannel(np.array([0.3 + 1j, -2.0, 0, 0, 1j]))
    np.testing.assert_array_equal(support_vector(h), [1, 1, 0, 0, 1])
    np.testing.assert_array_equal(support_vector(np.zeros(4)), [0, 0, 0, 0])
    np.testing.assert_array_equal(support_vector(np.ones(3)), [1, 1, 1])


def test_uplink_single_antenna(rng):
    g = gen_uplink_channel(1, rng)
    assert g.shape == (1,) and np.iscomplexobj(g)


def test_uplink_mean_power():
    rng = np.random.default_rng(3)
    power = np.mean([np.sum(np.abs(gen_uplink_channel(64, rng)) ** 2) for _ in range(10_000)])
    assert 60.8 <= power <= 67.2


def test_uplink_deterministic():
    a = gen_uplink_channel(16, np.random.default_rng(11))
    b = gen_uplink_channel(16, np.random.default_rng(11))
    np.testing.assert_array_equal(a, b)


def test_uplink_rejects_zero_dim(rng):
    with pytest.raises(InvalidParameterError):
        gen_uplink_channel(0, rng)


def test_noise_zero_variance(rng):
    w = gen_noise(3, 4, 0.0, rng)
    assert w.shape == (3, 4) and not np.any(w)


def test_noise_variance():
    w = gen_noise(1, 100_000, 2.0, np.random.default_rng(5))
    assert 1.96 <= np.mean(np.abs(w) ** 2) <= 2.04
    # circular: real and imaginary parts each carry half
    assert abs(np.var(w.real) - 1.0) < 0.03


def test_noise_deterministic():
    a = gen_noise(4, 8, 0.5, np.random.default_rng(9))
    b = gen_noise(4, 8, 0.5, np.random.default_rng(9))
    assert a.tobytes() == b.tobytes()


def test_noise_negative_variance(rng):
    with pytest.raises(InvalidParameterError):
        gen_noise(2, 2, -1.0, rng)
