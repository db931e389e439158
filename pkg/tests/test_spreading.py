import numpy as np
import pytest
from hypothesis import given, strategies as st

from scfeedback.errors import InvalidParameterError
from scfeedback.framing import qpsk_modulate
from scfeedback.spreading import despread, gen_walsh, spread


def test_base_case():
    np.testing.assert_array_equal(gen_walsh(2, 2), [[1, 1], [1, -1]])


def test_sylvester_columns():
    q = gen_walsh(4, 3)
    np.testing.assert_array_equal(q.T, [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1]])


def _sylvester(p):
    h = np.array([[1]], dtype=np.int64)
    while h.shape[0] < p:
        h = np.block([[h, h], [h, -h]])
    return h


@given(k=st.integers(0, 8), data=st.data())
def test_exact_orthogonality(k, data):
    p = 2**k
    l = data.draw(st.integers(1, p))
    q = gen_walsh(p, l).astype(np.int64)
    np.testing.assert_array_equal(q.T @ q, p * np.eye(l, dtype=np.int64))
    np.testing.assert_array_equal(q, _sylvester(p)[:, :l])


def test_orthogonality_1024_132():
    q = gen_walsh(1024, 132).astype(np.int64)
    np.testing.assert_array_equal(q.T @ q, 1024 * np.eye(132, dtype=np.int64))


@pytest.mark.parametrize("p,l", [(3, 1), (6, 2), (4, 5), (4, 0)])
def test_walsh_errors(p, l):
    with pytest.raises(InvalidParameterError):
        gen_walsh(p, l)


def test_spread_single_code():
    s = spread(np.array([1.0]), gen_walsh(8, 1))
    np.testing.assert_array_equal(s, np.ones(8))


def test_noiseless_round_trip(rng):
    q = gen_walsh(1024, 132)
    x = qpsk_modulate(rng.integers(0, 2, 264))
    back = despread(spread(x, q)[None, :], q)[0]
    assert np.max(np.abs(back - x)) < 1e-12


def test_normalized_round_trip(rng):
    q = gen_walsh(256, 40)
    x = qpsk_modulate(rng.integers(0, 2, 80))
    s = spread(x, q, normalize=True)
    assert np.mean(np.abs(s) ** 2) == pytest.approx(1.0)
    np.testing.assert_allclose(despread(s[None, :], q, normalize=True)[0], x, atol=1e-12)


def test_energy(rng):
    q = gen_walsh(128, 20)
    x = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    assert np.sum(np.abs(spread(x, q)) ** 2) == pytest.approx(128 * np.sum(np.abs(x) ** 2))


def test_despread_rank_one(rng):
    q = gen_walsh(64, 10)
    x = qpsk_modulate(rng.integers(0, 2, 20))
    g = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    np.testing.assert_allclose(despread(np.outer(g, spread(x, q)), q), np.outer(g, x), atol=1e-12)
    np.testing.assert_array_equal(despread(np.zeros((4, 64)), q), np.zeros((4, 10)))


def test_dimension_errors():
    q = gen_walsh(8, 3)
    with pytest.raises(InvalidParameterError):
        spread(np.ones(4), q)
    with pytest.raises(InvalidParameterError):
        despread(np.ones((2, 4)), q)


def test_data_leakage_variance():
    """Despread QPSK data leaks |g_n|^2 / P per entry into each code."""
    rng = np.random.default_rng(8)
    p, l = 256, 4
    q = gen_walsh(p, l)
    g = np.array([1.0, 0.5 - 0.5j, 2.0j])
    acc = np.zeros((3, l))
    trials = 10_000
    for _ in range(trials):
        d = qpsk_modulate(rng.integers(0, 2, 2 * p))
        acc += np.abs(despread(np.outer(g, d), q)) ** 2
    measured = acc / trials
    expected = (np.abs(g) ** 2 / p)[:, None] * np.ones((1, l))
    np.testing.assert_allclose(measured, expected, rtol=0.10)
