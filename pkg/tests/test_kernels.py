"""The compiled kernels and the numpy fallback implement the same contract."""
import numpy as np
import pytest

from warpft import _backend, _fallback

compiled = _backend.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


@pytest.fixture
def data(rng):
    src = np.sort(rng.uniform(-8, 8, 300))
    tgt = np.sort(rng.uniform(-6, 6, 70))
    coef = rng.normal(size=300) + 1j * rng.normal(size=300)
    return src, tgt, coef


@pytest.mark.parametrize("impl", [_fallback, compiled], ids=["python", "cython"])
def test_oscillatory_sum_matches_matrix_product(impl, data):
    if impl is None:
        pytest.skip("extension not built")
    src, tgt, coef = data
    for sign in (1, -1):
        ref = np.exp(1j * sign * np.outer(tgt, src)) @ coef
        out = _backend.oscillatory_sum(src, tgt, coef, sign, impl=impl)
        assert np.max(np.abs(out - ref)) < 1e-12


@pytest.mark.parametrize("impl", [_fallback, compiled], ids=["python", "cython"])
def test_gaussian_sum_matches_matrix_product(impl, data):
    if impl is None:
        pytest.skip("extension not built")
    src, tgt, coef = data
    ref = np.exp(-((tgt[:, None] - src[None, :]) ** 2) / (2 * 0.7)) @ coef.real
    out = _backend.gaussian_sum(src, tgt, coef.real, 0.7, impl=impl)
    assert np.max(np.abs(out - ref)) < 1e-12


@needs_compiled
def test_backends_agree(data):
    src, tgt, coef = data
    a = _backend.oscillatory_sum(src, tgt, coef, 1, impl=compiled)
    b = _backend.oscillatory_sum(src, tgt, coef, 1, impl=_fallback)
    assert np.max(np.abs(a - b)) < 1e-13


@needs_compiled
@pytest.mark.parametrize("threads", [2, 3, 8])
def test_thread_count_is_bitwise_invisible(data, threads):
    src, tgt, coef = data
    serial = _backend.oscillatory_sum(src, tgt, coef, 1, threads=1, impl=compiled)
    parallel = _backend.oscillatory_sum(src, tgt, coef, 1, threads=threads, impl=compiled)
    assert np.array_equal(serial, parallel)
    g1 = _backend.gaussian_sum(src, tgt, coef.real, 0.3, threads=1, impl=compiled)
    g2 = _backend.gaussian_sum(src, tgt, coef.real, 0.3, threads=threads, impl=compiled)
    assert np.array_equal(g1, g2)


@pytest.mark.parametrize("impl", [_fallback, compiled], ids=["python", "cython"])
def test_compensation_beats_naive_sum(impl):
    if impl is None:
        pytest.skip("extension not built")
    # 1 + many tiny terms: compensated result keeps the tail
    src = np.zeros(10001)
    coef = np.full(10001, 1e-16, dtype=complex)
    coef[0] = 1.0
    out = _backend.oscillatory_sum(src, np.array([0.0]), coef, 1, impl=impl)
    assert out[0].real == 1.0 + 1e-12
