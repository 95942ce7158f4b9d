from fractions import Fraction

import numpy as np
import pytest

from bellscope import kernels
from bellscope.catalog import evaluate, family
from bellscope.core import is_no_signaling, project_expectations, signaling_gap, validate_behavior
from bellscope.sampling import (
    GENERAL_DENOMINATOR,
    integer_coefficients,
    ns_vertex_matrix,
    sample_general,
    sample_no_signaling,
    violations,
)


@pytest.fixture
def numpy_only(monkeypatch):
    monkeypatch.setenv("BELLSCOPE_DISABLE_NUMBA", "1")
    assert not kernels.numba_enabled()


def test_env_flag(monkeypatch):
    monkeypatch.delenv("BELLSCOPE_DISABLE_NUMBA", raising=False)
    assert kernels.numba_enabled() == (kernels.numba is not None)
    monkeypatch.setenv("BELLSCOPE_DISABLE_NUMBA", "true")
    assert not kernels.numba_enabled()


def _all_kernels(batch, C):
    return (kernels.eval_batch(C, batch.nums), kernels.project_batch(batch.nums),
            kernels.ns_gap_batch(batch.nums))


def test_numba_matches_numpy(monkeypatch):
    rng = np.random.default_rng(0)
    g = sample_general(300, rng)
    C, _ = integer_coefficients(family("ns6"))
    monkeypatch.delenv("BELLSCOPE_DISABLE_NUMBA", raising=False)
    fast = _all_kernels(g, C)
    monkeypatch.setenv("BELLSCOPE_DISABLE_NUMBA", "1")
    slow = _all_kernels(g, C)
    for a, b in zip(fast, slow):
        assert a.dtype == np.int64 and np.array_equal(a, b)


@pytest.mark.parametrize("mode", ["numba", "numpy"])
def test_kernels_match_fraction_oracle(mode, monkeypatch):
    if mode == "numpy":
        monkeypatch.setenv("BELLSCOPE_DISABLE_NUMBA", "1")
    rng = np.random.default_rng(1)
    batch = sample_no_signaling(20, rng)
    qs = list(family("ns4"))
    C, _ = integer_coefficients(qs)
    lhs = kernels.eval_batch(C, batch.nums)
    proj = kernels.project_batch(batch.nums)
    gaps = kernels.ns_gap_batch(batch.nums)
    for i, b in enumerate(batch.behaviors()):
        d = Fraction(int(batch.dens[i]))
        assert [Fraction(int(x)) / d for x in lhs[i]] == [evaluate(q, b).value for q in qs]
        assert tuple(Fraction(int(x)) / d for x in proj[i]) == project_expectations(b).components()
        assert Fraction(int(gaps[i])) / d == signaling_gap(b) == 0


def test_samples_are_valid():
    rng = np.random.default_rng(2)
    g = sample_general(50, rng)
    assert (g.nums >= 0).all()
    assert (g.nums.reshape(50, 4, 4).sum(axis=2) == GENERAL_DENOMINATOR).all()
    for b in g.behaviors()[:10]:
        assert validate_behavior(b).ok
    n = sample_no_signaling(50, rng)
    for b in n.behaviors()[:10]:
        assert validate_behavior(b).ok and is_no_signaling(b).ok


def test_seed_reproducible():
    a = sample_general(5, np.random.default_rng(9))
    b = sample_general(5, np.random.default_rng(9))
    assert np.array_equal(a.nums, b.nums)


def test_mix_zero_weights_guard():
    n = sample_no_signaling(2, None, weights=np.zeros((2, 24), dtype=np.int64))
    assert (n.dens == 2).all()


def test_violations_found_on_signaling_vertices():
    from bellscope.sampling import Batch
    from bellscope.polytopes import signaling_protocol_6

    b = signaling_protocol_6()
    batch = Batch(np.array([[int(x) for x in b.p]], dtype=np.int64), np.array([1]))
    assert (0, 0) in [(int(i), int(j)) for i, j in violations([family("ns6")[2]], batch)]


def test_overflow_guard():
    big = np.full((1, 16), 2**58, dtype=np.int64)
    with pytest.raises(OverflowError):
        kernels.eval_batch(np.ones((1, 16), dtype=np.int64) * 4, big)


def test_float_input_rejected():
    with pytest.raises(TypeError):
        kernels.eval_batch(np.ones((1, 16)), np.ones((1, 16)))


def test_vertex_matrix():
    V = ns_vertex_matrix()
    assert V.shape == (24, 16) and (V.reshape(24, 4, 4).sum(axis=2) == 2).all()
