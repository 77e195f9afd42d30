"""Backend dispatch and numba/numpy agreement for the batched kernels."""

import math

import numpy as np
import pytest

from indiv_probe import ConfigError, active_backend, consecutive_profile, distance_stack
from indiv_probe import kernels
from indiv_probe.kernels import BACKEND_ENV, HAVE_NUMBA

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")

SHAPES = [(1, 2, 2), (3, 10, 16), (7, 4, 1), (2, 9, 33)]


def _stacks():
    rng = np.random.default_rng(1234)
    return [rng.normal(size=shape) for shape in SHAPES]


def test_active_backend_resolution(monkeypatch):
    monkeypatch.delenv(BACKEND_ENV, raising=False)
    assert active_backend("numpy") == "numpy"
    assert active_backend() == ("numba" if HAVE_NUMBA else "numpy")
    monkeypatch.setenv(BACKEND_ENV, "numpy")
    assert active_backend() == "numpy"
    # explicit argument beats the environment
    assert active_backend("auto") == ("numba" if HAVE_NUMBA else "numpy")
    monkeypatch.setenv(BACKEND_ENV, "bogus")
    with pytest.raises(ConfigError):
        active_backend()
    with pytest.raises(ConfigError):
        active_backend("blas")


def test_numba_request_without_numba(monkeypatch):
    monkeypatch.setattr(kernels, "HAVE_NUMBA", False)
    assert active_backend("auto") == "numpy"
    with pytest.raises(ConfigError):
        active_backend("numba")


@needs_numba
@pytest.mark.parametrize("fn", [distance_stack, consecutive_profile])
def test_backends_agree(fn):
    for stack in _stacks():
        a = fn(stack, backend="numba")
        b = fn(stack, backend="numpy")
        assert a.shape == b.shape
        assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("backend", ["numpy"] + (["numba"] if HAVE_NUMBA else []))
def test_backends_are_deterministic(backend):
    stack = _stacks()[1]
    first = distance_stack(stack, backend=backend)
    second = distance_stack(stack, backend=backend)
    assert first.tobytes() == second.tobytes()
    assert (
        consecutive_profile(stack, backend=backend).tobytes()
        == consecutive_profile(stack, backend=backend).tobytes()
    )


@pytest.mark.parametrize("backend", ["numpy"] + (["numba"] if HAVE_NUMBA else []))
def test_distance_stack_invariants(backend):
    for stack in _stacks():
        out = distance_stack(stack, backend=backend)
        k, q, _ = stack.shape
        assert out.shape == (k, q, q)
        assert np.array_equal(out, out.transpose(0, 2, 1))
        assert np.all(np.diagonal(out, axis1=1, axis2=2) == 0.0)
        assert np.all(out >= 0.0)
        assert np.all(out <= 2.0)


def test_distance_stack_matches_scalar_reference():
    # one noun, three planar unit vectors at known angles
    angles = [0.0, 0.3, 1.1]
    stack = np.array([[[math.cos(a), math.sin(a)] for a in angles]])
    out = distance_stack(stack, backend="numpy")
    for i, ai in enumerate(angles):
        for j, aj in enumerate(angles):
            assert out[0, i, j] == pytest.approx(1.0 - math.cos(ai - aj), abs=1e-14)


@pytest.mark.parametrize("backend", ["numpy"] + (["numba"] if HAVE_NUMBA else []))
def test_consecutive_profile_matches_pairwise_cosine(backend):
    from indiv_probe import cosine_similarity

    stack = _stacks()[1]
    out = consecutive_profile(stack, backend=backend)
    k, q, _ = stack.shape
    assert out.shape == (k, q - 1)
    for t in range(k):
        for i in range(q - 1):
            expected = cosine_similarity(stack[t, i], stack[t, i + 1])
            assert out[t, i] == pytest.approx(expected, abs=1e-12)
    assert np.all(out >= -1.0)
    assert np.all(out <= 1.0)


def test_shape_validation():
    with pytest.raises(ConfigError):
        distance_stack(np.zeros((3, 4)))
    with pytest.raises(ConfigError):
        consecutive_profile(np.ones((2, 1, 4)))
