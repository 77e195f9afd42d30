"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The two batched kernels below dominate runtime on full-size lexicons
(tens of thousands of nouns x ~10 quantities x model dimension):

* ``distance_stack``          -- per-noun pairwise cosine-distance matrices
* ``consecutive_profile``     -- per-noun cosine similarities of adjacent
                                 quantities (feeds the individuation proxy)

Backend selection: the env var ``INDIV_PROBE_BACKEND`` may be ``auto``
(default: numba when importable), ``numba``, or ``numpy``; every public
function also takes an explicit ``backend=`` override, which is what the
benchmark and the equivalence tests use. Both backends compute each
noun's block independently with deterministic arithmetic, so results do
not depend on worker counts. numba kernels deliberately avoid fastmath:
bit-reproducibility matters more here than the last few percent.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ConfigError

__all__ = ["distance_stack", "consecutive_profile", "active_backend", "BACKEND_ENV"]

BACKEND_ENV = "INDIV_PROBE_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def active_backend(backend: str | None = None) -> str:
    """Resolve a backend name ('numba' or 'numpy')."""
    choice = backend or os.environ.get(BACKEND_ENV, "auto").lower()
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice not in ("numba", "numpy"):
        raise ConfigError(f"unknown backend {choice!r} (use auto, numba, or numpy)")
    if choice == "numba" and not HAVE_NUMBA:
        raise ConfigError("numba backend requested but numba is not importable")
    return choice


def _as_stack(vecs) -> np.ndarray:
    v = np.ascontiguousarray(vecs, dtype=np.float64)
    if v.ndim != 3:
        raise ConfigError(f"expected a (nouns, quantities, dim) stack, got shape {v.shape}")
    return v


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _distance_stack_nb(vecs):  # pragma: no cover - exercised via dispatch
    k, q, d = vecs.shape
    out = np.empty((k, q, q), dtype=np.float64)
    norms = np.empty(q, dtype=np.float64)
    for t in range(k):
        for i in range(q):
            s = 0.0
            for a in range(d):
                s += vecs[t, i, a] * vecs[t, i, a]
            norms[i] = np.sqrt(s)
        for i in range(q):
            out[t, i, i] = 0.0
            for j in range(i + 1, q):
                dot = 0.0
                for a in range(d):
                    dot += vecs[t, i, a] * vecs[t, j, a]
                sim = dot / (norms[i] * norms[j])
                if sim > 1.0:
                    sim = 1.0
                elif sim < -1.0:
                    sim = -1.0
                dist = 1.0 - sim
                out[t, i, j] = dist
                out[t, j, i] = dist
    return out


@njit(cache=True, nogil=True)
def _consecutive_profile_nb(vecs):  # pragma: no cover - exercised via dispatch
    k, q, d = vecs.shape
    out = np.empty((k, q - 1), dtype=np.float64)
    for t in range(k):
        for i in range(q - 1):
            dot = 0.0
            ni = 0.0
            nj = 0.0
            for a in range(d):
                dot += vecs[t, i, a] * vecs[t, i + 1, a]
                ni += vecs[t, i, a] * vecs[t, i, a]
                nj += vecs[t, i + 1, a] * vecs[t, i + 1, a]
            sim = dot / (np.sqrt(ni) * np.sqrt(nj))
            if sim > 1.0:
                sim = 1.0
            elif sim < -1.0:
                sim = -1.0
            out[t, i] = sim
    return out


# --------------------------------------------------------------------------
# numpy fallbacks
# --------------------------------------------------------------------------

def _distance_stack_np(vecs: np.ndarray) -> np.ndarray:
    k, q, _ = vecs.shape
    norms = np.sqrt(np.einsum("kqd,kqd->kq", vecs, vecs))
    gram = np.einsum("kid,kjd->kij", vecs, vecs)
    gram /= norms[:, :, None] * norms[:, None, :]
    np.clip(gram, -1.0, 1.0, out=gram)
    dist = 1.0 - gram
    # mirror the upper triangle: exact symmetry regardless of BLAS blocking
    iu = np.triu_indices(q, k=1)
    out = np.zeros_like(dist)
    out[:, iu[0], iu[1]] = dist[:, iu[0], iu[1]]
    out[:, iu[1], iu[0]] = dist[:, iu[0], iu[1]]
    return out


def _consecutive_profile_np(vecs: np.ndarray) -> np.ndarray:
    a = vecs[:, :-1, :]
    b = vecs[:, 1:, :]
    dots = np.einsum("kqd,kqd->kq", a, b)
    na = np.sqrt(np.einsum("kqd,kqd->kq", a, a))
    nb = np.sqrt(np.einsum("kqd,kqd->kq", b, b))
    sims = dots / (na * nb)
    np.clip(sims, -1.0, 1.0, out=sims)
    return sims


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def distance_stack(vecs, backend: str | None = None) -> np.ndarray:
    """(K, Q, D) vector stack -> (K, Q, Q) cosine-distance matrices.

    Each noun's matrix is symmetric with a zero diagonal; entries are
    1 - cos similarity, clamped so they always land in [0, 2].
    """
    v = _as_stack(vecs)
    if active_backend(backend) == "numba":
        return _distance_stack_nb(v)
    return _distance_stack_np(v)


def consecutive_profile(vecs, backend: str | None = None) -> np.ndarray:
    """(K, Q, D) vector stack -> (K, Q-1) adjacent-quantity similarities.

    Column i holds cos(v[q_i], v[q_{i+1}]), clamped to [-1, 1].
    """
    v = _as_stack(vecs)
    if v.shape[1] < 2:
        raise ConfigError("need at least two quantities for a similarity profile")
    if active_backend(backend) == "numba":
        return _consecutive_profile_nb(v)
    return _consecutive_profile_np(v)
