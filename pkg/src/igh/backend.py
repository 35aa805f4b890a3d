"""Hot numeric kernels: numba-compiled fast path with a pure-numpy fallback.

The backend is selected once at import time from the ``IGH_BACKEND``
environment variable (``"numba"`` or ``"numpy"``); when unset, numba is used
if importable. ``set_backend`` rebinds the implementation at runtime, which
the benchmark suite and the fallback tests rely on.

All kernels are serial on purpose: results are bitwise reproducible across
runs and machines with the same backend, and the per-call work (a few 1e5-1e7
flop loops plus a small LAPACK eigensolve) does not amortize thread fan-out
at the dataset sizes this package targets.
"""

import math
import os

import numpy as np

from .errors import ConfigError

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_SQRT_2PI = math.sqrt(2.0 * math.pi)

ENV_VAR = "IGH_BACKEND"


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _pairwise_sq_dists_np(X):
    sq = np.einsum("ij,ij->i", X, X)
    D = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(D, 0.0, out=D)
    # BLAS does not guarantee a bitwise-symmetric product; restore symmetry.
    D = 0.5 * (D + D.T)
    np.fill_diagonal(D, 0.0)
    return D


def _cross_sq_dists_np(X, Y):
    sx = np.einsum("ij,ij->i", X, X)
    sy = np.einsum("ij,ij->i", Y, Y)
    D = sx[:, None] + sy[None, :] - 2.0 * (X @ Y.T)
    np.maximum(D, 0.0, out=D)
    return D


def _gaussian_of_sq_dists_np(D, sigma):
    peak = 1.0 / (sigma * _SQRT_2PI)
    return peak * np.exp(np.maximum(D, 0.0) * (-0.5 / (sigma * sigma)))


def _rank_update_sq_dists_np(SD, old, new):
    dn = new[:, None] - new[None, :]
    do = old[:, None] - old[None, :]
    SD += dn * dn - do * do


def _extend_from_cache_np(col, SD, obs, sigma, cutoff_delta):
    n = col.shape[0]
    diff = col[:, None] - col[obs][None, :]
    adj = SD[:, obs] - diff * diff
    np.maximum(adj, 0.0, out=adj)
    peak = 1.0 / (sigma * _SQRT_2PI)
    K = peak * np.exp(adj * (-0.5 / (sigma * sigma)))
    lam_asc, psi_asc = np.linalg.eigh(K[obs, :])
    lam1 = float(lam_asc[-1])
    if lam1 <= 0.0:
        return np.zeros(n), lam1, 0
    threshold = cutoff_delta * lam1
    kept = 0
    for value in lam_asc[::-1]:
        if value > 0.0 and value >= threshold:
            kept += 1
        else:
            break
    if kept == 0:
        return np.zeros(n), lam1, 0
    top = psi_asc[:, psi_asc.shape[1] - kept:]
    lam_top = lam_asc[lam_asc.shape[0] - kept:]
    coef = (top.T @ col[obs]) / lam_top
    return K @ (top @ coef), lam1, kept


_NUMPY_IMPL = {
    "pairwise_sq_dists": _pairwise_sq_dists_np,
    "cross_sq_dists": _cross_sq_dists_np,
    "gaussian_of_sq_dists": _gaussian_of_sq_dists_np,
    "rank_update_sq_dists": _rank_update_sq_dists_np,
    "extend_from_cache": _extend_from_cache_np,
}


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _pairwise_sq_dists_nb(X):
        n, d = X.shape
        D = np.zeros((n, n))
        for i in range(n):
            for m in range(i):
                s = 0.0
                for k in range(d):
                    t = X[i, k] - X[m, k]
                    s += t * t
                D[i, m] = s
                D[m, i] = s
        return D

    @njit(cache=True)
    def _cross_sq_dists_nb(X, Y):
        r, d = X.shape
        c = Y.shape[0]
        D = np.empty((r, c))
        for i in range(r):
            for m in range(c):
                s = 0.0
                for k in range(d):
                    t = X[i, k] - Y[m, k]
                    s += t * t
                D[i, m] = s
        return D

    @njit(cache=True)
    def _gaussian_of_sq_dists_nb(D, sigma):
        peak = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
        inv = 0.5 / (sigma * sigma)
        out = np.empty_like(D)
        for i in range(D.shape[0]):
            for m in range(D.shape[1]):
                s = D[i, m]
                if s < 0.0:
                    s = 0.0
                out[i, m] = peak * math.exp(-s * inv)
        return out

    @njit(cache=True)
    def _rank_update_sq_dists_nb(SD, old, new):
        n = SD.shape[0]
        for i in range(n):
            for m in range(n):
                dn = new[i] - new[m]
                do = old[i] - old[m]
                SD[i, m] += dn * dn - do * do

    @njit(cache=True)
    def _extend_from_cache_nb(col, SD, obs, sigma, cutoff_delta):
        n = col.shape[0]
        m = obs.shape[0]
        peak = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
        inv = 0.5 / (sigma * sigma)
        K = np.empty((n, m))
        for i in range(n):
            ci = col[i]
            for a in range(m):
                o = obs[a]
                t = ci - col[o]
                s = SD[i, o] - t * t
                if s < 0.0:
                    s = 0.0
                K[i, a] = peak * math.exp(-s * inv)
        KAA = np.empty((m, m))
        for a in range(m):
            row = obs[a]
            for b in range(m):
                KAA[a, b] = K[row, b]
        lam_asc, psi_asc = np.linalg.eigh(KAA)
        lam1 = lam_asc[m - 1]
        if lam1 <= 0.0:
            return np.zeros(n), lam1, 0
        threshold = cutoff_delta * lam1
        kept = 0
        for idx in range(m - 1, -1, -1):
            value = lam_asc[idx]
            if value > 0.0 and value >= threshold:
                kept += 1
            else:
                break
        if kept == 0:
            return np.zeros(n), lam1, 0
        weights = np.zeros(m)
        for idx in range(m - 1, m - 1 - kept, -1):
            coef = 0.0
            for a in range(m):
                coef += psi_asc[a, idx] * col[obs[a]]
            coef /= lam_asc[idx]
            for a in range(m):
                weights[a] += coef * psi_asc[a, idx]
        ghat = np.zeros(n)
        for i in range(n):
            s = 0.0
            for a in range(m):
                s += K[i, a] * weights[a]
            ghat[i] = s
        return ghat, lam1, kept

    _NUMBA_IMPL = {
        "pairwise_sq_dists": _pairwise_sq_dists_nb,
        "cross_sq_dists": _cross_sq_dists_nb,
        "gaussian_of_sq_dists": _gaussian_of_sq_dists_nb,
        "rank_update_sq_dists": _rank_update_sq_dists_nb,
        "extend_from_cache": _extend_from_cache_nb,
    }


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

_IMPLS = {"numpy": _NUMPY_IMPL}
if HAS_NUMBA:
    _IMPLS["numba"] = _NUMBA_IMPL

_active_name = None
_active = _NUMPY_IMPL


def available_backends():
    return tuple(sorted(_IMPLS))


def active_backend():
    return _active_name


def set_backend(name):
    """Select the kernel implementation set; returns the previous name."""
    global _active_name, _active
    if name not in _IMPLS:
        raise ConfigError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}"
        )
    previous = _active_name
    _active_name = name
    _active = _IMPLS[name]
    return previous


def _default_backend():
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env:
        if env not in _IMPLS:
            raise ConfigError(
                f"{ENV_VAR}={env!r} not available; choose from {', '.join(available_backends())}"
            )
        return env
    return "numba" if HAS_NUMBA else "numpy"


set_backend(_default_backend())


def _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def pairwise_sq_dists(X):
    """Full matrix of squared Euclidean distances between rows of ``X``."""
    return _active["pairwise_sq_dists"](_as_f64(X))


def cross_sq_dists(X, Y):
    """Squared Euclidean distances between rows of ``X`` and rows of ``Y``."""
    return _active["cross_sq_dists"](_as_f64(X), _as_f64(Y))


def gaussian_of_sq_dists(D, sigma):
    """Elementwise Gaussian kernel value from squared distances."""
    return _active["gaussian_of_sq_dists"](_as_f64(D), float(sigma))


def rank_update_sq_dists(SD, old_col, new_col):
    """In-place update of a squared-distance cache after one column change."""
    _active["rank_update_sq_dists"](SD, _as_f64(old_col), _as_f64(new_col))


def extend_from_cache(col, SD, obs, sigma, cutoff_delta):
    """One column extension driven by a shared squared-distance cache.

    ``SD`` holds pairwise squared distances over all columns of the working
    matrix; the contribution of ``col`` is subtracted entry-by-entry, so the
    kernel acts on the matrix with that column removed. Returns
    ``(ghat, lambda_max, kept)`` where ``kept == 0`` flags an unusable
    spectrum and leaves ``ghat`` meaningless.
    """
    obs = np.ascontiguousarray(obs, dtype=np.int64)
    return _active["extend_from_cache"](
        _as_f64(col), SD, obs, float(sigma), float(cutoff_delta)
    )
