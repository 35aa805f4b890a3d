"""Error and convergence measurement: dimension-scaled L2 error, trial
ensemble statistics, and the mixed L2 + graph-energy norm."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class TrialEnsemble:
    """Per-trial, per-iteration error curves for one experiment cell.

    Rows of ``errors_by_iteration`` are independent seeded trials; ``p`` is
    the annihilation rate the trials share; ``config_digest`` ties the
    ensemble back to the exact configuration that produced it.
    """

    errors_by_iteration: np.ndarray
    p: float
    config_digest: str


def l2_error(original, imputed):
    """Frobenius discrepancy scaled by the square root of the column count."""
    original = np.asarray(original, dtype=np.float64)
    imputed = np.asarray(imputed, dtype=np.float64)
    if original.shape != imputed.shape:
        raise DimensionError(
            f"shape mismatch: {original.shape} vs {imputed.shape}"
        )
    if original.size == 0:
        return 0.0
    d = original.shape[1]
    return float(np.linalg.norm(original - imputed) / np.sqrt(d))


def ensemble_stats(ensemble):
    """Column-wise mean and unbiased std-dev across trials.

    With a single trial the standard deviation is reported as None (absent),
    not zero.
    """
    errors = np.asarray(ensemble.errors_by_iteration, dtype=np.float64)
    if errors.ndim != 2:
        raise DimensionError(f"expected trials x iterations, got shape {errors.shape}")
    mean = errors.mean(axis=0)
    if errors.shape[0] < 2:
        return mean, None
    return mean, errors.std(axis=0, ddof=1)


def graph_energy(f, weights, exclude):
    """Dirichlet energy over edges with at least one endpoint outside ``exclude``.

    ``weights`` is a square Gram block over all rows; the energy is half the
    sum of W(i, k) * (f(i) - f(k))^2 over ordered pairs where i or k lies
    outside the excluded id-list.
    """
    f = np.asarray(f, dtype=np.float64)
    W = np.asarray(weights.values, dtype=np.float64)
    n = f.shape[0]
    if W.shape != (n, n):
        raise DimensionError(f"weight block shape {W.shape} does not match n={n}")
    diff = f[:, None] - f[None, :]
    contributions = W * diff * diff
    total = 0.5 * float(contributions.sum())
    inside = np.asarray(exclude, dtype=np.int64)
    if inside.size:
        block = contributions[np.ix_(inside, inside)]
        total -= 0.5 * float(block.sum())
    return max(total, 0.0)


def mixed_norm(f, weights, sample_ids):
    """L2 norm on the sampled rows plus graph energy on their complement."""
    f = np.asarray(f, dtype=np.float64)
    ids = np.asarray(sample_ids, dtype=np.int64)
    l2_part = float(np.sqrt(np.sum(f[ids] ** 2)))
    return l2_part + graph_energy(f, weights, ids)
