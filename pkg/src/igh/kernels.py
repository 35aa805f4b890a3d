"""Gaussian kernel evaluation, Gram blocks, and restricted eigensystems."""

from dataclasses import dataclass, replace

import numpy as np

from . import backend
from .errors import (
    ConfigError,
    ContractError,
    DataInvariantError,
    DegenerateKernelError,
    DimensionError,
)

GAUSSIAN = "gaussian"
MEDIAN_PAIRWISE = "median-pairwise-distance"
DEFAULT_CUTOFF_DELTA = 1e-6

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth and eigenvalue-cutoff configuration.

    ``sigma`` may be left unset, in which case the bandwidth is resolved on
    demand from data via ``bandwidth_rule``. ``cutoff_delta`` is the relative
    eigenvalue threshold below which modes are discarded to keep the
    1/lambda amplification in the extension bounded.
    """

    family: str = GAUSSIAN
    sigma: float | None = None
    bandwidth_rule: str = MEDIAN_PAIRWISE
    cutoff_delta: float = DEFAULT_CUTOFF_DELTA

    def __post_init__(self):
        if self.family != GAUSSIAN:
            raise ConfigError(f"unsupported kernel family {self.family!r}")
        if self.sigma is not None and not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if self.bandwidth_rule != MEDIAN_PAIRWISE:
            raise ConfigError(f"unsupported bandwidth rule {self.bandwidth_rule!r}")
        if not 0.0 <= self.cutoff_delta < 1.0:
            raise ConfigError(
                f"cutoff_delta must lie in [0, 1), got {self.cutoff_delta}"
            )

    @property
    def resolved(self):
        return self.sigma is not None

    def with_sigma(self, sigma):
        return replace(self, sigma=float(sigma))


@dataclass(frozen=True)
class GramBlock:
    """Rectangular block of kernel evaluations between two row subsets."""

    values: np.ndarray
    row_index: np.ndarray
    col_index: np.ndarray

    @property
    def is_square_same(self):
        return (
            self.row_index.shape == self.col_index.shape
            and bool(np.all(self.row_index == self.col_index))
        )


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of a restricted Gram block, sorted by descending eigenvalue.

    The first ``kept_count`` pairs survive the relative cutoff; the rest are
    retained for inspection but must not be used for extension.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kept_count: int

    @property
    def kept_eigenvalues(self):
        return self.eigenvalues[: self.kept_count]

    @property
    def kept_eigenvectors(self):
        return self.eigenvectors[:, : self.kept_count]


def _require_resolved(spec):
    if not spec.resolved:
        raise ConfigError("kernel bandwidth is unresolved; call resolve_bandwidth first")


def kernel_value(x, y, spec):
    """Gaussian kernel with density normalization: peak value 1/(sigma*sqrt(2*pi))."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"vector lengths differ: {x.shape} vs {y.shape}")
    _require_resolved(spec)
    sq = float(np.sum((x - y) ** 2))
    sigma = spec.sigma
    peak = 1.0 / (sigma * np.sqrt(2.0 * np.pi))
    return float(peak * np.exp(-0.5 * sq / (sigma * sigma)))


def resolve_bandwidth(X, spec):
    """Explicit sigma when present, else the median pairwise row distance."""
    if spec.resolved:
        return float(spec.sigma)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {X.shape}")
    n = X.shape[0]
    if n < 2:
        raise DataInvariantError(
            f"bandwidth resolution needs at least 2 rows, got {n}"
        )
    sq = backend.pairwise_sq_dists(X)
    iu = np.triu_indices(n, k=1)
    median = float(np.median(np.sqrt(sq[iu])))
    if median <= 0.0:
        raise DataInvariantError("median pairwise distance is zero (identical rows)")
    return median


def gram_block(X, rows, cols, spec):
    """Kernel evaluations between the ``rows`` and ``cols`` subsets of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    n = X.shape[0]
    for ids in (rows, cols):
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise IndexError(f"row id out of range for matrix with {n} rows")
    _require_resolved(spec)
    sq = backend.cross_sq_dists(X[rows], X[cols])
    values = backend.gaussian_of_sq_dists(sq, spec.sigma)
    if rows.shape == cols.shape and np.array_equal(rows, cols):
        values = 0.5 * (values + values.T)
    return GramBlock(values=values, row_index=rows, col_index=cols)


def restricted_eigensystem(block, cutoff_delta):
    """Dense symmetric eigendecomposition of a square Gram block.

    Eigenpairs come back sorted by descending eigenvalue with a deterministic
    sign convention (largest-magnitude entry of each vector made positive).
    ``kept_count`` marks how many leading pairs satisfy
    ``lambda >= cutoff_delta * lambda_max`` and ``lambda > 0``.
    """
    K = np.asarray(block.values, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ContractError(f"expected a square block, got shape {K.shape}")
    if not block.is_square_same:
        raise ContractError("restricted eigensystem needs row_index == col_index")
    scale = max(1.0, float(np.max(np.abs(K))) if K.size else 0.0)
    if float(np.max(np.abs(K - K.T))) > _SYMMETRY_TOL * scale:
        raise ContractError("block is not symmetric within tolerance")
    if not 0.0 <= cutoff_delta < 1.0:
        raise ConfigError(f"cutoff_delta must lie in [0, 1), got {cutoff_delta}")

    lam, vec = np.linalg.eigh(0.5 * (K + K.T))
    lam = lam[::-1].copy()
    vec = vec[:, ::-1].copy()
    for ell in range(vec.shape[1]):
        pivot = int(np.argmax(np.abs(vec[:, ell])))
        if vec[pivot, ell] < 0.0:
            vec[:, ell] = -vec[:, ell]
    lam1 = float(lam[0])
    if lam1 <= 0.0:
        raise DegenerateKernelError(
            f"largest eigenvalue is {lam1}; kernel block is degenerate",
            lambda_max=lam1,
            cutoff_delta=cutoff_delta,
        )
    kept = int(np.sum((lam > 0.0) & (lam >= cutoff_delta * lam1)))
    return EigenSystem(eigenvalues=lam, eigenvectors=vec, kept_count=kept)
