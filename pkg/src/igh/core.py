"""The iteration engine: stochastic initialization, per-column kernel
extension, and shuffled column sweeps over the working matrix."""

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .errors import (
    ConditioningError,
    ConditioningWarning,
    DataInvariantError,
    DegenerateKernelError,
    DimensionError,
)
from .kernels import KernelSpec, gram_block, resolve_bandwidth, restricted_eigensystem

# Labeled sub-streams of the root seed. The initialization draws and each
# iteration's permutation come from independent streams, so traces stay
# reproducible even when early stopping changes how much randomness is used.
_INIT_STREAM = 0
_PERM_STREAM = 1


@dataclass
class Dataset:
    """An n-by-d value matrix paired with an observedness mask.

    ``mask[i, j]`` is True where the value is observed. Missing slots of
    ``values`` hold an arbitrary sentinel (conventionally NaN) and are never
    read as data.
    """

    values: np.ndarray
    mask: np.ndarray
    column_names: list | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.values.ndim != 2:
            raise DimensionError(f"values must be 2-d, got shape {self.values.shape}")
        if self.mask.shape != self.values.shape:
            raise DimensionError(
                f"mask shape {self.mask.shape} != values shape {self.values.shape}"
            )
        if self.column_names is not None and len(self.column_names) != self.values.shape[1]:
            raise DimensionError("column_names length does not match column count")

    @property
    def n_rows(self):
        return self.values.shape[0]

    @property
    def n_cols(self):
        return self.values.shape[1]

    @property
    def n_missing(self):
        return int(np.sum(~self.mask))

    def copy(self):
        names = list(self.column_names) if self.column_names is not None else None
        return Dataset(self.values.copy(), self.mask.copy(), names)

    def validate(self):
        """Raise unless every row and every column has an observed entry."""
        rows, cols = degenerate_axes(self.mask)
        if rows.size or cols.size:
            raise DataInvariantError(
                "dataset has fully-missing rows/columns: "
                f"rows={rows.tolist()} cols={cols.tolist()}",
                rows=rows,
                cols=cols,
            )
        return self


def degenerate_axes(mask):
    """Indices of fully-missing rows and columns of an observedness mask."""
    mask = np.asarray(mask, dtype=bool)
    rows = np.flatnonzero(~mask.any(axis=1))
    cols = np.flatnonzero(~mask.any(axis=0))
    return rows, cols


@dataclass(frozen=True)
class IghConfig:
    kernel: KernelSpec = field(default_factory=KernelSpec)
    iterations: int = 10
    tolerance: float = 0.0
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.iterations < 1:
            raise DataInvariantError(f"iterations must be >= 1, got {self.iterations}")
        if self.tolerance < 0:
            raise DataInvariantError(f"tolerance must be >= 0, got {self.tolerance}")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    relative_change: float
    wall_time: float
    permutation_seed_state: str


@dataclass
class IterationTrace:
    per_iteration: list
    imputed_history: list | None = None


@dataclass(frozen=True)
class HarmonicsBasis:
    """Extension basis for one column: eigenpairs on the sampled rows plus
    the extended functions evaluated on every row (columns of ``functions``)."""

    eigen: object
    functions: np.ndarray
    sample_ids: np.ndarray


def stochastic_init(data, seed):
    """Fill missing slots with draws matched to each column's observed moments.

    Observed entries are copied verbatim. Missing entries of column j are
    i.i.d. normal with the column's observed sample mean and unbiased sample
    variance (variance 0 when only one entry is observed).
    """
    values = data.values
    mask = data.mask
    out = values.copy()
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_INIT_STREAM,)))
    for j in range(data.n_cols):
        observed = mask[:, j]
        count = int(observed.sum())
        if count == 0:
            raise DataInvariantError(
                f"column {j} has no observed entries and cannot be imputed", cols=[j]
            )
        holes = int(observed.size - count)
        if holes == 0:
            continue
        sample = values[observed, j]
        mean = float(sample.mean())
        std = float(sample.std(ddof=1)) if count >= 2 else 0.0
        out[~observed, j] = rng.normal(mean, std, size=holes)
    return out


def _resolved_spec(working, spec):
    if spec.resolved:
        return spec
    return spec.with_sigma(resolve_bandwidth(working, spec))


def geometric_harmonics(working, j, sample_ids, spec):
    """Eigenpairs of the restricted Gram block and their Nystrom extension.

    The kernel acts on the working matrix with column ``j`` removed. Each
    kept eigenvector psi_l on the sampled rows extends to all rows as
    K(i, m) psi_l(m) summed over sampled m, divided by lambda_l.
    """
    working = np.asarray(working, dtype=np.float64)
    sample_ids = np.asarray(sample_ids, dtype=np.int64)
    if sample_ids.size == 0:
        raise DataInvariantError(f"column {j} has an empty sample set", cols=[j])
    spec = _resolved_spec(working, spec)
    predictors = np.delete(working, j, axis=1)
    k_aa = gram_block(predictors, sample_ids, sample_ids, spec)
    all_rows = np.arange(working.shape[0], dtype=np.int64)
    k_rect = gram_block(predictors, all_rows, sample_ids, spec)
    try:
        eigen = restricted_eigensystem(k_aa, spec.cutoff_delta)
    except DegenerateKernelError as err:
        raise ConditioningError(
            f"column {j}: {err}",
            lambda_max=err.lambda_max,
            cutoff_delta=spec.cutoff_delta,
        ) from err
    if eigen.kept_count == 0:
        raise ConditioningError(
            f"column {j}: every eigenvalue fell below the cutoff",
            lambda_max=float(eigen.eigenvalues[0]),
            cutoff_delta=spec.cutoff_delta,
        )
    functions = k_rect.values @ (eigen.kept_eigenvectors / eigen.kept_eigenvalues)
    return HarmonicsBasis(eigen=eigen, functions=functions, sample_ids=sample_ids)


def extend_column(working, j, sample_ids, spec):
    """Extend column ``j`` from its sampled rows to every row.

    Returns the extension evaluated at all rows, observed or not: the sum of
    extended eigenfunctions weighted by the column's inner products with the
    restricted eigenvectors.
    """
    basis = geometric_harmonics(working, j, sample_ids, spec)
    gamma = np.asarray(working, dtype=np.float64)[basis.sample_ids, j]
    coefficients = basis.eigen.kept_eigenvectors.T @ gamma
    return basis.functions @ coefficients


def update_operator_apply(working, j, sample_ids, spec, v):
    """Apply the linear column-update operator to an arbitrary n-vector.

    The operator restricts ``v`` to the sampled rows, projects onto the
    restricted eigenvectors, and rebuilds via the extended functions;
    applying it to the column itself reproduces ``extend_column``.
    """
    working = np.asarray(working, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (working.shape[0],):
        raise DimensionError(
            f"operand must have length {working.shape[0]}, got shape {v.shape}"
        )
    basis = geometric_harmonics(working, j, sample_ids, spec)
    coefficients = basis.eigen.kept_eigenvectors.T @ v[basis.sample_ids]
    return basis.functions @ coefficients


def _permutation_for(seed, iteration, n_cols, shuffle):
    if not shuffle:
        return np.arange(n_cols), "identity"
    rng = np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(_PERM_STREAM, iteration))
    )
    return rng.permutation(n_cols), f"perm[{seed}:{iteration}]"


def igh_run(data, config, on_iteration=None, track_columns=None):
    """Run the full iterated imputation and return (imputed matrix, trace).

    Missing slots are stochastically initialized, then refreshed column by
    column in a (shuffled) sweep per iteration; observed entries are never
    written. A column whose restricted spectrum degenerates is skipped for
    that sweep with a ConditioningWarning rather than aborting the run.

    ``on_iteration(t, working)`` is invoked after each sweep with the live
    working matrix (callers must not modify it). ``track_columns`` selects
    column indices whose per-iteration snapshots are kept in the trace,
    starting with the initialization.
    """
    data.validate()
    working = stochastic_init(data, config.seed)
    mask = data.mask
    n, d = working.shape
    spec = _resolved_spec(working, config.kernel)

    sq_cache = backend.pairwise_sq_dists(working)
    observed_ids = [np.flatnonzero(mask[:, j]) for j in range(d)]
    missing_ids = [np.flatnonzero(~mask[:, j]) for j in range(d)]
    holes = ~mask

    history = None
    if track_columns is not None:
        track_columns = [int(j) for j in track_columns]
        history = [{j: working[:, j].copy() for j in track_columns}]

    records = []
    previous_missing = working[holes].copy()
    for t in range(1, config.iterations + 1):
        started = time.perf_counter()
        order, token = _permutation_for(config.seed, t, d, config.shuffle)
        for j in order:
            miss = missing_ids[j]
            if miss.size == 0:
                continue
            col = np.ascontiguousarray(working[:, j])
            try:
                ghat, lam1, kept = backend.extend_from_cache(
                    col, sq_cache, observed_ids[j], spec.sigma, spec.cutoff_delta
                )
            except np.linalg.LinAlgError as err:
                raise ConditioningError(
                    f"eigensolve failed at iteration {t}, column {j}: {err}"
                ) from err
            if kept == 0:
                warnings.warn(
                    f"iteration {t}: column {j} skipped "
                    f"(lambda_max={lam1:.3e}, cutoff_delta={spec.cutoff_delta:g})",
                    ConditioningWarning,
                    stacklevel=2,
                )
                continue
            new_col = col.copy()
            new_col[miss] = ghat[miss]
            backend.rank_update_sq_dists(sq_cache, col, new_col)
            working[:, j] = new_col

        current_missing = working[holes]
        delta = float(np.linalg.norm(current_missing - previous_missing))
        denom = max(1.0, float(np.linalg.norm(previous_missing)))
        relative_change = delta / denom
        records.append(
            IterationRecord(
                iteration=t,
                relative_change=relative_change,
                wall_time=time.perf_counter() - started,
                permutation_seed_state=token,
            )
        )
        previous_missing = current_missing.copy()
        if history is not None:
            history.append({j: working[:, j].copy() for j in track_columns})
        if on_iteration is not None:
            on_iteration(t, working)
        if config.tolerance > 0.0 and relative_change < config.tolerance:
            break

    return working, IterationTrace(per_iteration=records, imputed_history=history)
