"""Seeded experiment sweeps: damage, impute, evaluate, and aggregate.

Each sweep cell (one sweep value, one trial) is a self-contained seeded run
whose damage and imputation seeds derive from the plan's base seed, so any
report can be regenerated exactly from its recorded configuration.
"""

import hashlib
import time
import warnings
from dataclasses import dataclass, fields

import numpy as np

from .core import Dataset, IghConfig, igh_run, stochastic_init
from .datagen import annihilate
from .errors import ConfigError, DataInvariantWarning, IghError
from .metrics import l2_error

ANNIHILATION_RATE = "annihilation_rate"
RECORD_COUNT = "record_count"
SPARSITY_STRIDE = "sparsity_stride"


@dataclass(frozen=True)
class ExperimentPlan:
    sweep_variable: str = ANNIHILATION_RATE
    p_values: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
    record_counts: tuple = ()
    strides: tuple = ()
    fixed_p: float = 0.5
    trials: int = 5
    iterations: int = 10
    base_seed: int = 0

    def __post_init__(self):
        if self.sweep_variable not in (ANNIHILATION_RATE, RECORD_COUNT, SPARSITY_STRIDE):
            raise ConfigError(f"unknown sweep variable {self.sweep_variable!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        for p in tuple(self.p_values) + (self.fixed_p,):
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"annihilation rate {p} outside [0, 1]")

    @property
    def sweep_values(self):
        if self.sweep_variable == ANNIHILATION_RATE:
            return tuple(self.p_values)
        if self.sweep_variable == RECORD_COUNT:
            return tuple(int(v) for v in self.record_counts)
        return tuple(int(v) for v in self.strides)


@dataclass
class CellResult:
    sweep_value: object
    trial: int
    errors: np.ndarray | None = None
    wall_times: np.ndarray | None = None
    failed: bool = False
    message: str = ""


def config_digest(*objects):
    """Short stable digest of configuration objects for provenance lines."""
    chunks = []
    for obj in objects:
        if hasattr(obj, "__dataclass_fields__"):
            pairs = [(f.name, getattr(obj, f.name)) for f in fields(obj)]
            chunks.append(f"{type(obj).__name__}{pairs!r}")
        else:
            chunks.append(repr(obj))
    return hashlib.sha256("|".join(chunks).encode("utf-8")).hexdigest()[:12]


def cell_seeds(base_seed, sweep_index, trial):
    """Independent (damage, run) seeds for one sweep cell."""
    state = np.random.SeedSequence(
        entropy=base_seed, spawn_key=(sweep_index, trial)
    ).generate_state(2)
    return int(state[0]), int(state[1])


def run_imputation_trial(truth, damaged, config):
    """One impute run with per-iteration error tracking against ground truth.

    Returns (errors, wall_times, imputed): arrays indexed by iteration with
    slot 0 holding the stochastic initialization.
    """
    started = time.perf_counter()
    initial = stochastic_init(damaged, config.seed)
    init_time = time.perf_counter() - started
    errors = [l2_error(truth, initial)]
    wall_times = [init_time]

    def track(_iteration, working):
        errors.append(l2_error(truth, working))

    imputed, trace = igh_run(damaged, config, on_iteration=track)
    wall_times.extend(record.wall_time for record in trace.per_iteration)
    return np.asarray(errors), np.asarray(wall_times), imputed


def _subset_dataset(truth_values, count=None, stride=None):
    if stride is not None:
        values = truth_values[::stride]
    else:
        values = truth_values[:count]
    return values


def run_plan(plan, truth_values, kernel, shuffle=True, tolerance=0.0):
    """Execute every cell of an experiment plan over a ground-truth matrix.

    Failed cells (for example a damage draw that empties a column) are
    recorded and the sweep continues.
    """
    truth_values = np.asarray(truth_values, dtype=np.float64)
    cells = []
    for sweep_index, sweep_value in enumerate(plan.sweep_values):
        if plan.sweep_variable == ANNIHILATION_RATE:
            subset = truth_values
            p = float(sweep_value)
        elif plan.sweep_variable == RECORD_COUNT:
            subset = _subset_dataset(truth_values, count=int(sweep_value))
            p = plan.fixed_p
        else:
            subset = _subset_dataset(truth_values, stride=int(sweep_value))
            p = plan.fixed_p
        clean = Dataset(subset.copy(), np.ones(subset.shape, dtype=bool))

        for trial in range(plan.trials):
            damage_seed, run_seed = cell_seeds(plan.base_seed, sweep_index, trial)
            cell = CellResult(sweep_value=sweep_value, trial=trial)
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("error", DataInvariantWarning)
                    damaged = annihilate(clean, p, damage_seed)
                config = IghConfig(
                    kernel=kernel,
                    iterations=plan.iterations,
                    tolerance=tolerance,
                    seed=run_seed,
                    shuffle=shuffle,
                )
                errors, wall_times, _ = run_imputation_trial(subset, damaged, config)
                cell.errors = errors
                cell.wall_times = wall_times
            except (IghError, DataInvariantWarning) as err:
                cell.failed = True
                cell.message = f"sweep={sweep_value} trial={trial}: {err}"
            cells.append(cell)
    return cells


def report_rows(cells):
    """Flatten cell results into (sweep_value, trial, iteration, error, wall)."""
    rows = []
    for cell in cells:
        if cell.failed:
            continue
        for iteration, (error, wall) in enumerate(zip(cell.errors, cell.wall_times)):
            rows.append((cell.sweep_value, cell.trial, iteration, error, wall))
    return rows


def mean_error_curves(cells):
    """Per-sweep-value mean error by iteration over the successful trials."""
    curves = {}
    for cell in cells:
        if not cell.failed:
            curves.setdefault(cell.sweep_value, []).append(cell.errors)
    return {
        value: np.mean(np.vstack(stack), axis=0) for value, stack in curves.items()
    }
