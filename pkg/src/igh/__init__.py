"""Missing-data imputation by iterated geometric harmonics.

Columns with missing entries are treated as partially observed functions on
the dataset's rows, extended from the observed rows to all rows with a
kernel Nystrom eigenbasis, and refined over shuffled column sweeps.
"""

from .backend import active_backend, available_backends, set_backend
from .core import (
    Dataset,
    HarmonicsBasis,
    IghConfig,
    IterationRecord,
    IterationTrace,
    degenerate_axes,
    extend_column,
    geometric_harmonics,
    igh_run,
    stochastic_init,
    update_operator_apply,
)
from .datagen import (
    SwissRollSpec,
    annihilate,
    arc_length,
    arc_length_invert,
    make_swiss_roll,
)
from .dataio import (
    ImageGridManifest,
    export_images,
    import_images,
    read_csv,
    read_pgm,
    write_csv,
    write_pgm,
)
from .errors import (
    ConditioningError,
    ConditioningWarning,
    ConfigError,
    ContractError,
    DataInvariantError,
    DataInvariantWarning,
    DegenerateKernelError,
    DimensionError,
    FormatError,
    IghError,
)
from .kernels import (
    EigenSystem,
    GramBlock,
    KernelSpec,
    gram_block,
    kernel_value,
    resolve_bandwidth,
    restricted_eigensystem,
)
from .metrics import TrialEnsemble, ensemble_stats, graph_energy, l2_error, mixed_norm

__version__ = "0.1.0"

__all__ = [
    "ConditioningError",
    "ConditioningWarning",
    "ConfigError",
    "ContractError",
    "DataInvariantError",
    "DataInvariantWarning",
    "Dataset",
    "DegenerateKernelError",
    "DimensionError",
    "EigenSystem",
    "FormatError",
    "GramBlock",
    "HarmonicsBasis",
    "IghConfig",
    "IghError",
    "ImageGridManifest",
    "IterationRecord",
    "IterationTrace",
    "KernelSpec",
    "SwissRollSpec",
    "TrialEnsemble",
    "active_backend",
    "annihilate",
    "arc_length",
    "arc_length_invert",
    "available_backends",
    "degenerate_axes",
    "ensemble_stats",
    "export_images",
    "extend_column",
    "geometric_harmonics",
    "gram_block",
    "graph_energy",
    "igh_run",
    "import_images",
    "kernel_value",
    "l2_error",
    "make_swiss_roll",
    "mixed_norm",
    "read_csv",
    "read_pgm",
    "resolve_bandwidth",
    "restricted_eigensystem",
    "set_backend",
    "stochastic_init",
    "update_operator_apply",
    "write_csv",
    "write_pgm",
]
