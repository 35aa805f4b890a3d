"""Command-line front end: generation, damage, imputation, evaluation,
experiment sweeps, and image-grid interchange.

Exit codes: 0 success, 2 usage/configuration, 3 data invariant, 4
conditioning, 5 I/O.
"""

import argparse
import sys
import warnings

import numpy as np

from . import dataio, harness, plotting
from .core import Dataset, IghConfig, degenerate_axes, igh_run
from .datagen import SwissRollSpec, annihilate, make_swiss_roll
from .errors import (
    ConditioningError,
    ConfigError,
    DataInvariantError,
    DataInvariantWarning,
    DimensionError,
    FormatError,
    IghError,
)
from .harness import (
    ANNIHILATION_RATE,
    RECORD_COUNT,
    SPARSITY_STRIDE,
    ExperimentPlan,
    config_digest,
)
from .kernels import KernelSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONDITIONING = 4
EXIT_IO = 5


def _float_list(text):
    return tuple(float(part) for part in text.split(",") if part.strip())


def _int_list(text):
    return tuple(int(part) for part in text.split(",") if part.strip())


def _kernel_from(args):
    sigma = getattr(args, "sigma", None)
    cutoff = getattr(args, "cutoff", None)
    kwargs = {}
    if sigma is not None:
        kwargs["sigma"] = sigma
    if cutoff is not None:
        kwargs["cutoff_delta"] = cutoff
    return KernelSpec(**kwargs)


def _add_kernel_flags(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--sigma", type=float, help="explicit kernel bandwidth")
    group.add_argument(
        "--sigma-auto",
        action="store_true",
        help="median pairwise distance bandwidth (default)",
    )
    parser.add_argument(
        "--cutoff", type=float, default=None, help="relative eigenvalue cutoff"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_swissroll(args):
    spec = SwissRollSpec(
        points_per_spiral=args.points_per_spiral,
        spirals=args.spirals,
        spread=args.spread,
        height_gap=args.height_gap,
        ambient_dim=args.ambient_dim,
        rotations=args.rotations,
        noise_sigma=args.noise,
        seed=args.seed,
    )
    dataset, _ = make_swiss_roll(spec)
    dataio.write_csv(dataset, args.out)
    print(f"wrote {args.out} ({dataset.n_rows}x{dataset.n_cols}) digest={config_digest(spec)}")
    return EXIT_OK


def cmd_damage(args):
    data = dataio.read_csv(args.infile, has_header=args.has_header)
    attempts = args.retry_seed_limit + 1
    damaged = None
    for attempt in range(attempts):
        seed = args.seed + attempt
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DataInvariantWarning)
            damaged = annihilate(data, args.p, seed)
        degenerate = [w for w in caught if issubclass(w.category, DataInvariantWarning)]
        if not degenerate:
            dataio.write_csv(damaged, args.out)
            fraction = damaged.n_missing / max(1, damaged.values.size)
            print(
                f"wrote {args.out} seed={seed} missing_fraction={fraction:.4f} "
                f"digest={config_digest(('damage', args.p, seed))}"
            )
            return EXIT_OK
        print(f"seed {seed}: {degenerate[0].message}; retrying", file=sys.stderr)
    rows, cols = degenerate_axes(damaged.mask)
    raise DataInvariantError(
        f"damage at p={args.p} left fully-missing axes after {attempts} seed(s): "
        f"rows={rows.tolist()} cols={cols.tolist()}",
        rows=rows,
        cols=cols,
    )


def _named_columns(data, indices):
    if data.column_names is None:
        return ", ".join(str(i) for i in indices)
    return ", ".join(data.column_names[i] for i in indices)


def cmd_impute(args):
    data = dataio.read_csv(args.infile, has_header=args.has_header)
    config = IghConfig(
        kernel=_kernel_from(args),
        iterations=args.iters,
        tolerance=args.tolerance,
        seed=args.seed,
        shuffle=not args.no_shuffle,
    )
    try:
        imputed, trace = igh_run(data, config)
    except DataInvariantError as err:
        if err.cols:
            raise DataInvariantError(
                f"{err} (columns: {_named_columns(data, err.cols)})",
                rows=err.rows,
                cols=err.cols,
            ) from err
        raise
    result = Dataset(imputed, np.ones(imputed.shape, dtype=bool), data.column_names)
    dataio.write_csv(result, args.out)
    if args.trace_out:
        dataio.write_trace(
            args.trace_out,
            trace,
            provenance={
                "command": "impute",
                "seed": config.seed,
                "iterations": config.iterations,
                "digest": config_digest(config),
            },
        )
    final = trace.per_iteration[-1]
    print(
        f"wrote {args.out} iterations={final.iteration} "
        f"final_relative_change={final.relative_change:.6g} digest={config_digest(config)}"
    )
    return EXIT_OK


def cmd_evaluate(args):
    truth = dataio.read_csv(args.truth, has_header=args.has_header)
    imputed = dataio.read_csv(args.imputed, has_header=args.has_header)
    for name, ds in (("truth", truth), ("imputed", imputed)):
        if ds.n_missing:
            raise DataInvariantError(f"{name} dataset has missing entries")
    from .metrics import l2_error

    value = l2_error(truth.values, imputed.values)
    print(f"{value!r}")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(f"# truth={args.truth}\n# imputed={args.imputed}\n")
            handle.write("l2_error\n")
            handle.write(f"{value!r}\n")
    return EXIT_OK


def _experiment_plan(args):
    if args.sweep == "p":
        return ExperimentPlan(
            sweep_variable=ANNIHILATION_RATE,
            p_values=args.p_values,
            trials=args.trials,
            iterations=args.iters,
            base_seed=args.base_seed,
        )
    if args.sweep == "records":
        if not args.record_counts:
            raise ConfigError("--record-counts is required for --sweep records")
        return ExperimentPlan(
            sweep_variable=RECORD_COUNT,
            record_counts=args.record_counts,
            fixed_p=args.p,
            trials=args.trials,
            iterations=args.iters,
            base_seed=args.base_seed,
        )
    if not args.strides:
        raise ConfigError("--strides is required for --sweep stride")
    return ExperimentPlan(
        sweep_variable=SPARSITY_STRIDE,
        strides=args.strides,
        fixed_p=args.p,
        trials=args.trials,
        iterations=args.iters,
        base_seed=args.base_seed,
    )


def cmd_experiment(args):
    plan = _experiment_plan(args)
    if args.infile:
        source = dataio.read_csv(args.infile, has_header=args.has_header)
        if source.n_missing:
            raise DataInvariantError("experiment input must be fully observed")
        truth = source.values
        source_name = args.infile
    else:
        spec = SwissRollSpec(seed=args.data_seed)
        _, truth = make_swiss_roll(spec)
        source_name = f"swissroll(seed={args.data_seed})"

    kernel = _kernel_from(args)
    cells = harness.run_plan(
        plan, truth, kernel, shuffle=not args.no_shuffle, tolerance=args.tolerance
    )
    failures = [cell.message for cell in cells if cell.failed]
    provenance = {
        "command": "experiment",
        "sweep": plan.sweep_variable,
        "source": source_name,
        "trials": plan.trials,
        "iterations": plan.iterations,
        "base_seed": plan.base_seed,
        "digest": config_digest(plan, kernel),
    }
    dataio.write_experiment_report(
        args.report, harness.report_rows(cells), provenance, failures
    )
    if args.plot:
        curves = harness.mean_error_curves(cells)
        series = [
            (str(value), list(range(len(curve))), list(curve))
            for value, curve in sorted(curves.items())
        ]
        plotting.write_chart(
            args.plot,
            series,
            title=f"mean error by iteration ({plan.sweep_variable})",
            x_label="iteration",
            y_label="l2 error",
        )
    done = len(cells) - len(failures)
    print(
        f"wrote {args.report} cells={len(cells)} ok={done} failed={len(failures)} "
        f"digest={provenance['digest']}"
    )
    for message in failures:
        print(f"failed cell: {message}", file=sys.stderr)
    return EXIT_OK


def cmd_images_import(args):
    dataset, manifest = dataio.import_images(
        args.dir, mask_convention=args.mask, sentinel_value=args.sentinel_value
    )
    dataio.write_csv(dataset, args.out)
    dataio.manifest_to_json(manifest, args.manifest)
    print(
        f"imported {dataset.n_rows} image(s) of {manifest.width}x{manifest.height} "
        f"-> {args.out}"
    )
    return EXIT_OK


def cmd_images_export(args):
    data = dataio.read_csv(args.infile, has_header=args.has_header)
    manifest = dataio.manifest_from_json(args.manifest)
    dataio.export_images(data, manifest, args.dir)
    print(f"exported {data.n_rows} image(s) -> {args.dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="igh",
        description="Missing-data imputation by iterated geometric harmonics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("swissroll", help="generate the synthetic swiss-roll benchmark")
    p.add_argument("--out", required=True)
    p.add_argument("--points-per-spiral", type=int, default=50)
    p.add_argument("--spirals", type=int, default=5)
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--height-gap", type=float, default=0.3)
    p.add_argument("--ambient-dim", type=int, default=30)
    p.add_argument("--rotations", type=int, default=60)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_swissroll)

    p = sub.add_parser("damage", help="randomly annihilate observed entries")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retry-seed-limit", type=int, default=0)
    p.add_argument("--has-header", action="store_true")
    p.set_defaults(func=cmd_damage)

    p = sub.add_parser("impute", help="run iterated geometric harmonics")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--iters", type=int, default=10)
    _add_kernel_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-shuffle", action="store_true")
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--trace-out")
    p.add_argument("--has-header", action="store_true")
    p.set_defaults(func=cmd_impute)

    p = sub.add_parser("evaluate", help="dimension-scaled L2 error against ground truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--imputed", required=True)
    p.add_argument("--report")
    p.add_argument("--has-header", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("experiment", help="damage/impute/evaluate sweeps with reports")
    p.add_argument("--sweep", choices=("p", "records", "stride"), default="p")
    p.add_argument("--p-values", type=_float_list, default=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6))
    p.add_argument("--record-counts", type=_int_list, default=())
    p.add_argument("--strides", type=_int_list, default=())
    p.add_argument("--p", type=float, default=0.5, help="fixed rate for non-p sweeps")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--in", dest="infile", help="ground-truth CSV (default: swiss roll)")
    p.add_argument("--data-seed", type=int, default=0)
    _add_kernel_flags(p)
    p.add_argument("--no-shuffle", action="store_true")
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--report", required=True)
    p.add_argument("--plot")
    p.add_argument("--has-header", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("images", help="PGM directory <-> dataset CSV")
    images_sub = p.add_subparsers(dest="images_command", required=True)

    q = images_sub.add_parser("import")
    q.add_argument("--dir", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--manifest", required=True)
    q.add_argument("--mask", choices=(dataio.SENTINEL, dataio.SIDECAR), default=dataio.SIDECAR)
    q.add_argument("--sentinel-value", type=int, default=0)
    q.set_defaults(func=cmd_images_import)

    q = images_sub.add_parser("export")
    q.add_argument("--in", dest="infile", required=True)
    q.add_argument("--manifest", required=True)
    q.add_argument("--dir", required=True)
    q.add_argument("--has-header", action="store_true")
    q.set_defaults(func=cmd_images_export)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DataInvariantError, DimensionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ConditioningError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONDITIONING
    except FormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except IghError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
