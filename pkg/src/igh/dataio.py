"""Dataset persistence: CSV with missing markers, binary PGM image grids,
and run-report serialization."""

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .core import Dataset
from .errors import ConfigError, DimensionError, FormatError

DEFAULT_MISSING_TOKEN = "NA"

SENTINEL = "sentinel"
SIDECAR = "sidecar"

_MASK_SUFFIX = ".mask.pgm"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def read_csv(path, missing_token=DEFAULT_MISSING_TOKEN, has_header=False):
    """Parse a comma-separated dataset; cells equal to the token are missing.

    Rows must be rectangular and every non-missing cell must parse as a
    finite real. Fully-missing rows or columns are rejected.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise FormatError(f"{path}: empty file")

    names = None
    first_data_line = 1
    if has_header:
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        first_data_line = 2
        if not rows:
            raise FormatError(f"{path}: no data rows after header")

    width = len(names) if names is not None else len(rows[0])
    values = np.empty((len(rows), width))
    mask = np.ones((len(rows), width), dtype=bool)
    for i, row in enumerate(rows):
        line = first_data_line + i
        if len(row) != width:
            raise FormatError(
                f"{path}:{line}: expected {width} cells, found {len(row)}", line=line
            )
        for j, cell in enumerate(row):
            text = cell.strip()
            if text == missing_token:
                values[i, j] = np.nan
                mask[i, j] = False
                continue
            try:
                parsed = float(text)
            except ValueError:
                raise FormatError(
                    f"{path}:{line}: column {j + 1}: cannot parse {cell!r}",
                    line=line,
                    column=j + 1,
                ) from None
            if not math.isfinite(parsed):
                raise FormatError(
                    f"{path}:{line}: column {j + 1}: non-finite value {cell!r}",
                    line=line,
                    column=j + 1,
                )
            values[i, j] = parsed

    dataset = Dataset(values, mask, names)
    dataset.validate()
    return dataset


def write_csv(data, path, missing_token=DEFAULT_MISSING_TOKEN):
    """Inverse of read_csv: shortest round-trip float formatting, token for
    missing slots, header emitted when the dataset carries column names."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        if data.column_names is not None:
            writer.writerow(data.column_names)
        for i in range(data.n_rows):
            row = [
                repr(float(data.values[i, j])) if data.mask[i, j] else missing_token
                for j in range(data.n_cols)
            ]
            writer.writerow(row)


# ---------------------------------------------------------------------------
# PGM image grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImageGridManifest:
    """Layout needed to reconstruct images from flattened dataset rows."""

    width: int
    height: int
    entries: tuple
    value_range: tuple = (0.0, 1.0)

    @property
    def pixels(self):
        return self.width * self.height


def manifest_to_json(manifest, path):
    payload = {
        "width": manifest.width,
        "height": manifest.height,
        "value_range": list(manifest.value_range),
        "entries": [
            {"row_id": row_id, "source_name": name} for row_id, name in manifest.entries
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def manifest_from_json(path):
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    entries = tuple(
        (int(entry["row_id"]), str(entry["source_name"])) for entry in payload["entries"]
    )
    return ImageGridManifest(
        width=int(payload["width"]),
        height=int(payload["height"]),
        entries=entries,
        value_range=tuple(float(v) for v in payload["value_range"]),
    )


def read_pgm(path):
    """Read a binary (P5) PGM; returns (width, height, maxval, pixel array)."""
    with open(path, "rb") as handle:
        blob = handle.read()

    tokens = []
    pos = 0
    while len(tokens) < 4 and pos < len(blob):
        byte = blob[pos:pos + 1]
        if byte.isspace():
            pos += 1
            continue
        if byte == b"#":
            end = blob.find(b"\n", pos)
            pos = len(blob) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(blob) and not blob[pos:pos + 1].isspace():
            pos += 1
        tokens.append(blob[start:pos])
    if len(tokens) < 4:
        raise FormatError(f"{path}: truncated PGM header")
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"{path}: non-positive dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise FormatError(f"{path}: unsupported maxval {maxval}")

    pos += 1  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.uint8
    expected = width * height * dtype.itemsize
    raster = blob[pos:pos + expected]
    if len(raster) != expected:
        raise FormatError(
            f"{path}: expected {expected} raster bytes, found {len(raster)}"
        )
    pixels = np.frombuffer(raster, dtype=dtype).astype(np.int64).reshape(height, width)
    return width, height, maxval, pixels


def write_pgm(path, pixels):
    """Write 8-bit binary PGM from a 2-d array of values in [0, 255]."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise DimensionError(f"expected 2-d pixel array, got shape {pixels.shape}")
    height, width = pixels.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(pixels.astype(np.uint8).tobytes())


def _grid_files(dir_path):
    names = sorted(
        name
        for name in os.listdir(dir_path)
        if name.lower().endswith(".pgm") and not name.lower().endswith(_MASK_SUFFIX)
    )
    if not names:
        raise FormatError(f"{dir_path}: no PGM files found")
    return names


def import_images(dir_path, mask_convention=SIDECAR, sentinel_value=0):
    """Import a directory of same-sized binary PGMs as one dataset.

    Each image becomes one row by row-major flattening with pixel values
    mapped to [0, 1]. Missingness comes either from a sentinel pixel value
    (``mask_convention="sentinel"``) or from a same-named ``.mask.pgm``
    sidecar where 0 marks missing. Import order is lexicographic by name.
    """
    if mask_convention not in (SENTINEL, SIDECAR):
        raise ConfigError(f"unknown mask convention {mask_convention!r}")
    names = _grid_files(dir_path)

    width = height = None
    rows = []
    mask_rows = []
    entries = []
    for row_id, name in enumerate(names):
        w, h, maxval, pixels = read_pgm(os.path.join(dir_path, name))
        if width is None:
            width, height = w, h
        elif (w, h) != (width, height):
            raise FormatError(
                f"{name}: dimensions {w}x{h} differ from first image {width}x{height}"
            )
        rows.append(pixels.reshape(-1) / maxval)
        if mask_convention == SENTINEL:
            mask_rows.append(pixels.reshape(-1) != sentinel_value)
        else:
            mask_name = name[:-len(".pgm")] + _MASK_SUFFIX
            mask_path = os.path.join(dir_path, mask_name)
            if not os.path.exists(mask_path):
                raise FormatError(f"{name}: required sidecar {mask_name} is missing")
            mw, mh, _, mask_pixels = read_pgm(mask_path)
            if (mw, mh) != (w, h):
                raise FormatError(f"{mask_name}: dimensions differ from {name}")
            mask_rows.append(mask_pixels.reshape(-1) != 0)
        entries.append((row_id, name))

    dataset = Dataset(np.vstack(rows), np.vstack(mask_rows))
    manifest = ImageGridManifest(
        width=width, height=height, entries=tuple(entries), value_range=(0.0, 1.0)
    )
    return dataset, manifest


def export_images(data, manifest, dir_path):
    """Write dataset rows back to 8-bit binary PGMs per the manifest.

    Values are clamped to the manifest's value range and linearly quantized
    to maxval 255 with round-half-up; missing slots render as the range
    minimum.
    """
    if len(manifest.entries) != data.n_rows:
        raise DimensionError(
            f"manifest lists {len(manifest.entries)} images, dataset has {data.n_rows} rows"
        )
    if manifest.pixels != data.n_cols:
        raise DimensionError(
            f"manifest geometry {manifest.width}x{manifest.height} does not match "
            f"{data.n_cols} columns"
        )
    lo, hi = manifest.value_range
    if not hi > lo:
        raise ConfigError(f"invalid value range ({lo}, {hi})")
    os.makedirs(dir_path, exist_ok=True)
    for row_id, name in manifest.entries:
        row = data.values[row_id].copy()
        row[~data.mask[row_id]] = lo
        unit = np.clip((row - lo) / (hi - lo), 0.0, 1.0)
        quantized = np.floor(unit * 255.0 + 0.5).astype(np.uint8)
        write_pgm(
            os.path.join(dir_path, name),
            quantized.reshape(manifest.height, manifest.width),
        )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def write_run_report(path, rows, provenance=None):
    """Line-oriented CSV of per-iteration statistics with provenance comments.

    ``rows`` yields (iteration, l2_error, std_dev or None, wall_time_seconds);
    absent standard deviations serialize as empty fields.
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for key, value in (provenance or {}).items():
            handle.write(f"# {key}={value}\n")
        writer = csv.writer(handle)
        writer.writerow(["iteration", "l2_error", "std_dev", "wall_time_seconds"])
        for iteration, error, std, wall in rows:
            writer.writerow(
                [
                    int(iteration),
                    repr(float(error)),
                    "" if std is None else repr(float(std)),
                    repr(float(wall)),
                ]
            )


def write_trace(path, trace, provenance=None):
    """Per-iteration convergence trace of one imputation run."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for key, value in (provenance or {}).items():
            handle.write(f"# {key}={value}\n")
        writer = csv.writer(handle)
        writer.writerow(["iteration", "relative_change", "wall_time_s", "permutation"])
        for record in trace.per_iteration:
            writer.writerow(
                [
                    record.iteration,
                    repr(float(record.relative_change)),
                    repr(float(record.wall_time)),
                    record.permutation_seed_state,
                ]
            )


def write_experiment_report(path, rows, provenance=None, failures=()):
    """Raw sweep report: one row per (sweep value, trial, iteration)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        for key, value in (provenance or {}).items():
            handle.write(f"# {key}={value}\n")
        for failure in failures:
            handle.write(f"# failed {failure}\n")
        writer = csv.writer(handle)
        writer.writerow(["sweep_value", "trial", "iteration", "l2_error", "wall_time_s"])
        for sweep_value, trial, iteration, error, wall in rows:
            writer.writerow(
                [
                    sweep_value,
                    int(trial),
                    int(iteration),
                    repr(float(error)),
                    repr(float(wall)),
                ]
            )


def read_report_rows(path):
    """Read back a report CSV, skipping provenance comments."""
    out = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(line for line in handle if not line.startswith("#"))
        header = next(reader)
        for row in reader:
            out.append(dict(zip(header, row)))
    return out
