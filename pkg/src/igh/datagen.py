"""Synthetic swiss-roll benchmark generation and random data annihilation."""

import warnings
from dataclasses import dataclass

import numpy as np

from .core import Dataset, degenerate_axes
from .errors import ConfigError, DataInvariantWarning

# Parameter range of the unit spiral r = t. Chosen experimentally together
# with the SwissRollSpec defaults: enough winding that the manifold is
# genuinely nonlinear while stochastically initialized points still fall
# inside the recoverable neighborhood of their true position.
SPIRAL_TURNS = 1.25


@dataclass(frozen=True)
class SwissRollSpec:
    """Geometry and randomization knobs for the synthetic swiss roll.

    Defaults reproduce a 250-point roll in 30 ambient dimensions: 5 stacked
    spirals of 50 points each, randomly rotated and lightly noised. All of
    these are tunable configuration, not contract.
    """

    points_per_spiral: int = 50
    spirals: int = 5
    spread: float = 1.0
    height_gap: float = 0.3
    ambient_dim: int = 30
    rotations: int = 60
    noise_sigma: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.points_per_spiral < 1:
            raise ConfigError("points_per_spiral must be >= 1")
        if self.spirals < 1:
            raise ConfigError("spirals must be >= 1")
        if self.spread <= 0:
            raise ConfigError("spread must be positive")
        if self.height_gap <= 0:
            raise ConfigError("height_gap must be positive")
        if self.ambient_dim < 3:
            raise ConfigError("ambient_dim must be >= 3")
        if self.rotations < 0:
            raise ConfigError("rotations must be >= 0")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")

    @property
    def total_points(self):
        return self.points_per_spiral * self.spirals


def arc_length(t):
    """Cumulative arc length of the unit Archimedean spiral r = t from 0 to t."""
    if t < 0:
        raise ConfigError(f"arc length parameter must be >= 0, got {t}")
    return 0.5 * (t * np.sqrt(1.0 + t * t) + np.arcsinh(t))


def arc_length_invert(s, tol=1e-10):
    """Parameter t with |arc_length(t) - s| <= tol, via safeguarded Newton."""
    if s < 0:
        raise ConfigError(f"arc length must be >= 0, got {s}")
    if s == 0.0:
        return 0.0
    lo = 0.0
    hi = max(1.0, np.sqrt(2.0 * s))
    while arc_length(hi) < s:
        hi *= 2.0
    t = min(hi, np.sqrt(2.0 * s))
    for _ in range(200):
        f = arc_length(t) - s
        if abs(f) <= tol:
            return float(t)
        if f > 0:
            hi = t
        else:
            lo = t
        step = f / np.sqrt(1.0 + t * t)
        t_new = t - step
        if not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        t = t_new
    return float(t)


def make_swiss_roll(spec):
    """Generate the fully observed swiss-roll dataset and a ground-truth copy.

    Points sit on the planar spiral (spread * t cos t, spread * t sin t) at
    equal arc-length increments; identical spirals are stacked along the
    third axis, zero-padded into the ambient dimension, spun through random
    coordinate-plane rotations, and finally perturbed with i.i.d. Gaussian
    noise. Deterministic given the seed.
    """
    t_max = SPIRAL_TURNS * 2.0 * np.pi
    total_arc = arc_length(t_max)
    count = spec.points_per_spiral
    if count == 1:
        arcs = np.array([0.0])
    else:
        arcs = np.linspace(0.0, total_arc, count)
    ts = np.array([arc_length_invert(s) for s in arcs])

    x = spec.spread * ts * np.cos(ts)
    y = spec.spread * ts * np.sin(ts)

    points = np.zeros((spec.total_points, spec.ambient_dim))
    for level in range(spec.spirals):
        block = slice(level * count, (level + 1) * count)
        points[block, 0] = x
        points[block, 1] = y
        points[block, 2] = level * spec.height_gap

    rng = np.random.default_rng(spec.seed)
    for _ in range(spec.rotations):
        i, k = rng.choice(spec.ambient_dim, size=2, replace=False)
        theta = rng.uniform(0.0, 2.0 * np.pi)
        ci = points[:, i].copy()
        ck = points[:, k].copy()
        points[:, i] = np.cos(theta) * ci - np.sin(theta) * ck
        points[:, k] = np.sin(theta) * ci + np.cos(theta) * ck
    points += rng.normal(0.0, spec.noise_sigma, size=points.shape)

    dataset = Dataset(points, np.ones(points.shape, dtype=bool))
    return dataset, points.copy()


def annihilate(data, p, seed):
    """Independently delete each observed entry with probability ``p``.

    Values are never modified; only mask bits flip from observed to missing.
    If the result has a fully-missing row or column this is reported with a
    DataInvariantWarning and the degenerate dataset is still returned; the
    caller decides whether to retry with another seed.
    """
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"annihilation rate must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    drop = rng.random(data.values.shape) < p
    new_mask = data.mask & ~drop
    rows, cols = degenerate_axes(new_mask)
    if rows.size or cols.size:
        warnings.warn(
            "annihilation produced fully-missing axes: "
            f"rows={rows.tolist()} cols={cols.tolist()}",
            DataInvariantWarning,
            stacklevel=2,
        )
    names = list(data.column_names) if data.column_names is not None else None
    return Dataset(data.values.copy(), new_mask, names)
