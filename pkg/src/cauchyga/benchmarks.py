"""Benchmark objectives and the raw-objective-to-fitness bridge.

Four classic minimization test functions (rastrigin, griewangk, ackley,
schwefel) over symmetric boxes, each paired with conservative analytic
bounds [L, U] on its raw value over the box. Fitness is the fixed affine
map (U - raw) / (U - L), so maximizing fitness minimizes the raw objective
and fitness always lands in [0, 1].

The bounds are precomputed constants rather than per-generation min/max
scaling: rescaling each generation would silently change what a given
inverse temperature means, making constant-gamma selection implicitly
adaptive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

RASTRIGIN_A = 10.0
# conservative per-dimension extreme of x*sin(sqrt(|x|)) on [-500, 500]
SCHWEFEL_PER_DIM = 418.9829

FUNCTION_NAMES = ("rastrigin", "griewangk", "ackley", "schwefel")

_BOX = {
    "rastrigin": 5.12,
    "griewangk": 600.0,
    "ackley": 30.0,
    "schwefel": 500.0,
}


@dataclass(frozen=True)
class ObjectiveSpec:
    """One benchmark function instance: box bounds plus raw-value bounds."""

    name: str
    dims: int
    lower: float
    upper: float
    raw_lower: float
    raw_upper: float


def make_objective(name: str, dims: int = 15) -> ObjectiveSpec:
    """Build an ObjectiveSpec with its box and conservative raw bounds.

    Raises:
        ValueError: On an unknown function name or dims < 1.
    """
    if name not in _BOX:
        raise ValueError(f"unknown objective: {name!r}")
    if dims < 1:
        raise ValueError("dims must be >= 1")
    half = _BOX[name]
    if name == "rastrigin":
        lo, hi = 0.0, dims * (half * half + 2.0 * RASTRIGIN_A)
    elif name == "griewangk":
        lo, hi = 0.0, dims * half * half / 4000.0 + 2.0
    elif name == "ackley":
        lo, hi = 0.0, 20.0 + math.e
    else:  # schwefel
        lo, hi = -SCHWEFEL_PER_DIM * dims, SCHWEFEL_PER_DIM * dims
    return ObjectiveSpec(
        name=name, dims=dims, lower=-half, upper=half, raw_lower=lo, raw_upper=hi
    )


def analytic_bounds(spec: ObjectiveSpec) -> tuple[float, float]:
    """Conservative (L, U) bounds on the raw objective over the box."""
    return spec.raw_lower, spec.raw_upper


def evaluate_raw_batch(spec: ObjectiveSpec, xs: np.ndarray) -> np.ndarray:
    """Raw objective values for a (n, dims) batch of in-box points.

    This is the canonical evaluation path; ``evaluate_raw`` wraps it for a
    single vector, so stored and recomputed values agree bit-exactly.

    Raises:
        ValueError: On wrong width or any out-of-box component.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != spec.dims:
        raise ValueError(
            f"expected shape (n, {spec.dims}), got {xs.shape}"
        )
    if np.any(xs < spec.lower) or np.any(xs > spec.upper):
        raise ValueError("component outside objective bounds")

    if spec.name == "rastrigin":
        a = RASTRIGIN_A
        return spec.dims * a + np.sum(
            xs * xs - a * np.cos(2.0 * np.pi * xs), axis=1
        )
    if spec.name == "griewangk":
        idx = np.sqrt(np.arange(1, spec.dims + 1, dtype=np.float64))
        return (
            np.sum(xs * xs, axis=1) / 4000.0
            - np.prod(np.cos(xs / idx), axis=1)
            + 1.0
        )
    if spec.name == "ackley":
        rms = np.sqrt(np.mean(xs * xs, axis=1))
        mean_cos = np.mean(np.cos(2.0 * np.pi * xs), axis=1)
        return -20.0 * np.exp(-0.2 * rms) - np.exp(mean_cos) + 20.0 + math.e
    # schwefel
    return np.sum(-xs * np.sin(np.sqrt(np.abs(xs))), axis=1)


def evaluate_raw(spec: ObjectiveSpec, x) -> float:
    """Raw objective value of one in-box point of length ``spec.dims``."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got shape {x.shape}")
    return float(evaluate_raw_batch(spec, x[np.newaxis, :])[0])


def to_fitness(spec: ObjectiveSpec, raw: float) -> float:
    """Map a raw objective value affinely onto [0, 1], best raw -> 1.

    Raises:
        ValueError: If raw falls outside the precomputed [L, U] bounds.
    """
    lo, hi = spec.raw_lower, spec.raw_upper
    if raw < lo or raw > hi:
        raise ValueError(
            f"bound violation: recompute bounds (raw={raw!r} outside [{lo}, {hi}])"
        )
    return (hi - raw) / (hi - lo)


def to_fitness_batch(spec: ObjectiveSpec, raws: np.ndarray) -> np.ndarray:
    """Vectorized ``to_fitness`` with the same bound check."""
    raws = np.asarray(raws, dtype=np.float64)
    lo, hi = spec.raw_lower, spec.raw_upper
    if np.any(raws < lo) or np.any(raws > hi):
        raise ValueError("bound violation: recompute bounds")
    return (hi - raws) / (hi - lo)
