"""Finite-rank projections of Lipschitz functions through dyadic interpolation.

For a level ``n`` the projection clamps a point onto the big cube of edge
``2**n``, finds the containing tiling cell of edge ``2**(1-n)``, and blends
the function's values at the cell corners with the tensor-product weights of
:mod:`lipfree.interpolation`.  Two ambient modes exist:

* sequence mode (``dim=None``): functions on finitely supported l1 sequences;
  the point is first truncated to its leading ``n`` coordinates, and corner
  evaluations re-embed the corner as a finitely supported sequence,
* coordinate mode (``dim=N``): functions on R^N under the l1 norm; the level
  only controls the grid, not the dimension.

The projected function depends on the original only through its values on the
level-n vertex grid, is linear in the function, does not increase Lipschitz
constants, and the projections at different levels commute, with the coarser
level winning.  :class:`ProjectedLipFunction` materializes a projection as a
first-class function backed by a lazily filled corner-value table, so
projections can be composed and paired exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import (
    MAX_DIM,
    MAX_LEVEL,
    FiniteSupportPoint,
    cell_low_corners,
    clamp_to_cube,
    embed_finite,
    l1_distance,
    sign_matrix,
)
from .interpolation import TabulatedFunction, lip_constant, weights_from_offsets


@dataclass(frozen=True)
class GridLevel:
    """A projection level: grid index ``n`` plus the ambient mode."""

    n: int
    dim: int | None = None

    def __post_init__(self):
        if not (1 <= self.n <= MAX_LEVEL):
            raise ValueError(f"level must be in 1..{MAX_LEVEL}, got {self.n}")
        if self.dim is not None and not (1 <= self.dim <= MAX_DIM):
            raise ValueError(f"ambient dimension must be in 1..{MAX_DIM}, got {self.dim}")

    @property
    def cell_dim(self) -> int:
        return self.n if self.dim is None else self.dim


class LipFunction:
    """A real function vanishing at the origin, with an optional Lipschitz bound.

    ``declared_lip`` is a promise from the constructor, used in convergence
    estimates; it is validated probabilistically in the test-suite, never
    enforced here.
    """

    def __init__(self, evaluator: Callable, declared_lip: float | None = None, label: str = ""):
        if declared_lip is not None and declared_lip < 0:
            raise ValueError("a Lipschitz bound cannot be negative")
        self.evaluator = evaluator
        self.declared_lip = declared_lip
        self.label = label

    def __call__(self, x) -> float:
        return float(self.evaluator(x))

    def eval_many(self, points: Sequence) -> np.ndarray:
        return np.array([float(self.evaluator(p)) for p in points])

    def __repr__(self):
        lip = "" if self.declared_lip is None else f", lip<={self.declared_lip:g}"
        return f"LipFunction({self.label or self.evaluator!r}{lip})"


def lip_function(evaluator: Callable, declared_lip: float | None = None, *, dim: int | None = None,
                 label: str = "") -> LipFunction:
    """Wrap an evaluator, checking that it vanishes exactly at the origin."""
    origin = FiniteSupportPoint.zero() if dim is None else np.zeros(dim)
    if float(evaluator(origin)) != 0.0:
        raise ValueError("evaluator must be exactly 0 at the origin")
    return LipFunction(evaluator, declared_lip, label)


def _as_coords(x) -> np.ndarray:
    if isinstance(x, FiniteSupportPoint):
        raise TypeError("expected a coordinate vector, got a sparse sequence point")
    return np.asarray(x, dtype=float)


def coordinate_function(index: int = 1) -> LipFunction:
    """f(x) = x_index; 1-Lipschitz on l1."""
    if index < 1:
        raise ValueError("coordinate indices start at 1")

    def ev(x):
        if isinstance(x, FiniteSupportPoint):
            return x.coord(index)
        return float(_as_coords(x)[index - 1])

    return LipFunction(ev, declared_lip=1.0, label=f"coordinate-{index}")


def l1_norm_function() -> LipFunction:
    """f(x) = sum_i |x_i|; 1-Lipschitz, the canonical norm test function."""

    def ev(x):
        if isinstance(x, FiniteSupportPoint):
            return x.norm1()
        return float(np.sum(np.abs(_as_coords(x))))

    return LipFunction(ev, declared_lip=1.0, label="l1-norm")


def max_coordinate_function() -> LipFunction:
    """f(x) = max(0, max_i x_i); 1-Lipschitz, kinked off the grid."""

    def ev(x):
        if isinstance(x, FiniteSupportPoint):
            return max(0.0, max((v for _, v in x.items), default=0.0))
        return max(0.0, float(np.max(_as_coords(x))))

    return LipFunction(ev, declared_lip=1.0, label="max-coordinate")


def mcshane_extension(points: Sequence, values: Sequence[float], lip: float,
                      dist=l1_distance) -> Callable:
    """The largest ``lip``-Lipschitz minorant interpolation of tabulated data.

    ``f(x) = min_p (v_p + lip * d(p, x))`` agrees with the data wherever the
    data itself is ``lip``-Lipschitz and never exceeds that constant.
    """
    pts = list(points)
    vals = [float(v) for v in values]

    def ev(x):
        return min(v + lip * dist(p, x) for p, v in zip(pts, vals))

    return ev


def tabulated_lip_function(f: TabulatedFunction, dist=l1_distance) -> LipFunction:
    """Extend a tabulated function to all of its space at its own constant."""
    lip = lip_constant(f, dist)
    ev = mcshane_extension(f.points, f.values, lip, dist)
    return LipFunction(ev, declared_lip=lip, label="tabulated")


def random_lattice_function(rng: np.random.Generator, *, dim: int | None = None,
                            anchors: int = 8, spread: float = 4.0,
                            index_range: int = 6) -> LipFunction:
    """A reproducible random Lipschitz function with a known exact bound.

    Random anchor points (plus the origin at value zero) get random values;
    the declared constant is the exact constant of that table and the
    function is its tight Lipschitz extension.
    """
    pts: list = [FiniteSupportPoint.zero() if dim is None else tuple(np.zeros(dim))]
    seen = {pts[0] if dim is not None else pts[0].items}
    while len(pts) < anchors + 1:
        if dim is None:
            size = int(rng.integers(1, 4))
            idx = rng.choice(np.arange(1, index_range + 1), size=size, replace=False)
            p = FiniteSupportPoint.from_pairs(
                (int(i), float(rng.uniform(-spread, spread))) for i in idx
            )
            key = p.items
        else:
            p = tuple(float(v) for v in rng.uniform(-spread, spread, size=dim))
            key = p
        if key in seen:
            continue
        seen.add(key)
        pts.append(p)
    vals = [0.0] + [float(rng.uniform(-spread, spread)) for _ in range(anchors)]
    table = TabulatedFunction(points=tuple(pts), values=tuple(vals), origin=0)
    lipf = tabulated_lip_function(table)
    lipf.label = "random-lattice"
    return lipf


def _stack_points(points: Sequence, level: GridLevel) -> np.ndarray:
    n, dim = level.n, level.dim
    if dim is None:
        return np.array([p.leading(n) for p in points], dtype=float).reshape(len(points), n)
    rows = []
    for p in points:
        u = _as_coords(p)
        if u.shape != (dim,):
            raise ValueError(f"expected points of dimension {dim}, got shape {u.shape}")
        rows.append(u)
    return np.array(rows, dtype=float).reshape(len(points), dim)


def cell_weights(points: Sequence, level: GridLevel):
    """Clamp, locate and weight a batch of points in one pass.

    Returns ``(low, weights)``: the (m, d) low corners of the containing
    cells and the (m, 2**d) corner weights, rows aligned with
    :func:`lipfree.geometry.sign_vectors`.
    """
    u = _stack_points(points, level)
    u = clamp_to_cube(u, 2.0 ** level.n)
    low = cell_low_corners(u, level.n)
    s = 2.0 ** (1 - level.n)
    return low, weights_from_offsets((u - low) / s)


def _corner_values(f, low: np.ndarray, level: GridLevel, cache: dict | None) -> np.ndarray:
    """Values of ``f`` at all cell corners, evaluated once per distinct corner."""
    m, d = low.shape
    s = 2.0 ** (1 - level.n)
    bits = (sign_matrix(d) + 1.0) * 0.5
    corners = low[:, None, :] + s * bits[None, :, :]  # (m, 2**d, d)

    if cache is None:
        cache = {}
    new_keys: list[tuple] = []
    for i in range(m):
        for c in range(2**d):
            key = tuple(corners[i, c])
            if key not in cache:
                cache[key] = None  # reserve the slot; filled below before any read
                new_keys.append(key)
    # Evaluate the genuinely new corners in one batch.
    if new_keys:
        if level.dim is None:
            pts = [embed_finite(k) for k in new_keys]
        else:
            pts = [np.array(k) for k in new_keys]
        vals = f.eval_many(pts) if hasattr(f, "eval_many") else np.array([float(f(p)) for p in pts])
        for key, v in zip(new_keys, vals):
            cache[key] = float(v)
    out = np.empty((m, 2**d))
    for i in range(m):
        for c in range(2**d):
            out[i, c] = cache[tuple(corners[i, c])]
    return out


def project_values(f, points: Sequence, level: GridLevel, cache: dict | None = None) -> np.ndarray:
    """Projected values of ``f`` at a batch of points (vectorized pipeline)."""
    if not len(points):
        return np.zeros(0)
    low, weights = cell_weights(points, level)
    vals = _corner_values(f, low, level, cache)
    return np.sum(weights * vals, axis=1)


def grid_interpolant_at(g: Callable, u, n: int) -> float:
    """Clamp ``u`` onto the level-n big cube and blend ``g``'s cell-corner values.

    ``g`` is any real function of coordinate vectors; the cell dimension is
    the dimension of ``u``.  The result depends on ``g`` only through its
    values on the level-n vertex grid.
    """
    u = np.asarray(u, dtype=float)
    level = GridLevel(n, dim=int(u.size))
    return float(project_values(_Plain(g), [u], level)[0])


class _Plain:
    def __init__(self, g):
        self.g = g

    def __call__(self, x):
        return float(self.g(x))


def lip_projection_at(f, x, level: GridLevel) -> float:
    """Single-point projection; see :class:`ProjectedLipFunction` for reuse."""
    return float(project_values(f, [x], level)[0])


class ProjectedLipFunction(LipFunction):
    """A materialized projection: finite corner-value table plus the pipeline.

    The table fills lazily (only corners of visited cells are ever computed)
    and is keyed by exact dyadic corner coordinates, so composing projections
    and forming pairings is exact and cheap.  Not safe for concurrent use
    while the table is still being filled.
    """

    def __init__(self, base, level: GridLevel):
        self.base = base
        self.level = level
        self.table: dict[tuple, float] = {}
        declared = getattr(base, "declared_lip", None)
        label = f"project(n={level.n})[{getattr(base, 'label', '')}]"
        super().__init__(self._eval_one, declared_lip=declared, label=label)

    def _eval_one(self, x) -> float:
        return float(project_values(self.base, [x], self.level, cache=self.table)[0])

    def eval_many(self, points: Sequence) -> np.ndarray:
        return project_values(self.base, points, self.level, cache=self.table)


def lip_projection(f, level: GridLevel) -> ProjectedLipFunction:
    """The level-n finite-rank projection of ``f`` as a first-class function."""
    return ProjectedLipFunction(f, level)


@dataclass(frozen=True)
class CommutingReport:
    m: int
    n: int
    samples: int
    max_dev: float
    passed: bool


def commuting_check(f, m: int, n: int, samples: Sequence, dim: int | None = None,
                    tol: float = 1e-10) -> CommutingReport:
    """Compare the composition of two projection levels with the coarser one.

    Evaluates both sides at the given sample points; the composition is
    materialized, so this also exercises projections of projections.
    """
    inner = lip_projection(f, GridLevel(n, dim))
    composed = lip_projection(inner, GridLevel(m, dim))
    direct = lip_projection(f, GridLevel(min(m, n), dim))
    dev = np.abs(composed.eval_many(samples) - direct.eval_many(samples))
    worst = float(np.max(dev)) if len(samples) else 0.0
    return CommutingReport(m=m, n=n, samples=len(samples), max_dev=worst, passed=worst <= tol)


@dataclass(frozen=True)
class ConvergenceCheck:
    """Projection error at one point against the explicit decay estimate.

    ``bound = 2 * L * (tail + diameter)`` where ``tail`` is the l1 mass of the
    point beyond the truncation and ``diameter`` the l1 diameter of a tiling
    cell.  The estimate is only claimed while the clamp onto the big cube is
    inactive; ``ok`` is None otherwise (report-only regime).
    """

    value: float
    exact: float
    error: float
    bound: float
    clamped: bool
    ok: bool | None


def convergence_check(f, x, n: int, dim: int | None = None, tol: float = 1e-9) -> ConvergenceCheck:
    if f.declared_lip is None:
        raise ValueError("convergence estimates need a declared Lipschitz bound")
    level = GridLevel(n, dim)
    if dim is None:
        if not isinstance(x, FiniteSupportPoint):
            raise TypeError("sequence mode expects finitely supported points")
        tail = x.tail(n)
        lead = x.leading(n)
        cells = n
    else:
        lead = _as_coords(x)
        tail = 0.0
        cells = dim
    clamped = bool(np.max(np.abs(lead), initial=0.0) > 2.0 ** (n - 1))
    value = lip_projection_at(f, x, level)
    exact = float(f(x))
    error = abs(value - exact)
    bound = 2.0 * f.declared_lip * (tail + cells * 2.0 ** (1 - n))
    ok = None if clamped else bool(error <= bound + tol)
    return ConvergenceCheck(value=value, exact=exact, error=error, bound=bound, clamped=clamped, ok=ok)
