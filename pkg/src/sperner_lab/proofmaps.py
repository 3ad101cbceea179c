"""Numerical checks for the continuous maps behind the solution-existence argument.

Vocabulary used throughout this module.  A *grid* is a nonnegative table
indexed by colors (columns) and coloring indices (rows).  A row is *thin*
when its support is at most that row's bound ``m_i``.  The *row space* holds
grids whose rows each sum to 1 with at least one thin row; the *mass space*
holds grids with total mass 1 whose rows are all thin.  ``equalize_rows``
carries mass-space points into the row space by shifting and scaling rows;
``trim_rows`` goes back by soft-thresholding each row to its top entries and
renormalizing; ``color_marginal`` collapses a mass-space point to per-color
totals, which lands on the boundary of the color simplex whenever the bounds
sum to one less than the number of colors.  All comparisons use absolute
tolerance ``1e-12``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import partitions as pt
from .simplicial import RealizationPoint, VertexMap, pushforward
from .solver import SizeVector, is_size_solution

TOL = 1e-12


class OutsideRowSpaceError(ValueError):
    """Input grid is not in the row space for the given bounds."""


class OutsideMassSpaceError(ValueError):
    """Input grid is not in the mass space for the given bounds."""


class DegenerateNormalizerError(RuntimeError):
    """Trimming removed all mass.  Unreachable for row-space input."""


class BoundarySolutionFoundError(RuntimeError):
    """A face on the boundary walk is itself a size-solution."""

    def __init__(self, face):
        self.face = tuple(sorted(face))
        super().__init__(
            "boundary face is a size-solution: "
            + "; ".join(v.label for v in self.face)
        )


class WindingConvergenceError(RuntimeError):
    """Angle steps stayed too coarse after the maximum refinement depth."""


@dataclass(frozen=True, eq=False)
class NonnegGrid:
    """A nonnegative colors-by-indices table.  Rows follow ``indices``."""

    colors: tuple
    indices: tuple
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(self.indices), len(self.colors)):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"{len(self.indices)} indices x {len(self.colors)} colors"
            )
        if vals.size and vals.min() < 0.0:
            raise ValueError("grid values must be nonnegative")
        vals.setflags(write=False)
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "values", vals)

    def to_doc(self) -> dict:
        return {
            "colors": list(self.colors),
            "indices": list(self.indices),
            "values": [[float(x) for x in row] for row in self.values],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "NonnegGrid":
        return cls(tuple(doc["colors"]), tuple(doc["indices"]), doc["values"])


def make_grid(values, colors=None, indices=None) -> NonnegGrid:
    vals = np.array(values, dtype=float)
    if vals.ndim != 2:
        raise ValueError("grid values must be a 2-d table")
    rows, cols = vals.shape
    if colors is None:
        colors = tuple(range(1, cols + 1))
    if indices is None:
        indices = tuple(range(1, rows + 1))
    return NonnegGrid(tuple(colors), tuple(indices), vals)


class GridSums(NamedTuple):
    total: float
    by_index: np.ndarray
    by_color: np.ndarray


def grid_sums(g: NonnegGrid) -> GridSums:
    """Total mass, per-index row sums, per-color column sums."""
    return GridSums(float(g.values.sum()), g.values.sum(axis=1), g.values.sum(axis=0))


def _coerce_bounds(g: NonnegGrid, m) -> SizeVector:
    m = SizeVector.coerce(m)
    if len(m.values) != len(g.indices):
        raise ValueError("one bound per index row")
    return m


def row_supports(g: NonnegGrid) -> np.ndarray:
    return (g.values > 0.0).sum(axis=1)


def in_row_space(g: NonnegGrid, m, tol: float = TOL) -> bool:
    """Every row sums to 1 and at least one row is thin."""
    m = _coerce_bounds(g, m)
    sums = g.values.sum(axis=1)
    if np.abs(sums - 1.0).max() > tol:
        return False
    return bool((row_supports(g) <= np.array(m.values)).any())


def in_mass_space(g: NonnegGrid, m, tol: float = TOL) -> bool:
    """Total mass 1 and every row is thin."""
    m = _coerce_bounds(g, m)
    if abs(g.values.sum() - 1.0) > tol:
        return False
    return bool((row_supports(g) <= np.array(m.values)).all())


def row_trim_thresholds(g: NonnegGrid, m) -> np.ndarray:
    """Per row, the smallest shift whose strict survivors number at most the bound.

    Equals the (m_i+1)-th largest row entry, or 0 when the bound is at least
    the number of colors.  For a row summing to 1 the value is at most
    1/(m_i+1).
    """
    m = _coerce_bounds(g, m)
    out = np.zeros(len(g.indices))
    ncol = len(g.colors)
    for i, b in enumerate(m.values):
        if b < ncol:
            out[i] = np.sort(g.values[i])[::-1][b]
    return out


def equalize_rows(y: NonnegGrid, m) -> NonnegGrid:
    """Mass space to row space: shift each row up to the heaviest row's sum, then scale.

    Row ``i`` gains ``(max_j S_j - S_i) / ncolors`` in every cell and the whole
    grid is scaled by the inverse of the heaviest row sum, making every row a
    probability vector.  Heaviest rows keep their support unchanged, so the
    result has a thin row.
    """
    m = _coerce_bounds(y, m)
    if not in_mass_space(y, m):
        raise OutsideMassSpaceError("input is not in the mass space")
    sums = y.values.sum(axis=1)
    top = sums.max()
    shift = (top - sums) / len(y.colors)
    vals = (y.values + shift[:, None]) / top
    return NonnegGrid(y.colors, y.indices, vals)


def trim_rows(x: NonnegGrid, m) -> NonnegGrid:
    """Row space to mass space: drop each row below its threshold, renormalize the total.

    Entries at or below the row threshold go to exactly zero, which caps each
    row's support at its bound; the surviving mass is scaled to total 1.
    """
    m = _coerce_bounds(x, m)
    if not in_row_space(x, m):
        raise OutsideRowSpaceError("input is not in the row space")
    thr = row_trim_thresholds(x, m)
    shifted = np.maximum(x.values - thr[:, None], 0.0)
    total = shifted.sum()
    if total <= 0.0:
        raise DegenerateNormalizerError("all mass trimmed away")
    return NonnegGrid(x.colors, x.indices, shifted / total)


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A point of the color simplex boundary: nonnegative coords summing to 1, one of them 0."""

    colors: tuple
    coords: np.ndarray

    def __post_init__(self):
        vals = np.array(self.coords, dtype=float)
        if vals.shape != (len(self.colors),):
            raise ValueError("one coordinate per color")
        if vals.size and vals.min() < 0.0:
            raise ValueError("coordinates must be nonnegative")
        if abs(vals.sum() - 1.0) > TOL:
            raise ValueError(f"coordinates sum to {vals.sum()}, expected 1")
        if vals.min() > TOL:
            raise ValueError("no coordinate vanishes: not a boundary point")
        vals.setflags(write=False)
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "coords", vals)


def color_marginal(y: NonnegGrid, m) -> BoundaryPoint:
    """Collapse a mass-space point to its per-color totals.

    Thin rows can only cover ``sum(m)`` colors, so with bounds summing to one
    less than the color count some color's total is exactly zero and the
    marginal lies on the simplex boundary.
    """
    m = _coerce_bounds(y, m)
    if not in_mass_space(y, m):
        raise OutsideMassSpaceError("input is not in the mass space")
    return BoundaryPoint(y.colors, y.values.sum(axis=0))


def coloring_profile(
    k: RealizationPoint, colorings: Sequence[VertexMap], indices=None
) -> NonnegGrid:
    """Stack the pushforwards of a realization point along each coloring."""
    if not colorings:
        raise ValueError("need at least one coloring")
    target = colorings[0].target
    for c in colorings:
        if c.target != target:
            raise ValueError("colorings must share their target")
    colors = target.sorted_vertices
    if indices is None:
        indices = tuple(range(1, len(colorings) + 1))
    vals = np.zeros((len(colorings), len(colors)))
    pos = {c: j for j, c in enumerate(colors)}
    for i, c in enumerate(colorings):
        moved = pushforward(c, k)
        for v, w in moved.weights.items():
            vals[i, pos[v]] = w
    return NonnegGrid(colors, tuple(indices), vals)


def linear_blend(x: NonnegGrid, m, t: float) -> NonnegGrid:
    """Straight-line point between ``x`` and its trim-then-equalize image.

    Membership of the blend in the row space is a question, not a guarantee;
    callers should log it rather than assert it.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("blend parameter must lie in [0, 1]")
    m = _coerce_bounds(x, m)
    if not in_row_space(x, m):
        raise OutsideRowSpaceError("input is not in the row space")
    back = equalize_rows(trim_rows(x, m), m)
    return NonnegGrid(x.colors, x.indices, t * x.values + (1.0 - t) * back.values)


def trim_equalize_roundtrip_gap(y: NonnegGrid, m) -> float:
    """Max absolute deviation of trim(equalize(y)) from y.  Zero in exact arithmetic."""
    back = trim_rows(equalize_rows(y, m), m)
    return float(np.abs(back.values - y.values).max())


# ---------------------------------------------------------------------------
# random sampling (all draws Philox-keyed by the caller's generator)


def random_bounds(rng: np.random.Generator, n_colors: int, k: int) -> tuple:
    """A random bound vector for ``k`` colorings summing to ``n_colors - 1``."""
    return tuple(int(v) for v in rng.multinomial(n_colors - 1, [1.0 / k] * k))


def random_mass_point(rng: np.random.Generator, n_colors: int, m) -> NonnegGrid:
    """Uniform-support random point of the mass space."""
    m = SizeVector.coerce(m)
    if all(b == 0 for b in m.values):
        raise ValueError("the mass space is empty when every bound is zero")
    k = len(m.values)
    vals = np.zeros((k, n_colors))
    while True:
        sizes = [int(rng.integers(0, min(b, n_colors) + 1)) for b in m.values]
        if any(sizes):
            break
    for i, s in enumerate(sizes):
        if s:
            cols = rng.choice(n_colors, size=s, replace=False)
            vals[i, cols] = rng.uniform(0.1, 1.0, size=s)
    vals /= vals.sum()
    return make_grid(vals)


def random_row_point(rng: np.random.Generator, n_colors: int, m) -> NonnegGrid:
    """Random point of the row space: one witness row kept thin, others arbitrary."""
    m = SizeVector.coerce(m)
    candidates = [i for i, b in enumerate(m.values) if b >= 1]
    if not candidates:
        raise ValueError("the row space is empty when every bound is zero")
    witness = candidates[int(rng.integers(len(candidates)))]
    k = len(m.values)
    vals = np.zeros((k, n_colors))
    for i in range(k):
        cap = min(m.values[i], n_colors) if i == witness else n_colors
        s = int(rng.integers(1, cap + 1))
        cols = rng.choice(n_colors, size=s, replace=False)
        vals[i, cols] = rng.uniform(0.1, 1.0, size=s)
        vals[i] /= vals[i].sum()
    return make_grid(vals)


# ---------------------------------------------------------------------------
# boundary winding


@dataclass(frozen=True)
class WindingResult:
    winding: int
    depth: int
    samples: int
    trace: tuple | None = None


def _corner_embedding(n_colors: int) -> tuple:
    angles = [math.pi / 2 + 2.0 * math.pi * j / n_colors for j in range(n_colors)]
    return np.array([math.cos(a) for a in angles]), np.array(
        [math.sin(a) for a in angles]
    )


def boundary_winding(
    pc: pt.PartitionComplex,
    colorings: Sequence[VertexMap],
    m,
    *,
    initial_depth: int = 3,
    max_depth: int = 20,
    want_trace: bool = False,
) -> WindingResult:
    """Winding number of the trimmed color marginal around the simplex center.

    Walks the boundary of the three-interval subdivision once (image corners
    counterclockwise), maps each sample through profile -> trim -> marginal,
    and accumulates the image angle.  Sampling starts at ``2**initial_depth``
    points per boundary edge and doubles until neighboring image angles differ
    by less than pi/4; failing to get there by ``max_depth`` is an error.
    A boundary face that is itself a size-solution makes the map undefined on
    that edge and is reported instead.
    """
    if pc.n != 3:
        raise ValueError("winding is computed over three intervals")
    m = SizeVector.coerce(m)
    if len(m.values) != len(colorings):
        raise ValueError("one bound per coloring")
    if m.total != pc.n - 1:
        raise ValueError("winding needs bounds summing to one less than the color count")

    cycle = pt.boundary_vertex_cycle(pc)
    edges = [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
    for u, v in edges:
        if is_size_solution({u, v}, colorings, m):
            raise BoundarySolutionFoundError((u, v))

    colors = colorings[0].target.sorted_vertices
    pos = {c: j for j, c in enumerate(colors)}
    mvec = np.array(m.values)
    ncol = len(colors)

    def vertex_profile(v):
        vals = np.zeros((len(colorings), ncol))
        for i, c in enumerate(colorings):
            vals[i, pos[c.assignment[v]]] = 1.0
        return vals

    profiles = {v: vertex_profile(v) for v in cycle}
    ex, ey = _corner_embedding(ncol)

    def image_angle(vals):
        thr = np.zeros(len(colorings))
        for i in range(len(colorings)):
            if mvec[i] < ncol:
                thr[i] = np.sort(vals[i])[::-1][mvec[i]]
        shifted = np.maximum(vals - thr[:, None], 0.0)
        total = shifted.sum()
        if total <= 0.0:
            raise DegenerateNormalizerError("all mass trimmed away on the boundary")
        marginal = shifted.sum(axis=0) / total
        return math.atan2(float(marginal @ ey), float(marginal @ ex))

    depth = initial_depth
    while True:
        per_edge = 2**depth
        params = []
        angles = []
        for e_idx, (u, v) in enumerate(edges):
            gu, gv = profiles[u], profiles[v]
            for j in range(per_edge):
                t = j / per_edge
                angles.append(image_angle((1.0 - t) * gu + t * gv))
                params.append((e_idx + t) / len(edges))
        deltas = []
        for a, b in zip(angles, angles[1:] + angles[:1]):
            d = b - a
            while d <= -math.pi:
                d += 2.0 * math.pi
            while d > math.pi:
                d -= 2.0 * math.pi
            deltas.append(d)
        if max(abs(d) for d in deltas) < math.pi / 4:
            break
        depth += 1
        if depth > max_depth:
            raise WindingConvergenceError(
                f"angle steps still coarse at depth {max_depth}"
            )
    turn = sum(deltas) / (2.0 * math.pi)
    winding = round(turn)
    if abs(turn - winding) > 1e-6:
        raise WindingConvergenceError(f"accumulated turn {turn} is not an integer")
    trace = tuple(zip(params, angles)) if want_trace else None
    return WindingResult(winding=int(winding), depth=depth, samples=len(angles), trace=trace)


# ---------------------------------------------------------------------------
# randomized property suites


def verify_suites(
    samples: int = 10000,
    seed: int = 0,
    n_colors: int | None = None,
    m=None,
) -> tuple:
    """Randomized checks of the numeric maps.  Returns ``(records, all_ok)``.

    Dimensions are redrawn per sample unless pinned by ``n_colors`` / ``m``;
    bound vectors always sum to one less than the color count, which is the
    regime the existence argument needs.  Each record carries the suite name,
    sample count, the worst observed value, and a pass flag (``None`` marks
    the informational blend suite, which measures rather than asserts).
    """
    if m is not None:
        m = SizeVector.coerce(m)
        if n_colors is None:
            n_colors = m.total + 1
    if n_colors is not None and n_colors < 2:
        raise ValueError("property suites need at least two colors")
    rng = np.random.Generator(np.random.Philox(key=int(seed)))

    def draw_dims():
        nc = n_colors if n_colors is not None else int(rng.integers(2, 6))
        if m is not None:
            return nc, m
        k = int(rng.integers(1, 5))
        return nc, SizeVector(random_bounds(rng, nc, k))

    worst_roundtrip = 0.0
    equalize_misses = 0
    worst_row_sum = 0.0
    worst_marginal_min = 0.0
    for _ in range(samples):
        nc, mm = draw_dims()
        y = random_mass_point(rng, nc, mm)
        x = equalize_rows(y, mm)
        worst_roundtrip = max(worst_roundtrip, trim_equalize_roundtrip_gap(y, mm))
        equalize_misses += int(not in_row_space(x, mm))
        worst_row_sum = max(worst_row_sum, float(np.abs(x.values.sum(axis=1) - 1.0).max()))
        worst_marginal_min = max(worst_marginal_min, float(min(color_marginal(y, mm).coords)))

    trim_misses = 0
    worst_threshold = -1.0
    blend_inside = 0
    for _ in range(samples):
        nc, mm = draw_dims()
        x = random_row_point(rng, nc, mm)
        trim_misses += int(not in_mass_space(trim_rows(x, mm), mm))
        thr = row_trim_thresholds(x, mm)
        caps = np.array([1.0 / (b + 1) for b in mm.values])
        worst_threshold = max(worst_threshold, float((np.array(thr) - caps).max()))
        t = float(rng.uniform())
        blend_inside += int(in_row_space(linear_blend(x, mm, t), mm))

    records = [
        {
            "record": "property",
            "name": "trim_equalize_roundtrip_is_identity",
            "samples": samples,
            "worst": worst_roundtrip,
            "bound": TOL,
            "pass": worst_roundtrip <= TOL,
        },
        {
            "record": "property",
            "name": "equalize_lands_in_row_space",
            "samples": samples,
            "worst": float(equalize_misses),
            "bound": 0.0,
            "pass": equalize_misses == 0,
        },
        {
            "record": "property",
            "name": "equalized_rows_sum_to_one",
            "samples": samples,
            "worst": worst_row_sum,
            "bound": TOL,
            "pass": worst_row_sum <= TOL,
        },
        {
            "record": "property",
            "name": "marginal_lies_on_simplex_boundary",
            "samples": samples,
            "worst": worst_marginal_min,
            "bound": TOL,
            "pass": worst_marginal_min <= TOL,
        },
        {
            "record": "property",
            "name": "trim_lands_in_mass_space",
            "samples": samples,
            "worst": float(trim_misses),
            "bound": 0.0,
            "pass": trim_misses == 0,
        },
        {
            "record": "property",
            "name": "trim_thresholds_capped_by_bound_fraction",
            "samples": samples,
            "worst": worst_threshold,
            "bound": TOL,
            "pass": worst_threshold <= TOL,
        },
        {
            "record": "property",
            "name": "blend_stays_in_row_space",
            "samples": samples,
            "worst": 1.0 - blend_inside / samples,
            "bound": None,
            "pass": None,
        },
    ]
    all_ok = all(r["pass"] for r in records if r["pass"] is not None)
    return records, all_ok
