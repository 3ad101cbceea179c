"""Staircase subdivision of a simplex by monotone integer partitions.

Vertices are nondecreasing maps ``pi: [0,n] -> [0,r]`` with ``pi(0)=0`` and
``pi(n)=r``, read as a division of ``r`` units among ``n`` ordered intervals.
A set of vertices is a face when every pair differs by 0 or by a single
common step direction in each coordinate; the facets are the maximal chains.
Realizing each vertex at its interval-length barycentric coordinates tiles
the standard simplex on the interval labels ``1..n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .simplicial import (
    Complex,
    FaceMap,
    RealizationPoint,
    simplex,
)


class MixedParametersError(ValueError):
    """Partitions with different ambient (n, r) cannot share a face."""


@dataclass(frozen=True, order=True)
class Partition:
    """One vertex: a nondecreasing lattice path from (0, 0) to (n, r)."""

    n: int
    r: int
    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.n < 1:
            raise ValueError("need at least one interval")
        if self.r < 0:
            raise ValueError("resolution must be nonnegative")
        if len(vals) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} values, got {len(vals)}")
        if vals[0] != 0 or vals[-1] != self.r:
            raise ValueError("path must start at 0 and end at r")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("path must be nondecreasing")

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "Partition":
        vals = tuple(int(v) for v in values)
        return cls(len(vals) - 1, vals[-1], vals)

    def interval_length(self, i: int) -> int:
        return self.values[i] - self.values[i - 1]

    def nonempty_intervals(self) -> tuple:
        """Labels of intervals holding at least one unit, ascending."""
        return tuple(
            i for i in range(1, self.n + 1) if self.values[i] > self.values[i - 1]
        )

    @property
    def label(self) -> str:
        return ",".join(str(v) for v in self.values)

    def __repr__(self):
        return f"Partition({self.label})"


def enumerate_partitions(n: int, r: int) -> tuple:
    """All vertices for the given parameters, in lexicographic order.

    There are C(r+n-1, n-1) of them: one per nondecreasing choice of the
    n-1 interior values.
    """
    if n < 1:
        raise ValueError("need at least one interval")
    if r < 0:
        raise ValueError("resolution must be nonnegative")
    out = []
    for mid in itertools.combinations_with_replacement(range(r + 1), n - 1):
        out.append(Partition(n, r, (0, *mid, r)))
    return tuple(out)


def is_face(parts: Iterable[Partition]) -> bool:
    """Pairwise chain test: each pair must differ by {0, e} in every coordinate for one e."""
    plist = list(parts)
    if not plist:
        return True
    n, r = plist[0].n, plist[0].r
    for p in plist:
        if (p.n, p.r) != (n, r):
            raise MixedParametersError(
                f"mixed parameters: ({p.n},{p.r}) vs ({n},{r})"
            )
    for a, b in itertools.combinations(plist, 2):
        diffs = {x - y for x, y in zip(a.values, b.values)}
        if not (diffs <= {0, 1} or diffs <= {0, -1}):
            return False
    return True


def subdivision_map(parts: Iterable[Partition]) -> frozenset:
    """Interval labels where any member of the face takes a step."""
    out = set()
    for p in parts:
        out.update(p.nonempty_intervals())
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class PartitionComplex:
    """The full subdivision for one (n, r), with facets in generation order."""

    n: int
    r: int
    complex: Complex
    facets: tuple

    def __post_init__(self):
        for f in self.facets:
            if len(f) != self.n:
                raise ValueError("every facet must have exactly n vertices")

    @cached_property
    def target_simplex(self) -> Complex:
        """The undivided simplex on the interval labels 1..n."""
        return simplex(range(1, self.n + 1))

    @cached_property
    def face_map(self) -> FaceMap:
        """The subdivision map as a checked order-preserving face map."""
        return FaceMap(
            self.complex,
            self.target_simplex,
            {f: subdivision_map(f) for f in self.complex.faces},
        )

    def __repr__(self):
        return (
            f"PartitionComplex(n={self.n}, r={self.r}, "
            f"|V|={len(self.complex.vertices)}, facets={len(self.facets)})"
        )


def _chain_extensions(top: Partition, free: tuple) -> list:
    # coordinate i can step up iff the path stays nondecreasing afterwards
    out = []
    vals = top.values
    for i in free:
        if vals[i] < vals[i + 1]:
            out.append(
                (i, Partition(top.n, top.r, vals[:i] + (vals[i] + 1,) + vals[i + 1:]))
            )
    return out


def build(n: int, r: int) -> PartitionComplex:
    """Construct the subdivision by enumerating facets as unit-step chains.

    Every facet is a chain of n vertices that climbs each interior coordinate
    exactly once; chains are generated from each bottom vertex with steps
    tried in ascending coordinate order, so the facet list is reproducible.
    Faces are the downward closure of the facets.
    """
    if r < 1:
        raise ValueError("resolution must be at least 1")
    verts = enumerate_partitions(n, r)
    facets = []

    def grow(chain, used):
        if len(chain) == n:
            facets.append(frozenset(chain))
            return
        for i, nxt in _chain_extensions(chain[-1], tuple(j for j in range(1, n) if j not in used)):
            grow(chain + [nxt], used | {i})

    for bottom in verts:
        grow([bottom], frozenset())

    faces = {frozenset()}
    for facet in facets:
        members = tuple(facet)
        for k in range(1, len(members) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(members, k))
    return PartitionComplex(n, r, Complex(frozenset(faces)), tuple(facets))


def realize_vertex(p: Partition, target: Complex | None = None) -> RealizationPoint:
    """Barycentric coordinates of a vertex: interval lengths divided by r."""
    if p.r < 1:
        raise ValueError("realization needs resolution at least 1")
    if target is None:
        target = simplex(range(1, p.n + 1))
    w = {
        i: p.interval_length(i) / p.r
        for i in range(1, p.n + 1)
        if p.interval_length(i) > 0
    }
    return RealizationPoint(target, w)


def boundary_vertex_cycle(pc: PartitionComplex) -> tuple:
    """Closed walk around the boundary for n=3, one full turn.

    Runs corner 1 -> corner 2 -> corner 3 -> back, which the realization
    maps to a counterclockwise turn when the three corners are embedded
    counterclockwise.  Consecutive entries are edges of the complex.
    """
    if pc.n != 3:
        raise ValueError("boundary walk is defined for three intervals")
    r = pc.r
    side12 = [Partition(3, r, (0, j, r, r)) for j in range(r, -1, -1)]
    side23 = [Partition(3, r, (0, 0, j, r)) for j in range(r, -1, -1)]
    side31 = [Partition(3, r, (0, j, j, r)) for j in range(0, r + 1)]
    return tuple(side12[:-1] + side23[:-1] + side31[:-1])


# ---------------------------------------------------------------------------
# serialization


def partition_complex_to_doc(pc: PartitionComplex) -> dict:
    """Vertices as integer arrays (lexicographic), faces as ascending index arrays."""
    verts = pc.complex.sorted_vertices
    index = {v: i for i, v in enumerate(verts)}
    faces = sorted(
        (sorted(index[v] for v in f) for f in pc.complex.faces),
        key=lambda t: (len(t), t),
    )
    return {
        "n": pc.n,
        "r": pc.r,
        "vertices": [list(v.values) for v in verts],
        "faces": faces,
    }


def partition_complex_from_doc(doc: dict) -> PartitionComplex:
    pc = build(int(doc["n"]), int(doc["r"]))
    mine = partition_complex_to_doc(pc)
    if mine["vertices"] != [list(map(int, v)) for v in doc["vertices"]] or mine[
        "faces"
    ] != [list(map(int, f)) for f in doc["faces"]]:
        raise ValueError("document does not describe a full subdivision")
    return pc
