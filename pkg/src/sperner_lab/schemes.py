"""Rating schemes: deterministic rules that color each vertex by one of its intervals.

A scheme looks at a single vertex and picks the label of a nonempty interval,
so the resulting vertex coloring always specializes the subdivision map.  Two
rule kinds are supported: a ranked preference list with a tiebreak fallback,
and largest-interval-wins with ties settled by the tiebreak order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partitions import Partition, PartitionComplex
from .simplicial import VertexMap


def _check_tiebreak(n: int, tiebreak) -> tuple:
    if tiebreak is None:
        return tuple(range(1, n + 1))
    tb = tuple(int(x) for x in tiebreak)
    if sorted(tb) != list(range(1, n + 1)):
        raise ValueError(f"tiebreak must be a permutation of 1..{n}, got {tb}")
    return tb


@dataclass(frozen=True)
class RatingScheme:
    """A vertex-coloring rule over ``n`` interval labels.

    ``kind`` is ``"ranked"`` (walk ``ranks``, first label with a nonempty
    interval wins, otherwise fall through to the tiebreak order) or
    ``"longest"`` (largest interval wins, ties settled by tiebreak order).
    The tiebreak is always stored as an explicit permutation of ``1..n``.
    """

    n: int
    kind: str
    ranks: tuple
    tiebreak: tuple

    def __post_init__(self):
        if self.kind not in ("ranked", "longest"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        object.__setattr__(self, "ranks", tuple(int(x) for x in self.ranks))
        object.__setattr__(self, "tiebreak", _check_tiebreak(self.n, self.tiebreak))
        if self.kind == "longest" and self.ranks:
            raise ValueError("longest-interval schemes take no rank list")
        if self.kind == "ranked":
            if not self.ranks:
                raise ValueError("ranked schemes need at least one preferred label")
            if not set(self.ranks) <= set(range(1, self.n + 1)):
                raise ValueError("ranks must be interval labels")

    def describe(self) -> str:
        if self.kind == "longest":
            return "longest"
        return "ranked:" + ",".join(str(x) for x in self.ranks)


def ranked_scheme(n: int, ranks, tiebreak=None) -> RatingScheme:
    return RatingScheme(n, "ranked", tuple(ranks), _check_tiebreak(n, tiebreak))


def longest_interval_scheme(n: int, tiebreak=None) -> RatingScheme:
    return RatingScheme(n, "longest", (), _check_tiebreak(n, tiebreak))


def star_hypergraph_schemes(tiebreak=None) -> tuple:
    """Three rules on four intervals: the i-th prefers interval i, else interval 4.

    On the full subdivision these colorings produce solution faces whose
    color hypergraph is the four-vertex star.
    """
    return tuple(ranked_scheme(4, (i, 4), tiebreak) for i in (1, 2, 3))


def path_hypergraph_schemes(tiebreak) -> tuple:
    """Prefer-1-else-3, prefer-2-else-4, and longest-interval on four intervals.

    Solution faces under these colorings carry the four-vertex path as their
    color hypergraph.  The tiebreak order matters for the third rule, so it
    must be given explicitly.
    """
    tb = _check_tiebreak(4, tiebreak)
    if tiebreak is None:
        raise ValueError("these schemes need an explicit tiebreak permutation")
    return (
        ranked_scheme(4, (1, 3), tb),
        ranked_scheme(4, (2, 4), tb),
        longest_interval_scheme(4, tb),
    )


def color_vertex(scheme: RatingScheme, p: Partition) -> int:
    """Apply a scheme to one vertex.  Always returns a nonempty interval's label."""
    if p.n != scheme.n:
        raise ValueError(f"scheme is for {scheme.n} intervals, vertex has {p.n}")
    if p.r < 1:
        raise ValueError("coloring needs resolution at least 1")
    nonempty = set(p.nonempty_intervals())
    if scheme.kind == "ranked":
        for lbl in scheme.ranks:
            if lbl in nonempty:
                return lbl
        for lbl in scheme.tiebreak:
            if lbl in nonempty:
                return lbl
        raise AssertionError("unreachable: some interval is always nonempty")
    lengths = {i: p.interval_length(i) for i in range(1, p.n + 1)}
    best = max(lengths.values())
    for lbl in scheme.tiebreak:
        if lengths[lbl] == best:
            return lbl
    raise AssertionError("unreachable: the longest interval exists")


def coloring_from_scheme(pc: PartitionComplex, scheme: RatingScheme) -> VertexMap:
    """Color every vertex of the subdivision by the scheme's rule."""
    return VertexMap(
        pc.complex,
        pc.target_simplex,
        {v: color_vertex(scheme, v) for v in pc.complex.sorted_vertices},
    )


def random_sperner_coloring(pc: PartitionComplex, seed: int, stream: int = 0) -> VertexMap:
    """Color each vertex uniformly among its own nonempty intervals.

    Randomness comes from the Philox counter-based generator keyed by
    ``seed``; ``stream`` selects a disjoint counter block, so one seed can
    drive several independent colorings.  A fixed (seed, stream) pair gives
    the same coloring on every run.
    """
    rng = np.random.Generator(np.random.Philox(key=int(seed), counter=int(stream) * 2**128))
    assignment = {}
    for v in pc.complex.sorted_vertices:
        choices = v.nonempty_intervals()
        assignment[v] = int(choices[rng.integers(len(choices))])
    return VertexMap(pc.complex, pc.target_simplex, assignment)


def parse_scheme(text: str, n: int, tiebreak=None) -> RatingScheme:
    """Parse a compact scheme string: ``"longest"`` or ``"ranked:1,4"``."""
    if text == "longest":
        return longest_interval_scheme(n, tiebreak)
    if text.startswith("ranked:"):
        ranks = tuple(int(x) for x in text.removeprefix("ranked:").split(","))
        return ranked_scheme(n, ranks, tiebreak)
    raise ValueError(f"unknown scheme {text!r}")


# ---------------------------------------------------------------------------
# descriptors


def scheme_to_descriptor(s: RatingScheme) -> dict:
    if s.kind == "ranked":
        return {"kind": "ranked", "ranks": list(s.ranks), "tiebreak": list(s.tiebreak)}
    return {"kind": "longest", "tiebreak": list(s.tiebreak)}


def scheme_from_descriptor(doc: dict) -> RatingScheme:
    tb = tuple(int(x) for x in doc["tiebreak"])
    n = len(tb)
    if doc["kind"] == "ranked":
        return ranked_scheme(n, tuple(int(x) for x in doc["ranks"]), tb)
    if doc["kind"] == "longest":
        return longest_interval_scheme(n, tb)
    raise ValueError(f"unknown scheme kind {doc.get('kind')!r}")
