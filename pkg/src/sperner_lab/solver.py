"""Solution-face search and color-hypergraph analysis.

A face is a size-solution for colorings ``c_1..c_k`` and bounds ``m_1..m_k``
when every coloring shows strictly more than ``m_i`` colors on it, and a full
solution when additionally the colors seen across all colorings cover every
label.  Both predicates are monotone under face inclusion, so facet scans
decide existence and greedy deletion finds minimal witnesses.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import partitions as pt
from .schemes import (
    RatingScheme,
    coloring_from_scheme,
    parse_scheme,
    random_sperner_coloring,
)
from .simplicial import VertexMap

STAR = "star"
PATH = "path"
OTHER = "other"
NOT_A_TREE = "not-a-tree"
NOT_APPLICABLE = "not-applicable"


class NoSolutionError(RuntimeError):
    """No size-solution exists: a theorem violation.  Carries a reproduction bundle."""

    def __init__(self, bundle: dict):
        self.bundle = bundle
        super().__init__(
            "no size-solution found for a theorem-sized instance; "
            "reproduction bundle attached"
        )


@dataclass(frozen=True)
class SizeVector:
    """Per-coloring lower bounds (a solution must show more than ``values[i]`` colors)."""

    values: tuple

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("need at least one bound")
        if any(v < 0 for v in vals):
            raise ValueError("bounds must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.values)

    def theorem_sized(self, n_colors: int) -> bool:
        return self.total == n_colors - 1

    @classmethod
    def coerce(cls, m) -> "SizeVector":
        if isinstance(m, cls):
            return m
        return cls(tuple(m))


@dataclass(frozen=True)
class ColorHypergraph:
    """The multiset of per-coloring color sets on a face."""

    colors: tuple
    edges: tuple

    def __post_init__(self):
        colors = tuple(self.colors)
        edges = tuple(frozenset(e) for e in self.edges)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "edges", edges)
        cset = set(colors)
        for e in edges:
            if not e:
                raise ValueError("hypergraph edges must be nonempty")
            if not e <= cset:
                raise ValueError("edge uses unknown colors")


def color_set(c: VertexMap, face) -> frozenset:
    """Colors that ``c`` uses on the face."""
    return c.face_image(face)


def is_size_solution(face, colorings: Sequence[VertexMap], m) -> bool:
    m = SizeVector.coerce(m)
    if len(colorings) != len(m.values):
        raise ValueError("one bound per coloring")
    face = frozenset(face)
    return all(
        len(c.face_image(face)) >= b + 1 for c, b in zip(colorings, m.values)
    )


def is_full_solution(face, colorings: Sequence[VertexMap], m, colors) -> bool:
    if not is_size_solution(face, colorings, m):
        return False
    seen = set()
    for c in colorings:
        seen.update(c.face_image(face))
    return seen == set(colors)


def hypergraph_of(face, colorings: Sequence[VertexMap], colors) -> ColorHypergraph:
    face = frozenset(face)
    if not face:
        raise ValueError("the empty face has no color hypergraph")
    return ColorHypergraph(tuple(colors), tuple(c.face_image(face) for c in colorings))


def has_isolated_colors(H: ColorHypergraph) -> bool:
    covered = set()
    for e in H.edges:
        covered.update(e)
    return not set(H.colors) <= covered


def is_connected(H: ColorHypergraph) -> bool:
    """Incidence-graph connectivity, and every color must appear in some edge."""
    colors = set(H.colors)
    covered = set()
    for e in H.edges:
        covered.update(e)
    if covered != colors:
        return False
    if not colors:
        return True
    parent = {c: c for c in colors}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in H.edges:
        members = sorted(e)
        for b in members[1:]:
            ra, rb = find(members[0]), find(b)
            if ra != rb:
                parent[rb] = ra
    roots = {find(c) for c in colors}
    return len(roots) == 1


def tree_shape(H: ColorHypergraph) -> str:
    """Classify the underlying graph when all edges are pairs.

    Returns one of ``star``, ``path``, ``other`` (a tree that is neither),
    ``not-a-tree``, or ``not-applicable`` when some edge is not a pair.
    Trees on up to two vertices count as paths; a three-vertex path has a
    center and counts as a star.
    """
    if any(len(e) != 2 for e in H.edges):
        return NOT_APPLICABLE
    n = len(H.colors)
    if not (is_connected(H) and len(H.edges) == n - 1):
        return NOT_A_TREE
    if n <= 2:
        return PATH
    if any(all(v in e for e in H.edges) for v in H.colors):
        return STAR
    degree = {c: 0 for c in H.colors}
    for e in H.edges:
        for v in e:
            degree[v] += 1
    if max(degree.values()) <= 2:
        return PATH
    return OTHER


@dataclass(frozen=True)
class SolutionReport:
    """One solution face with its color data.

    ``minimal`` refers to the size condition: removing any single vertex
    breaks it.  ``union_ok`` records whether the colors cover every label.
    """

    face: tuple
    color_sets: tuple
    size_ok: bool
    union_ok: bool
    hypergraph: ColorHypergraph
    connected: bool
    minimal: bool

    def to_record(self) -> dict:
        return {
            "record": "solution",
            "face": [list(v.values) for v in self.face],
            "color_sets": [sorted(s) for s in self.color_sets],
            "size_ok": self.size_ok,
            "union_ok": self.union_ok,
            "hypergraph": {
                "colors": list(self.hypergraph.colors),
                "edges": [sorted(e) for e in self.hypergraph.edges],
            },
            "shape": tree_shape(self.hypergraph),
            "connected": self.connected,
            "minimal": self.minimal,
        }


def _face_sort_key(face):
    return (len(face), tuple(sorted(v.values for v in face)))


def _validate_colorings(pc: pt.PartitionComplex, colorings) -> None:
    for c in colorings:
        if c.source is not pc.complex and c.source != pc.complex:
            raise ValueError("coloring does not live on the given subdivision")
        for v, lbl in c.assignment.items():
            if lbl not in v.nonempty_intervals():
                raise ValueError(
                    f"coloring is not a specialization: vertex {v.label} "
                    f"got label {lbl} for an empty interval"
                )


def violation_bundle(pc, colorings, m, context=None) -> dict:
    m = SizeVector.coerce(m)
    bundle = {
        "n": pc.n,
        "r": pc.r,
        "m": list(m.values),
        "colorings": [
            {v.label: int(c.assignment[v]) for v in pc.complex.sorted_vertices}
            for c in colorings
        ],
    }
    if context:
        bundle.update(context)
    return bundle


def find_solutions(
    pc: pt.PartitionComplex,
    colorings: Sequence[VertexMap],
    m,
    *,
    mode: str = "facets",
    validate: bool = True,
    context: dict | None = None,
) -> tuple:
    """Search the subdivision for solution faces.

    ``mode="facets"`` scans facets and greedily minimizes each hit (both
    predicates are upward closed, so this decides existence exactly).
    ``mode="all"`` filters every face; complete but slower, meant for desk
    sizes.  For theorem-sized bounds an empty result raises
    :class:`NoSolutionError` with a reproduction bundle.
    """
    m = SizeVector.coerce(m)
    if len(colorings) != len(m.values):
        raise ValueError("one bound per coloring")
    if validate:
        _validate_colorings(pc, colorings)
    colors = tuple(range(1, pc.n + 1))

    def size_ok(face):
        return all(
            len(c.face_image(face)) >= b + 1 for c, b in zip(colorings, m.values)
        )

    def minimal(face):
        return not any(size_ok(face - {v}) for v in face)

    def shrink(face):
        cur = set(face)
        for v in sorted(face):
            if len(cur) > 1 and v in cur and size_ok(cur - {v}):
                cur.discard(v)
        return frozenset(cur)

    hits: dict = {}

    def record(face):
        if face in hits:
            return
        sets = tuple(c.face_image(face) for c in colorings)
        union_ok = set().union(*sets) == set(colors)
        h = ColorHypergraph(colors, sets)
        hits[face] = SolutionReport(
            face=tuple(sorted(face)),
            color_sets=sets,
            size_ok=True,
            union_ok=union_ok,
            hypergraph=h,
            connected=is_connected(h),
            minimal=minimal(face),
        )

    if mode == "facets":
        for facet in pc.facets:
            if size_ok(facet):
                record(facet)
                record(shrink(facet))
    elif mode == "all":
        for face in pc.complex.faces:
            if face and size_ok(face):
                record(face)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    reports = tuple(sorted(hits.values(), key=lambda rep: _face_sort_key(rep.face)))
    if not reports and m.theorem_sized(pc.n):
        raise NoSolutionError(violation_bundle(pc, colorings, m, context))
    return reports


# ---------------------------------------------------------------------------
# conjecture sweep


def compositions(total: int, parts: int) -> tuple:
    """All weak compositions of ``total`` into ``parts`` parts, lexicographic."""
    if parts < 1:
        raise ValueError("need at least one part")
    out = []

    def rec(prefix, rest, left):
        if left == 1:
            out.append(prefix + (rest,))
            return
        for v in range(rest + 1):
            rec(prefix + (v,), rest - v, left - 1)

    rec((), total, parts)
    return tuple(out)


@dataclass(frozen=True)
class SweepGrid:
    """What to sweep: either random colorings over a parameter grid, or fixed scheme sets.

    In random mode every combination of ``ns`` x ``rs`` x ``coloring_counts``
    x (``m`` or all theorem-sized compositions) x ``seeds`` becomes one
    instance.  When ``scheme_sets`` is given the colorings are deterministic,
    the vertex-count is taken from the schemes, and seeds are ignored.
    """

    ns: tuple = ()
    rs: tuple = ()
    coloring_counts: tuple = (1, 2, 3)
    seeds: tuple = (0,)
    m: tuple | None = None
    scheme_sets: tuple | None = None


def sweep_instances(grid: SweepGrid) -> list:
    """Materialize the instance list, canonically ordered."""
    instances = []
    if grid.scheme_sets is not None:
        for schemes in grid.scheme_sets:
            n = schemes[0].n
            if any(s.n != n for s in schemes):
                raise ValueError("schemes in one set must share the interval count")
            mm = [tuple(grid.m)] if grid.m else compositions(n - 1, len(schemes))
            for r in grid.rs:
                for m in mm:
                    instances.append(
                        {
                            "n": n,
                            "r": int(r),
                            "m": list(m),
                            "schemes": [s.describe() for s in schemes],
                            "tiebreaks": [list(s.tiebreak) for s in schemes],
                            "seed": 0,
                        }
                    )
        return instances
    for n in grid.ns:
        for r in grid.rs:
            for k in grid.coloring_counts:
                mm = [tuple(grid.m)] if grid.m else compositions(n - 1, k)
                for m in mm:
                    if len(m) != k:
                        raise ValueError("bound vector length must match coloring count")
                    for seed in grid.seeds:
                        instances.append(
                            {
                                "n": int(n),
                                "r": int(r),
                                "m": list(m),
                                "schemes": ["random"] * k,
                                "tiebreaks": [None] * k,
                                "seed": int(seed),
                            }
                        )
    return instances


def instance_key(params: dict) -> str:
    fields = {k: params[k] for k in ("n", "r", "m", "schemes", "tiebreaks", "seed")}
    return json.dumps(fields, sort_keys=True, separators=(",", ":"))


@lru_cache(maxsize=32)
def _cached_build(n: int, r: int) -> pt.PartitionComplex:
    return pt.build(n, r)


def instance_colorings(pc, schemes, tiebreaks=None, seed=0) -> list:
    """Materialize colorings from textual scheme names.

    ``"random"`` entries draw a seeded coloring; position j uses stream j, so
    several random colorings in one instance stay independent but reproducible.
    """
    if tiebreaks is None:
        tiebreaks = [None] * len(schemes)
    colorings = []
    for j, name in enumerate(schemes):
        if name == "random":
            colorings.append(random_sperner_coloring(pc, seed, stream=j))
        else:
            scheme = parse_scheme(name, pc.n, tiebreaks[j])
            colorings.append(coloring_from_scheme(pc, scheme))
    return colorings


def _instance_colorings(pc, params) -> list:
    return instance_colorings(pc, params["schemes"], params["tiebreaks"], params["seed"])


def run_sweep_instance(params: dict) -> dict:
    """Facet scan for one instance.  Returns the finished record.

    ``full_solutions`` counts full-solution facets.  Connectivity of the
    color hypergraph is upward closed over solutions, so a facet scan decides
    whether any full solution is connected.  A missing size-solution is a
    theorem violation and surfaces as a ``__violation__`` entry.
    """
    pc = _cached_build(params["n"], params["r"])
    colorings = _instance_colorings(pc, params)
    m = SizeVector.coerce(tuple(params["m"]))
    colors = tuple(range(1, pc.n + 1))
    full = 0
    any_size = False
    connected_exists = False
    for facet in pc.facets:
        sets = [c.face_image(facet) for c in colorings]
        if not all(len(s) >= b + 1 for s, b in zip(sets, m.values)):
            continue
        any_size = True
        if set().union(*sets) == set(colors):
            full += 1
            if not connected_exists and is_connected(ColorHypergraph(colors, sets)):
                connected_exists = True
    if not any_size and m.theorem_sized(pc.n):
        context = {
            "schemes": params["schemes"],
            "tiebreaks": params["tiebreaks"],
            "seed": params["seed"],
        }
        return {"__violation__": violation_bundle(pc, colorings, m, context)}
    record = dict(params)
    record["full_solutions"] = full
    record["connected_exists"] = connected_exists
    record["candidate"] = not connected_exists
    return record


def conjecture_sweep(
    grid: SweepGrid,
    out_path: str | None = None,
    *,
    jobs: int = 1,
    header: dict | None = None,
) -> dict:
    """Run the grid, appending one record per instance to ``out_path``.

    The log is append-only and keyed by instance parameters, so rerunning
    with the same path resumes where the previous run stopped.  Records are
    written in instance order regardless of worker count.  A theorem
    violation writes its bundle to the log and raises.
    """
    instances = sweep_instances(grid)
    done: set = set()
    candidates = 0
    if out_path and os.path.exists(out_path):
        with open(out_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if "candidate" in rec:
                    done.add(instance_key(rec))
                    candidates += int(bool(rec["candidate"]))
    todo = [p for p in instances if instance_key(p) not in done]

    fresh = out_path is not None and not os.path.exists(out_path)
    out = open(out_path, "a", encoding="utf-8") if out_path else None
    records = []
    try:
        if out and fresh and header:
            out.write(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")
        if jobs > 1:
            pool = ProcessPoolExecutor(max_workers=jobs)
            results = pool.map(run_sweep_instance, todo, chunksize=4)
        else:
            results = map(run_sweep_instance, todo)
        for rec in results:
            if "__violation__" in rec:
                bundle = rec["__violation__"]
                if out:
                    out.write(
                        json.dumps(
                            {"record": "violation", "bundle": bundle},
                            sort_keys=True,
                            separators=(",", ":"),
                        )
                        + "\n"
                    )
                    out.flush()
                err = NoSolutionError(bundle)
                # replay needs everything emitted so far, violation line included
                err.records = records + [{"record": "violation", "bundle": bundle}]
                raise err
            records.append(rec)
            candidates += int(bool(rec["candidate"]))
            if out:
                out.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        if jobs > 1:
            pool.shutdown()
    finally:
        if out:
            out.close()
    return {
        "instances": len(instances),
        "ran": len(todo),
        "resumed": len(instances) - len(todo),
        "candidates": candidates,
        "records": records,
    }
