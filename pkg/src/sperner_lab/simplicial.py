"""Finite simplicial complexes, simplicial maps, and specialization order.

A complex is stored explicitly as a finite family of faces (vertex subsets)
closed under inclusion.  The empty face is always a member.  Vertices are
opaque hashable identifiers; within one complex they must be mutually
orderable so that serialization and iteration stay deterministic.

All types are immutable after construction and safe to share across worker
processes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping

TOL = 1e-12


class NotClosedError(ValueError):
    """A face family is missing a subset of one of its faces."""

    def __init__(self, missing, superset):
        self.missing = frozenset(missing)
        self.superset = frozenset(superset)
        super().__init__(
            f"face family not closed under inclusion: {sorted(missing)} is "
            f"missing but {sorted(superset)} is a face"
        )


class SourceMismatchError(ValueError):
    """Two maps (or a map and a point) disagree about domain or codomain."""


def _face_key(face):
    elems = tuple(sorted(face))
    return (len(elems), elems)


@dataclass(frozen=True)
class Complex:
    """An inclusion-closed family of faces over a finite vertex set.

    Construct through :func:`validate_complex`, :func:`close_down`,
    :func:`simplex`, :func:`skeleton` or :func:`join`.  The raw constructor
    trusts its input to be closed already.
    """

    faces: frozenset

    def __post_init__(self):
        object.__setattr__(
            self, "faces", frozenset(frozenset(f) for f in self.faces)
        )

    @cached_property
    def vertices(self) -> frozenset:
        out = set()
        for f in self.faces:
            out.update(f)
        return frozenset(out)

    @cached_property
    def sorted_vertices(self) -> tuple:
        return tuple(sorted(self.vertices))

    @cached_property
    def sorted_faces(self) -> tuple:
        """All faces as sorted tuples, in canonical (size, lexicographic) order."""
        return tuple(sorted((tuple(sorted(f)) for f in self.faces), key=lambda t: (len(t), t)))

    @cached_property
    def facets(self) -> tuple:
        """Maximal faces, canonically ordered."""
        maximal = [
            f for f in self.faces
            if not any(f < g for g in self.faces)
        ]
        return tuple(sorted((tuple(sorted(f)) for f in maximal), key=lambda t: (len(t), t)))

    @cached_property
    def is_full_simplex(self) -> bool:
        return len(self.faces) == 2 ** len(self.vertices)

    def has_face(self, face) -> bool:
        return frozenset(face) in self.faces

    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def __repr__(self):
        return f"Complex(|V|={len(self.vertices)}, |faces|={len(self.faces)})"


def validate_complex(face_list: Iterable) -> Complex:
    """Build a complex from ``face_list``, refusing input that is not closed.

    The scan walks faces in canonical order and checks every one-element
    removal; the first missing subset is reported as the witness.  Closure
    under single removals implies full inclusion closure.
    """
    faces = {frozenset(f) for f in face_list}
    if not faces:
        raise ValueError("a complex must contain the empty face")
    ordered = sorted((tuple(sorted(f)) for f in faces), key=lambda t: (len(t), t))
    for tup in ordered:
        face = frozenset(tup)
        for v in tup:
            sub = face - {v}
            if sub not in faces:
                raise NotClosedError(sub, face)
    if frozenset() not in faces:
        # unreachable when any nonempty face exists (its singletons fail above)
        raise ValueError("a complex must contain the empty face")
    return Complex(frozenset(faces))


def close_down(face_list: Iterable) -> Complex:
    """Inclusion closure: add every subset of every given face."""
    closed = {frozenset()}
    stack = [frozenset(f) for f in face_list]
    while stack:
        face = stack.pop()
        if face in closed:
            continue
        closed.add(face)
        for v in face:
            sub = face - {v}
            if sub not in closed:
                stack.append(sub)
    return Complex(frozenset(closed))


def simplex(vertices: Iterable[Hashable]) -> Complex:
    """The full simplex: every subset of ``vertices`` is a face."""
    verts = tuple(sorted(set(vertices)))
    if len(verts) > 20:
        raise ValueError("refusing to materialize a simplex on more than 20 vertices")
    faces = set()
    for k in range(len(verts) + 1):
        faces.update(frozenset(c) for c in itertools.combinations(verts, k))
    return Complex(frozenset(faces))


def skeleton(K: Complex, m: int) -> Complex:
    """Faces of ``K`` with at most ``m`` vertices.  ``m=0`` keeps only the empty face."""
    if m < 0:
        raise ValueError("skeleton bound must be nonnegative")
    return Complex(frozenset(f for f in K.faces if len(f) <= m))


def _onto_subsets(B, B2):
    # subsets of B x B2 whose projections hit all of B and all of B2
    pairs = tuple(itertools.product(sorted(B), sorted(B2)))
    need1, need2 = frozenset(B), frozenset(B2)
    for bits in range(1, 2 ** len(pairs)):
        picked = [pairs[j] for j in range(len(pairs)) if bits >> j & 1]
        if {p[0] for p in picked} == need1 and {p[1] for p in picked} == need2:
            yield frozenset(picked)


def join(K: Complex, K2: Complex) -> Complex:
    """Join of two complexes on the product vertex set.

    Faces are exactly the subsets of V x V' whose two coordinate projections
    are faces of the respective factors.  Enumerated by grouping candidate
    faces by their projection pair, which visits each face exactly once.
    """
    faces = {frozenset()}
    for B in K.faces:
        if not B:
            continue
        for B2 in K2.faces:
            if not B2:
                continue
            faces.update(_onto_subsets(B, B2))
    return Complex(frozenset(faces))


@dataclass(frozen=True)
class FaceMap:
    """An order-preserving map of face families.

    ``image`` must cover every face of ``source``, land in ``target``'s faces,
    and respect inclusion.  Order preservation is checked on one-element
    removals, which implies it for all nested pairs.
    """

    source: Complex
    target: Complex
    image: Mapping

    def __post_init__(self):
        img = {frozenset(a): frozenset(b) for a, b in dict(self.image).items()}
        object.__setattr__(self, "image", img)
        for face in self.source.faces:
            if face not in img:
                raise ValueError(f"face map is missing a face: {sorted(face)}")
            if img[face] not in self.target.faces:
                raise ValueError(
                    f"face map sends {sorted(face)} outside the target complex"
                )
        for face in self.source.faces:
            for v in face:
                if not img[face - {v}] <= img[face]:
                    raise ValueError(
                        f"face map does not preserve inclusion at {sorted(face)}"
                    )

    def __call__(self, face) -> frozenset:
        return self.image[frozenset(face)]

    def __eq__(self, other):
        if not isinstance(other, FaceMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.image == other.image
        )

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.image.items())))


def leq_maps(f: FaceMap, g: FaceMap) -> bool:
    """Specialization order: ``f <= g`` iff ``f(A)`` is a subset of ``g(A)`` for every face."""
    if f.source != g.source or f.target != g.target:
        raise SourceMismatchError("maps being compared must share source and target")
    return all(f.image[a] <= g.image[a] for a in f.source.faces)


@dataclass(frozen=True, eq=False)
class VertexMap:
    """A simplicial map given on vertices.

    Every source vertex must have an image among the target's vertices and
    the image of every face must be a face of the target.  Maps into a full
    simplex are simplicial automatically; the per-face check is skipped there.
    """

    source: Complex
    target: Complex
    assignment: Mapping

    def __post_init__(self):
        amap = dict(self.assignment)
        object.__setattr__(self, "assignment", amap)
        for v in self.source.vertices:
            if v not in amap:
                raise ValueError(f"vertex map is missing vertex {v!r}")
            if amap[v] not in self.target.vertices:
                raise ValueError(f"vertex map sends {v!r} outside the target")
        if not self.target.is_full_simplex:
            for face in self.source.faces:
                if frozenset(amap[v] for v in face) not in self.target.faces:
                    raise ValueError(
                        f"vertex map is not simplicial at face {sorted(face)}"
                    )

    def __call__(self, v):
        return self.assignment[v]

    def face_image(self, face) -> frozenset:
        return frozenset(self.assignment[v] for v in face)

    @cached_property
    def face_map(self) -> FaceMap:
        return FaceMap(
            self.source,
            self.target,
            {f: self.face_image(f) for f in self.source.faces},
        )

    def __eq__(self, other):
        if not isinstance(other, VertexMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )


def is_sperner_coloring(c: VertexMap, f: FaceMap) -> bool:
    """True iff ``c`` specializes ``f``: the colors on every face stay inside ``f``'s label set."""
    if c.source != f.source or c.target != f.target:
        raise SourceMismatchError("coloring and face map must share source and target")
    return leq_maps(c.face_map, f)


@dataclass(frozen=True, eq=False)
class RealizationPoint:
    """A point of the geometric realization: nonnegative vertex weights summing to 1.

    The support (vertices with strictly positive weight) must be a face.
    Zero entries are dropped on construction.
    """

    complex: Complex
    weights: Mapping

    def __post_init__(self):
        w = {}
        for v, x in dict(self.weights).items():
            x = float(x)
            if x < 0.0:
                raise ValueError(f"negative weight {x} at vertex {v!r}")
            if x > 0.0:
                w[v] = x
        object.__setattr__(self, "weights", w)
        if not set(w) <= self.complex.vertices:
            raise ValueError("weights mention vertices outside the complex")
        total = sum(w.values())
        if abs(total - 1.0) > TOL:
            raise ValueError(f"weights sum to {total}, expected 1")
        if frozenset(w) not in self.complex.faces:
            raise ValueError("support of the weights is not a face")

    @property
    def support(self) -> frozenset:
        return frozenset(self.weights)

    def weight(self, v) -> float:
        return self.weights.get(v, 0.0)


def barycenter(K: Complex, face) -> RealizationPoint:
    """Uniform weights on a nonempty face."""
    face = frozenset(face)
    if not face:
        raise ValueError("the empty face has no barycenter")
    w = 1.0 / len(face)
    return RealizationPoint(K, {v: w for v in face})


def pushforward(c: VertexMap, k: RealizationPoint) -> RealizationPoint:
    """Transport a realization point along a vertex map by summing weights over fibers."""
    if k.complex != c.source:
        raise SourceMismatchError("point does not live on the map's source complex")
    acc: dict = {}
    for v, x in k.weights.items():
        w = c.assignment[v]
        acc[w] = acc.get(w, 0.0) + x
    return RealizationPoint(c.target, acc)


# ---------------------------------------------------------------------------
# serialization


def complex_to_doc(K: Complex, label=str) -> dict:
    """Plain document: vertices as strings, faces as sorted string arrays."""
    verts = [label(v) for v in K.sorted_vertices]
    faces = sorted(
        (sorted(label(v) for v in f) for f in K.faces),
        key=lambda t: (len(t), t),
    )
    return {"vertices": verts, "faces": faces}


def complex_from_doc(doc: dict) -> Complex:
    return validate_complex([frozenset(f) for f in doc["faces"]])


def vertex_map_to_doc(m: VertexMap, label=str) -> dict:
    return {
        "assignment": {
            label(v): label(m.assignment[v]) for v in m.source.sorted_vertices
        }
    }
