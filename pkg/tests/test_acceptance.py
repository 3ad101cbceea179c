"""Acceptance gate: one test per published criterion, one printed verdict line each.

Each test prints ``[criterion N] PASS`` or ``[criterion N] FAIL: detail``
straight to the terminal (bypassing capture) and then asserts the criterion.
Runtime limits are asserted where the criterion states one.
"""

import itertools
import time

import numpy as np

from sperner_lab.partitions import Partition, build, enumerate_partitions, is_face
from sperner_lab.proofmaps import (
    boundary_winding,
    coloring_profile,
    in_row_space,
    verify_suites,
)
from sperner_lab.schemes import (
    coloring_from_scheme,
    color_vertex,
    longest_interval_scheme,
    path_hypergraph_schemes,
    random_sperner_coloring,
    star_hypergraph_schemes,
)
from sperner_lab.simplicial import barycenter, close_down, join, simplex, skeleton
from sperner_lab.solver import (
    NoSolutionError,
    find_solutions,
    is_size_solution,
    tree_shape,
)

CUBE = [
    (0, 1, 2, 3, 5),
    (0, 1, 2, 2, 5),
    (0, 1, 1, 2, 5),
    (0, 0, 1, 2, 5),
    (0, 1, 1, 1, 5),
    (0, 0, 1, 1, 5),
    (0, 0, 0, 1, 5),
    (0, 0, 0, 0, 5),
]
CUBE_TUPLES = [
    (1, 1, 1, 4, 1, 4, 4, 4),
    (2, 2, 4, 2, 4, 2, 4, 4),
    (3, 4, 3, 3, 4, 4, 3, 4),
]
EDGE = ((0, 0, 1, 1, 5), (0, 1, 1, 2, 5))
TETRA = [
    (0, 0, 0, 3, 5),
    (0, 0, 0, 2, 5),
    (0, 1, 1, 3, 5),
    (0, 0, 1, 3, 5),
]


def announce(capsys, number, ok, detail=""):
    tail = f": {detail}" if detail else ""
    with capsys.disabled():
        print(f"[criterion {number}] {'PASS' if ok else 'FAIL'}{tail}")


def test_star_instance_reproduces_published_colors_and_solutions(k45, capsys):
    start = time.perf_counter()
    schemes = star_hypergraph_schemes()
    colorings = [coloring_from_scheme(k45, s) for s in schemes]
    verts = [Partition.from_values(v) for v in CUBE]
    tuples_ok = all(
        tuple(c(v) for v in verts) == want
        for c, want in zip(colorings, CUBE_TUPLES)
    )

    reports = find_solutions(k45, colorings, (1, 1, 1), mode="all")
    solutions = {frozenset(rep.face) for rep in reports}
    edge = frozenset(Partition.from_values(v) for v in EDGE)
    edge_faces = {f for f in k45.complex.faces if edge <= f}
    all_star = all(tree_shape(rep.hypergraph) == "star" for rep in reports)
    exact_match = solutions == edge_faces
    elapsed = time.perf_counter() - start

    ok = tuples_ok and all_star and exact_match and elapsed < 60
    detail = (
        f"tuples {'ok' if tuples_ok else 'WRONG'}, "
        f"all shapes star {'ok' if all_star else 'WRONG'}, "
        f"{len(solutions)} solution faces vs {len(edge_faces)} containing the edge, "
        f"{elapsed:.1f}s"
    )
    announce(capsys, 1, ok, detail)
    assert tuples_ok
    assert all_star
    assert elapsed < 60
    extras = sorted(tuple(sorted(v.values for v in f)) for f in solutions - edge_faces)
    assert exact_match, (
        f"{len(solutions)} solution faces but {len(edge_faces)} contain the edge; "
        f"extra faces: {extras}"
    )


def test_path_instance_is_a_full_solution_under_every_tiebreak(k45, capsys):
    start = time.perf_counter()
    tetra = frozenset(Partition.from_values(v) for v in TETRA)
    tried = 0
    tetra_ok = True
    shapes_ok = True
    for tb in itertools.permutations((1, 2, 3, 4)):
        colorings = [coloring_from_scheme(k45, s) for s in path_hypergraph_schemes(tb)]
        reports = find_solutions(k45, colorings, (1, 1, 1), mode="all")
        by_face = {frozenset(rep.face): rep for rep in reports}
        tetra_ok = tetra_ok and tetra in by_face and by_face[tetra].union_ok
        shapes_ok = shapes_ok and all(
            tree_shape(rep.hypergraph) == "path" for rep in reports
        )
        tried += 1
    elapsed = time.perf_counter() - start
    ok = tried >= 6 and tetra_ok and shapes_ok and elapsed < 60
    announce(
        capsys, 2, ok,
        f"{tried} tiebreaks, tetrahedron full solution {'ok' if tetra_ok else 'WRONG'}, "
        f"every solution path-shaped {'ok' if shapes_ok else 'WRONG'}, {elapsed:.1f}s",
    )
    assert tried >= 6
    assert tetra_ok
    assert shapes_ok
    assert elapsed < 60


def test_random_instances_always_contain_a_solution(capsys):
    start = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(key=20260818))
    built = {}
    checked = 0
    try:
        for n in (2, 3, 4):
            for r in range(2, 7):
                if (n, r) not in built:
                    built[n, r] = build(n, r)
                pc = built[n, r]
                for _ in range(100):
                    k = int(rng.integers(1, 4))
                    m = tuple(int(v) for v in rng.multinomial(n - 1, [1.0 / k] * k))
                    seed = int(rng.integers(2**32))
                    colorings = [
                        random_sperner_coloring(pc, seed, stream=j) for j in range(k)
                    ]
                    reports = find_solutions(pc, colorings, m, mode="facets")
                    assert reports
                    checked += 1
    except NoSolutionError as err:
        announce(
            capsys, 3,
            False,
            f"violation after {checked} instances, bundle n={err.bundle['n']} "
            f"r={err.bundle['r']} m={err.bundle['m']}",
        )
        raise
    elapsed = time.perf_counter() - start
    ok = checked == 1500 and elapsed < 600
    announce(capsys, 3, ok, f"{checked} instances solved, {elapsed:.1f}s")
    assert checked == 1500
    assert elapsed < 600


def test_numeric_map_suite_passes_at_full_size(capsys):
    start = time.perf_counter()
    records, all_ok = verify_suites(samples=10000, seed=0)
    elapsed = time.perf_counter() - start
    by_name = {rec["name"]: rec for rec in records}
    roundtrip = by_name["trim_equalize_roundtrip_is_identity"]["worst"]
    threshold = by_name["trim_thresholds_capped_by_bound_fraction"]["worst"]
    ok = all_ok and elapsed < 60
    announce(
        capsys, 4, ok,
        f"worst roundtrip {roundtrip:.2e}, worst threshold excess {threshold:.2e}, "
        f"{elapsed:.1f}s",
    )
    failed = [r["name"] for r in records if r["pass"] is False]
    assert all_ok, f"failing suites: {failed}"
    assert elapsed < 60


def test_boundary_winding_is_one_and_refinement_stable(capsys):
    start = time.perf_counter()
    results = []
    for r, seeds in ((3, (3, 11)), (4, (2, 81)), (5, (11, 61))):
        pc = build(3, r)
        runs = [([coloring_from_scheme(pc, longest_interval_scheme(3))], (2,))]
        for seed in seeds:
            runs.append(
                (
                    [random_sperner_coloring(pc, seed, stream=j) for j in (0, 1)],
                    (1, 1),
                )
            )
        for colorings, m in runs:
            res = boundary_winding(pc, colorings, m)
            again = boundary_winding(pc, colorings, m, initial_depth=res.depth + 1)
            results.append((r, res.winding, again.winding))
    elapsed = time.perf_counter() - start
    ok = all(w == 1 and w2 == 1 for _, w, w2 in results) and elapsed < 120
    values = sorted({w for _, w, _ in results} | {w2 for _, _, w2 in results})
    announce(
        capsys, 5, ok,
        f"{len(results)} winding runs, values {values}, {elapsed:.1f}s",
    )
    assert all(w == 1 for _, w, _ in results), results
    assert all(w2 == 1 for _, _, w2 in results), results
    assert elapsed < 120


def test_membership_mirrors_the_solution_predicate_exhaustively(k34, k45, capsys):
    start = time.perf_counter()
    fixtures = [
        (k34, [coloring_from_scheme(k34, longest_interval_scheme(3))], (2,)),
        (k45, [coloring_from_scheme(k45, s) for s in star_hypergraph_schemes()], (1, 1, 1)),
    ]
    checked = 0
    for pc, colorings, m in fixtures:
        for face in pc.complex.faces:
            if not face:
                continue
            grid = coloring_profile(barycenter(pc.complex, face), colorings)
            inside = in_row_space(grid, m)
            assert inside == (not is_size_solution(face, colorings, m)), sorted(face)
            checked += 1
    elapsed = time.perf_counter() - start
    ok = elapsed < 300
    announce(capsys, 6, ok, f"{checked} faces checked on both fixtures, {elapsed:.1f}s")
    assert checked > 700
    assert elapsed < 300


def brute_facets(n, r):
    verts = list(enumerate_partitions(n, r))
    faces = []
    for k in range(1, len(verts) + 1):
        for combo in itertools.combinations(verts, k):
            if is_face(combo):
                faces.append(frozenset(combo))
    return {f for f in faces if not any(f < g for g in faces)}


def subset_join_oracle(A, B):
    pairs = list(itertools.product(sorted(A.vertices), sorted(B.vertices)))
    faces = set()
    for k in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, k):
            s = frozenset(combo)
            if (
                frozenset(p[0] for p in s) in A.faces
                and frozenset(p[1] for p in s) in B.faces
            ):
                faces.add(s)
    return faces


def test_construction_matches_subset_oracles(capsys):
    start = time.perf_counter()
    facet_checks = 0
    for n in (1, 2, 3):
        for r in (1, 2, 3, 4):
            assert set(build(n, r).facets) == brute_facets(n, r), (n, r)
            facet_checks += 1

    tetra = simplex(("a", "b", "c", "d"))
    hollow = close_down([("a", "b"), ("b", "c"), ("c", "a")])
    split = close_down([("a", "b"), ("c", "d")])
    for K in (tetra, hollow, split):
        for bound in range(6):
            want = {f for f in K.faces if len(f) <= bound}
            assert set(skeleton(K, bound).faces) == want

    edge = simplex(("x", "y"))
    point = simplex(("p",))
    path = close_down([("x", "y"), ("y", "z")])
    join_checks = 0
    for A, B in ((edge, point), (edge, edge), (hollow, point), (path, edge)):
        assert set(join(A, B).faces) == subset_join_oracle(A, B)
        join_checks += 1
    elapsed = time.perf_counter() - start
    announce(
        capsys, 7, True,
        f"{facet_checks} facet grids, 3 skeleton families, {join_checks} joins, "
        f"{elapsed:.1f}s",
    )
