from itertools import combinations, permutations, product

import pytest

from paramod.canon import automorphism_generators
from paramod.coloring import (
    LineGraph,
    Resolution,
    best_assignment,
    coloring_from_resolution,
    enumerate_resolutions,
    enumerate_resolutions_bruteforce,
    equivalent,
    is_b_coloring,
    is_para_rigid,
    line_graph,
    parallel_classes,
    trivial_resolution,
)
from paramod.design import BlockColoring, derived_system, pencil, trivial_coloring
from paramod.generators import affine_plane, hermitian_unital, projective_plane


def brute_force_one_factorizations(edges, k):
    """Count partitions of ``edges`` into ``k`` perfect matchings by trying every k-coloring."""
    found = set()
    for colors in product(range(k), repeat=len(edges)):
        ok = True
        for i, j in combinations(range(len(edges)), 2):
            if colors[i] == colors[j] and set(edges[i]) & set(edges[j]):
                ok = False
                break
        if ok and len(set(colors)) == k:
            found.add(frozenset(frozenset(e for e, c in zip(edges, colors) if c == x) for x in range(k)))
    return len(found)


def test_line_graph_fano_is_octahedron(fano):
    g = line_graph(derived_system(fano, 0))
    assert len(g.vertices) == 6
    assert all(g.degree(v) == 4 for v in g.vertices)
    # octahedron: complement is a perfect matching
    non_edges = [(u, v) for u, v in combinations(g.vertices, 2) if v not in g.adjacency[u]]
    assert len(non_edges) == 3 and len({x for e in non_edges for x in e}) == 6


@pytest.mark.parametrize("design,size,deg", [(affine_plane(3), 9, 4), (hermitian_unital(3), 32, 9)])
def test_line_graph_regular(design, size, deg):
    g = line_graph(derived_system(design, 0))
    assert len(g.vertices) == size
    assert {g.degree(v) for v in g.vertices} == {deg}


def test_line_graph_cliques_through_points(designs):
    for design in designs.values():
        d = derived_system(design, 0)
        g = line_graph(d)
        for through in d.point_members.values():
            assert len(through) == design.k
            assert all(v in g.adjacency[u] for u, v in combinations(through, 2))


def test_parallel_classes_fano_are_perfect_matchings(fano):
    d = derived_system(fano, 0)
    classes = parallel_classes(d)
    edges = [d.restricted_blocks[m] for m in d.members]
    matchings = [
        set(c) for c in combinations(range(len(edges)), 2) if not set(edges[c[0]]) & set(edges[c[1]])
    ]
    assert len(classes) == 3 == len(matchings)
    assert {frozenset(d.members[i] for i in m) for m in matchings} == set(classes)


def test_parallel_classes_partition_outside_points(ag3):
    d = derived_system(ag3, 0)
    for cls in parallel_classes(d):
        assert len(cls) == 3
        assert sorted(p for m in cls for p in d.restricted_blocks[m]) == list(d.outside_points)


def test_anchor_classes_are_parallel_classes(designs):
    for design in designs.values():
        d = derived_system(design, 1)
        classes = set(parallel_classes(d))
        assert set(d.pencil.anchor_classes().values()) <= classes


def test_three_way_class_duality(designs):
    """A member set is an independent K-set iff it partitions the outside points iff it
    is a class of some resolution; checked against all K-subsets on small fixtures."""
    for name in ("fano", "ag3", "pg3", "sts13a", "sts13b"):
        design = designs[name]
        d = derived_system(design, 0)
        g = line_graph(d)
        size = len(d.outside_points) // (design.k - 1)
        in_resolution = {c for res in enumerate_resolutions(d) for c in res.classes}
        classes = set(parallel_classes(d))
        for subset in combinations(d.members, size):
            s = frozenset(subset)
            independent = all(not (g.adjacency[u] & s) for u in s)
            partitions = sorted(p for m in s for p in d.restricted_blocks[m]) == list(d.outside_points)
            assert independent == partitions == (s in classes)
            if s in in_resolution:
                assert independent


def test_fano_has_one_resolution(fano):
    d = derived_system(fano, 0)
    edges = [d.restricted_blocks[m] for m in d.members]
    assert brute_force_one_factorizations(edges, 3) == 1
    assert enumerate_resolutions(d) == [trivial_resolution(d.pencil)]


def test_ag3_resolutions_match_k33_factorizations(ag3):
    d = derived_system(ag3, 0)
    edges = [d.restricted_blocks[m] for m in d.members]
    expected = brute_force_one_factorizations(edges, 3)
    assert expected == 2
    assert len(enumerate_resolutions(d)) == expected


def test_pg3_resolution_is_trivial():
    design = projective_plane(3)
    for b in range(len(design.blocks)):
        d = derived_system(design, b)
        assert enumerate_resolutions(d) == [trivial_resolution(d.pencil)]


@pytest.mark.parametrize("name", ["fano", "ag3", "pg3", "ag4", "sts13a", "sts13b"])
def test_set_cover_matches_bruteforce(designs, name):
    design = designs[name]
    for b in range(len(design.blocks)):
        d = derived_system(design, b)
        fast = enumerate_resolutions(d)
        slow = enumerate_resolutions_bruteforce(d)
        assert len(fast) == len(set(fast))
        assert set(fast) == set(slow) and len(slow) == len(fast)
        assert trivial_resolution(d.pencil) in fast


def test_bruteforce_guard():
    d = derived_system(hermitian_unital(4), 0)
    with pytest.raises(ValueError, match="guard"):
        enumerate_resolutions_bruteforce(d)


@pytest.mark.parametrize("name", ["ag3", "ag4", "sts13a", "sts13b", "h3"])
def test_symmetry_orbits_sum_to_total(designs, name):
    design = designs[name]
    for b in (0, 5):
        d = derived_system(design, b)
        total = enumerate_resolutions(d)
        reps = enumerate_resolutions(d, symmetry=automorphism_generators(design, stabilize=[b]))
        assert sum(r.orbit_size for r in reps) == len(total)
        assert set(reps) <= set(total)


def test_symmetry_rejects_non_stabilizer(fano):
    d = derived_system(fano, 0)
    moving = automorphism_generators(fano)
    with pytest.raises(ValueError):
        enumerate_resolutions(d, symmetry=moving)


def test_trivial_resolution_with_anchor_assignment_is_trivial_coloring(designs):
    for design in designs.values():
        pen = pencil(design, 2)
        res = trivial_resolution(pen)
        anchors = pen.anchor_classes()
        assign = [next(p for p, c in anchors.items() if c == cls) for cls in res.classes]
        assert coloring_from_resolution(pen, res, assign).color == trivial_coloring(pen).color
        assert best_assignment(pen, res) == tuple(assign)


def test_all_assignments_give_equivalent_proper_colorings(ag3):
    d = derived_system(ag3, 0)
    g = line_graph(d)
    for res in enumerate_resolutions(d):
        colorings = [coloring_from_resolution(d.pencil, res, a) for a in permutations(d.pencil.base_points)]
        assert len(colorings) == 6
        assert len({tuple(sorted(c.color.items())) for c in colorings}) == 6
        assert all(is_b_coloring(g, c) for c in colorings)
        assert all(equivalent(colorings[0], c) for c in colorings)


def test_non_bijective_assignment(fano):
    pen = pencil(fano, 0)
    res = trivial_resolution(pen)
    with pytest.raises(ValueError):
        coloring_from_resolution(pen, res, [pen.base_points[0]] * 3)


def test_trivial_coloring_is_b_coloring(fano):
    d = derived_system(fano, 0)
    assert is_b_coloring(line_graph(d), trivial_coloring(d.pencil))


def test_two_coloring_is_not_b_coloring(fano):
    d = derived_system(fano, 0)
    g = line_graph(d)
    a, b = d.pencil.base_points[:2]
    two = BlockColoring(d.pencil, {m: (a if i % 2 else b) for i, m in enumerate(d.members)})
    assert not is_b_coloring(g, two)


def test_improper_coloring_is_not_b_coloring(ag3):
    d = derived_system(ag3, 0)
    g = line_graph(d)
    c = trivial_coloring(d.pencil).color
    m0, m1 = next((u, v) for u in g.vertices for v in g.adjacency[u] if c[u] != c[v])
    bad = dict(c)
    bad[m1] = c[m0]
    assert not is_b_coloring(g, BlockColoring(d.pencil, bad))


def test_every_enumerated_coloring_is_b_coloring(designs):
    for name in ("sts13a", "h3"):
        d = derived_system(designs[name], 0)
        g = line_graph(d)
        for res in enumerate_resolutions(d):
            assert is_b_coloring(g, coloring_from_resolution(d.pencil, res, best_assignment(d.pencil, res)))


def test_equivalent_with_permuted_colors(ag3):
    pen = pencil(ag3, 0)
    c = trivial_coloring(pen)
    pts = pen.base_points
    pi = dict(zip(pts, pts[1:] + pts[:1]))
    assert equivalent(c, BlockColoring(pen, {m: pi[x] for m, x in c.color.items()}))


def test_trivial_not_equivalent_to_nontrivial(ag3):
    d = derived_system(ag3, 0)
    other = next(r for r in enumerate_resolutions(d) if r != trivial_resolution(d.pencil))
    c = coloring_from_resolution(d.pencil, other, d.pencil.base_points)
    assert not equivalent(trivial_coloring(d.pencil), c)


def test_equivalence_transitive_on_fano_colorings(fano):
    """Every proper 3-coloring of Fano's pencil, found by exhaustive search, is equivalent to every other."""
    d = derived_system(fano, 0)
    g = line_graph(d)
    cols = []
    for assign in product(d.pencil.base_points, repeat=len(d.members)):
        color = dict(zip(d.members, assign))
        if all(color[u] != color[v] for u, v in g.edges) and len(set(assign)) == 3:
            cols.append(BlockColoring(d.pencil, color))
    assert len(cols) == 6
    for a, b, c in product(cols, repeat=3):
        if equivalent(a, b) and equivalent(b, c):
            assert equivalent(a, c)


def test_equivalent_rejects_different_pencils(fano):
    with pytest.raises(ValueError):
        equivalent(trivial_coloring(pencil(fano, 0)), trivial_coloring(pencil(fano, 1)))


def test_para_rigid():
    assert is_para_rigid(projective_plane(2))
    assert is_para_rigid(projective_plane(3))
    assert not is_para_rigid(affine_plane(3))
    assert not is_para_rigid(hermitian_unital(3))


def test_resolution_of_sorts_classes():
    r = Resolution.of([{5, 7}, {1, 9}])
    assert r.classes == (frozenset({1, 9}), frozenset({5, 7}))
    assert r == Resolution.of([{1, 9}, {5, 7}], orbit_size=3)


def test_line_graph_type():
    g = LineGraph((1, 2), {1: frozenset({2}), 2: frozenset({1})})
    assert g.edges == [(1, 2)]
