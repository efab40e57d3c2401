"""Block colorings of a derived system with ``k`` colors.

A proper ``k``-coloring of the pencil is the same thing as a resolution of the
derived system into ``k`` parallel classes, and equivalent colorings have the
same classes. The enumeration unit is therefore the resolution; colorings are
recovered by assigning the points of the base block to its classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .design import (
    BlockColoring,
    BlockPencil,
    Design,
    DerivedSystem,
    derived_system,
)

__all__ = [
    "BRUTEFORCE_MAX_PENCIL",
    "LineGraph",
    "Resolution",
    "best_assignment",
    "coloring_from_resolution",
    "enumerate_resolutions",
    "enumerate_resolutions_bruteforce",
    "equivalent",
    "is_b_coloring",
    "is_para_rigid",
    "is_proper",
    "line_graph",
    "orbit_representatives",
    "parallel_classes",
    "trivial_resolution",
]

BRUTEFORCE_MAX_PENCIL = 40


@dataclass(frozen=True)
class LineGraph:
    """Pencil members, adjacent when they share a point off the base block."""

    vertices: tuple[int, ...]
    adjacency: dict[int, frozenset[int]] = field(hash=False, compare=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.vertices for v in self.adjacency[u] if u < v)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def line_graph(d: DerivedSystem) -> LineGraph:
    adj: dict[int, set[int]] = {m: set() for m in d.members}
    for through in d.point_members.values():
        for u in through:
            adj[u].update(w for w in through if w != u)
    g = LineGraph(d.members, {m: frozenset(s) for m, s in adj.items()})
    want = (d.k - 1) ** 2
    bad = [m for m in g.vertices if g.degree(m) != want]
    if bad:
        raise ValueError(f"line graph is not {want}-regular at members {bad[:5]}")
    return g


@dataclass(frozen=True)
class Resolution:
    """A partition of the pencil into parallel classes, classes ordered by least member.

    ``orbit_size`` is filled in when the resolution stands for a symmetry orbit.
    """

    classes: tuple[frozenset[int], ...]
    orbit_size: int = field(default=1, compare=False)

    @classmethod
    def of(cls, classes, orbit_size: int = 1) -> "Resolution":
        cs = sorted((frozenset(c) for c in classes), key=min)
        return cls(tuple(cs), orbit_size)

    def as_lists(self) -> list[list[int]]:
        return [sorted(c) for c in self.classes]


class _Index:
    """Bit positions for members and outside points of a derived system."""

    def __init__(self, d: DerivedSystem):
        self.members = d.members
        self.pos = {m: i for i, m in enumerate(d.members)}
        self.points = d.outside_points
        self.ppos = {p: i for i, p in enumerate(self.points)}
        # points covered by each member, as a bitmask over outside points
        self.cover = [sum(1 << self.ppos[p] for p in d.restricted_blocks[m]) for m in d.members]
        # members through each outside point, as a bitmask over members
        self.through = [0] * len(self.points)
        for i, m in enumerate(d.members):
            for p in d.restricted_blocks[m]:
                self.through[self.ppos[p]] |= 1 << i
        # conflict mask per member: itself plus its line-graph neighbours
        self.conflict = [0] * len(d.members)
        for i in range(len(d.members)):
            mask = 0
            c = self.cover[i]
            while c:
                low = c & -c
                mask |= self.through[low.bit_length() - 1]
                c ^= low
            self.conflict[i] = mask


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _parallel_class_masks(ix: _Index) -> list[int]:
    """Member bitmasks of all parallel classes, by covering the lowest uncovered point."""
    full = (1 << len(ix.points)) - 1
    found: list[int] = []

    def extend(chosen: int, covered: int, available: int) -> None:
        if covered == full:
            found.append(chosen)
            return
        uncovered = full & ~covered
        # every uncovered point needs an available member through it
        u = uncovered
        while u:
            low = u & -u
            if not ix.through[low.bit_length() - 1] & available:
                return
            u ^= low
        p = (uncovered & -uncovered).bit_length() - 1
        for i in _bits(ix.through[p] & available):
            extend(chosen | (1 << i), covered | ix.cover[i], available & ~ix.conflict[i])

    extend(0, 0, (1 << len(ix.members)) - 1)
    return found


def parallel_classes(d: DerivedSystem) -> list[frozenset[int]]:
    """All independent sets of size K = (n-k)/(k-1) in the line graph.

    At that size, independence and partitioning the outside points coincide;
    both are checked on every result.
    """
    ix = _Index(d)
    size = len(d.outside_points) // (d.k - 1)
    g = line_graph(d)
    out = []
    for mask in _parallel_class_masks(ix):
        cls = frozenset(ix.members[i] for i in _bits(mask))
        assert len(cls) == size
        assert all(not (g.adjacency[u] & cls) for u in cls)
        pts = [p for m in cls for p in d.restricted_blocks[m]]
        assert sorted(pts) == list(d.outside_points)
        out.append(cls)
    return sorted(out, key=sorted)


def trivial_resolution(pen: BlockPencil) -> Resolution:
    return Resolution.of(pen.anchor_classes().values())


def enumerate_resolutions(d: DerivedSystem, symmetry: Sequence[Sequence[int]] | None = None) -> list[Resolution]:
    """All partitions of the pencil into ``k`` parallel classes, each once.

    The search repeatedly covers the least uncovered member with a candidate
    class whose least member it is. With ``symmetry`` (point permutations
    stabilizing the base block) one representative per orbit is returned,
    with ``orbit_size`` set; sizes sum to the unreduced count.
    """
    ix = _Index(d)
    masks = _parallel_class_masks(ix)
    by_least: dict[int, list[int]] = {}
    for mask in masks:
        by_least.setdefault((mask & -mask).bit_length() - 1, []).append(mask)
    for lst in by_least.values():
        lst.sort(key=_bits)
    full = (1 << len(ix.members)) - 1
    found: list[tuple[int, ...]] = []

    def extend(covered: int, chosen: tuple[int, ...]) -> None:
        if covered == full:
            found.append(chosen)
            return
        least = ((full & ~covered) & -(full & ~covered)).bit_length() - 1
        for mask in by_least.get(least, ()):
            if not mask & covered:
                extend(covered | mask, chosen + (mask,))

    extend(0, ())
    result = [Resolution(tuple(frozenset(ix.members[i] for i in _bits(m)) for m in ch)) for ch in found]
    for res in result:
        assert len(res.classes) == d.k
    if symmetry is None:
        return result
    return orbit_representatives(d, result, symmetry)


def _member_action(d: DerivedSystem, perm: Sequence[int]) -> dict[int, int]:
    design = d.design
    base = set(d.pencil.base_points)
    if {perm[p] for p in base} != base:
        raise ValueError("symmetry generator does not stabilize the base block")
    act = {}
    for m in d.members:
        img = tuple(sorted(perm[p] for p in design.blocks[m]))
        j = design.block_index.get(img)
        if j is None:
            raise ValueError("symmetry generator is not an automorphism of the design")
        act[m] = j
    return act


def orbit_representatives(
    d: DerivedSystem, resolutions: list[Resolution], symmetry: Sequence[Sequence[int]]
) -> list[Resolution]:
    """First member of each orbit of ``resolutions`` (which must be closed under ``symmetry``)."""
    actions = [_member_action(d, g) for g in symmetry]
    pos = {res: i for i, res in enumerate(resolutions)}
    seen = [False] * len(resolutions)
    reps = []
    for i, res in enumerate(resolutions):
        if seen[i]:
            continue
        seen[i] = True
        stack, size = [res], 1
        while stack:
            cur = stack.pop()
            for act in actions:
                img = Resolution.of(frozenset(act[m] for m in c) for c in cur.classes)
                j = pos[img]
                if not seen[j]:
                    seen[j] = True
                    size += 1
                    stack.append(img)
        reps.append(Resolution(res.classes, size))
    return reps


def enumerate_resolutions_bruteforce(d: DerivedSystem) -> list[Resolution]:
    """Depth-first color assignment over members in fixed order.

    Colors are introduced in order of first use, so each partition is
    produced once. Independent of the set-cover route; intended for tests.
    """
    members = d.members
    if len(members) > BRUTEFORCE_MAX_PENCIL:
        raise ValueError(f"pencil of size {len(members)} exceeds brute-force guard {BRUTEFORCE_MAX_PENCIL}")
    k = d.k
    blocks = [set(d.restricted_blocks[m]) for m in members]
    earlier_conflicts = [[j for j in range(i) if blocks[i] & blocks[j]] for i in range(len(members))]
    colors = [-1] * len(members)
    out: list[Resolution] = []

    def assign(i: int, used: int) -> None:
        if i == len(members):
            if used == k:
                groups: dict[int, set[int]] = {}
                for m, c in zip(members, colors):
                    groups.setdefault(c, set()).add(m)
                out.append(Resolution.of(groups.values()))
            return
        taken = {colors[j] for j in earlier_conflicts[i]}
        for c in range(min(used + 1, k)):
            if c not in taken:
                colors[i] = c
                assign(i + 1, max(used, c + 1))
        colors[i] = -1

    assign(0, 0)
    return out


def coloring_from_resolution(pen: BlockPencil, res: Resolution, assignment: Sequence[int]) -> BlockColoring:
    """Color class ``i`` of ``res`` with point ``assignment[i]`` of the base block."""
    if sorted(assignment) != sorted(pen.base_points) or len(assignment) != len(res.classes):
        raise ValueError(f"assignment {list(assignment)} is not a bijection onto {list(pen.base_points)}")
    color = {m: assignment[i] for i, cls in enumerate(res.classes) for m in cls}
    if set(color) != set(pen.members):
        raise ValueError("resolution does not cover the pencil")
    return BlockColoring(pen, color)


def best_assignment(pen: BlockPencil, res: Resolution) -> tuple[int, ...]:
    """Assignment maximizing agreement with the anchors (ties broken by the solver)."""
    anchors = pen.anchor_classes()
    pts = pen.base_points
    overlap = np.array([[len(cls & anchors[p]) for p in pts] for cls in res.classes])
    rows, cols = linear_sum_assignment(-overlap)
    assign = [0] * len(res.classes)
    for r_, c_ in zip(rows, cols):
        assign[r_] = pts[c_]
    return tuple(assign)


def is_proper(d: DerivedSystem, c: BlockColoring) -> bool:
    """Proper with colors on the base block and exactly ``k`` colors used."""
    base = set(d.pencil.base_points)
    if set(c.color) != set(d.members) or not set(c.color.values()) <= base:
        return False
    for through in d.point_members.values():
        if len({c.color[m] for m in through}) != len(through):
            return False
    return len(set(c.color.values())) == d.k


def is_b_coloring(g: LineGraph, c: BlockColoring, k: int | None = None) -> bool:
    """Proper, uses ``k`` colors, and every class has a vertex seeing all other colors."""
    k = len(c.pencil.base_points) if k is None else k
    if set(c.color) != set(g.vertices):
        return False
    used = set(c.color.values())
    if len(used) != k:
        return False
    for v in g.vertices:
        if any(c.color[w] == c.color[v] for w in g.adjacency[v]):
            return False
    for col, cls in c.classes().items():
        others = used - {col}
        if not any({c.color[w] for w in g.adjacency[v]} >= others for v in cls):
            return False
    return True


def equivalent(c1: BlockColoring, c2: BlockColoring) -> bool:
    if not c1.pencil.same_as(c2.pencil):
        raise ValueError("colorings belong to different pencils")
    return c1.partition() == c2.partition()


def is_para_rigid(design: Design, blocks: Sequence[int] | None = None) -> bool:
    """True when every derived system has only the trivial resolution.

    ``blocks`` restricts the check, e.g. to block-orbit representatives.
    """
    for b in range(len(design.blocks)) if blocks is None else blocks:
        d = derived_system(design, b)
        resolutions = enumerate_resolutions(d)
        if len(resolutions) != 1:
            return False
        assert resolutions[0] == trivial_resolution(d.pencil)
    return True
