"""Paramodification, switchings and Pasch configurations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .coloring import best_assignment, coloring_from_resolution, enumerate_resolutions, is_proper
from .design import BlockColoring, Design, DesignError, derived_system, pencil

__all__ = [
    "ImproperColoringError",
    "Paramodification",
    "PaschConfiguration",
    "count_pasch",
    "enumerate_switchings",
    "find_pasch",
    "is_anti_pasch",
    "nontrivial_class_count",
    "paramodify",
    "reverse_coloring",
    "switching_excluded_by_bound",
    "switching_threshold",
]


class ImproperColoringError(DesignError):
    pass


def paramodify(design: Design, b: int, coloring: BlockColoring) -> Design:
    """Move each pencil member from its anchor to the point of ``b`` given by ``coloring``.

    Block positions are kept. The result is validated by callers that need
    the guarantee; the transform itself only checks the coloring.
    """
    d = derived_system(design, b)
    if not coloring.pencil.same_as(d.pencil):
        raise ImproperColoringError(f"coloring is not defined on the pencil of block {b}")
    if not is_proper(d, coloring):
        raise ImproperColoringError(f"coloring is not a proper {design.k}-coloring of the pencil of block {b}")
    blocks = list(design.blocks)
    for m in d.members:
        blocks[m] = d.restricted_blocks[m] + (coloring.color[m],)
    return Design(design.n, design.k, tuple(blocks))


@dataclass(frozen=True, eq=False)
class Paramodification:
    source: Design
    b: int
    coloring: BlockColoring
    result: Design

    @classmethod
    def apply(cls, design: Design, b: int, coloring: BlockColoring) -> "Paramodification":
        return cls(design, b, coloring, paramodify(design, b, coloring))


def reverse_coloring(p: Paramodification) -> BlockColoring:
    """Coloring of the result's pencil that undoes ``p``: each member goes back to its old anchor."""
    pen = pencil(p.result, p.b)
    return BlockColoring(pen, {m: p.coloring.pencil.anchor[m] for m in pen.members})


def nontrivial_class_count(c: BlockColoring) -> int:
    """Number of color classes that are not one of the anchor classes."""
    anchor_classes = set(c.pencil.anchor_classes().values())
    return sum(1 for cls in c.classes().values() if cls not in anchor_classes)


def enumerate_switchings(design: Design) -> list[tuple[int, BlockColoring]]:
    """All ``(b, coloring)`` with exactly two non-trivial classes, one coloring per resolution.

    The coloring keeps every trivial class on its own anchor.
    """
    out = []
    for b in range(len(design.blocks)):
        d = derived_system(design, b)
        anchor_classes = set(d.pencil.anchor_classes().values())
        for res in enumerate_resolutions(d):
            if sum(1 for cls in res.classes if cls not in anchor_classes) == 2:
                c = coloring_from_resolution(d.pencil, res, best_assignment(d.pencil, res))
                out.append((b, c))
    return out


def switching_threshold(k: int) -> int:
    return 2 * k**3 - 8 * k**2 + 13 * k - 6


def switching_excluded_by_bound(n: int, k: int) -> bool:
    """Whether ``n`` lies below the order bound that rules out switchings in anti-Pasch designs."""
    return n < switching_threshold(k)


@dataclass(frozen=True)
class PaschConfiguration:
    """Points ``P1..P6`` (stored 0-based as ``points[0..5]``) with
    ``{P1,P3,P4}``, ``{P1,P5,P6}``, ``{P2,P3,P5}``, ``{P2,P4,P6}`` collinear."""

    points: tuple[int, int, int, int, int, int]

    def triples(self) -> list[tuple[int, int, int]]:
        p1, p2, p3, p4, p5, p6 = self.points
        return [(p1, p3, p4), (p1, p5, p6), (p2, p3, p5), (p2, p4, p6)]

    def check(self, design: Design) -> bool:
        if len(set(self.points)) != 6:
            return False
        return all(any(set(t) <= blk for blk in design.block_sets) for t in self.triples())


def _pasch_search(design: Design, first_only: bool):
    table = design.pair_table.tolist()
    sets = design.block_sets
    for p1 in range(design.n):
        for bi, bj in combinations(design.point_blocks[p1], 2):
            rest_i = [p for p in design.blocks[bi] if p != p1]
            rest_j = [p for p in design.blocks[bj] if p != p1]
            for p3, p4 in permutations(rest_i, 2):
                for p5, p6 in permutations(rest_j, 2):
                    meet = sets[table[p3][p5]] & sets[table[p4][p6]]
                    if meet:
                        (p2,) = meet
                        yield PaschConfiguration((p1, p2, p3, p4, p5, p6)), (bi, bj, table[p3][p5], table[p4][p6])
                        if first_only:
                            return


def find_pasch(design: Design) -> PaschConfiguration | None:
    return next((cfg for cfg, _ in _pasch_search(design, True)), None)


def is_anti_pasch(design: Design) -> bool:
    return find_pasch(design) is None


def count_pasch(design: Design) -> int:
    """Number of distinct Pasch configurations, counted as 4-sets of blocks."""
    return len({frozenset(blks) for _, blks in _pasch_search(design, False)})
