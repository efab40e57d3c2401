"""Steiner 2-(n,k,1) designs and the objects derived from a fixed block.

Points are the integers ``0..n-1``. A block is a sorted tuple of points.
Block order is positional: transforms rewrite blocks in place, so block ``i``
of a modified design corresponds to block ``i`` of its source. Use
:meth:`Design.normalized` to get the canonical (sorted) serialization.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "BlockColoring",
    "BlockPencil",
    "Design",
    "DesignError",
    "DerivedSystem",
    "StructuredIncidenceMatrix",
    "Violation",
    "block_through",
    "derived_system",
    "incidence_matrix",
    "pencil",
    "replication_number",
    "structured_matrix",
    "trivial_coloring",
    "validate",
]


class DesignError(ValueError):
    """Raised when a design or derived object cannot be built."""


@dataclass(frozen=True)
class Design:
    n: int
    k: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))

    @classmethod
    def from_blocks(cls, n: int, k: int, blocks: Iterable[Iterable[int]]) -> "Design":
        """Build a design with its block list sorted lexicographically."""
        return cls(n, k, tuple(sorted(tuple(sorted(b)) for b in blocks)))

    def normalized(self) -> "Design":
        return Design(self.n, self.k, tuple(sorted(self.blocks)))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def r(self) -> int:
        return replication_number(self)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines.extend(" ".join(map(str, b)) for b in self.blocks)
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        """SHA-256 of the normalized serialization."""
        return hashlib.sha256(self.normalized().to_text().encode()).hexdigest()

    def relabel(self, perm: Sequence[int]) -> "Design":
        """Apply the point map ``P -> perm[P]``, keeping block positions."""
        return Design(self.n, self.k, tuple(tuple(perm[p] for p in b) for b in self.blocks))

    @cached_property
    def point_blocks(self) -> tuple[tuple[int, ...], ...]:
        through: list[list[int]] = [[] for _ in range(self.n)]
        for i, b in enumerate(self.blocks):
            for p in b:
                if 0 <= p < self.n:
                    through[p].append(i)
        return tuple(tuple(x) for x in through)

    @cached_property
    def block_index(self) -> dict[tuple[int, ...], int]:
        return {b: i for i, b in enumerate(self.blocks)}

    @cached_property
    def pair_table(self) -> np.ndarray:
        """``n x n`` table of the block through each pair, ``-1`` if none.

        Only meaningful on valid designs; on a pair covered twice the last
        block wins.
        """
        table = np.full((self.n, self.n), -1, dtype=np.int32)
        for i, b in enumerate(self.blocks):
            idx = np.array(b, dtype=np.intp)
            table[np.ix_(idx, idx)] = i
        np.fill_diagonal(table, -1)
        return table

    @cached_property
    def block_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(b) for b in self.blocks)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate(design: Design) -> list[Violation]:
    """Check the Steiner 2-(n,k,1) axioms; an empty list means valid."""
    n, k = design.n, design.k
    out: list[Violation] = []
    if k < 2 or n < k:
        out.append(Violation("parameters", f"need 2 <= k <= n, got n={n} k={k}"))
        return out

    cover = np.zeros((n, n), dtype=np.int64)
    for i, b in enumerate(design.blocks):
        if len(b) != k:
            out.append(Violation("wrong block size", f"block {i} {list(b)} has {len(b)} points, expected {k}"))
        if len(set(b)) != len(b):
            out.append(Violation("repeated point", f"block {i} {list(b)}"))
        bad = [p for p in b if not 0 <= p < n]
        if bad:
            out.append(Violation("point out of range", f"block {i} contains {bad}"))
            continue
        for p, q in combinations(sorted(set(b)), 2):
            cover[p, q] += 1

    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    for p, q in np.argwhere(upper & (cover == 0)).tolist():
        out.append(Violation("pair covered zero times", f"({p}, {q})"))
    for p, q in np.argwhere(upper & (cover > 1)).tolist():
        out.append(Violation("pair covered twice", f"({p}, {q}) lies in {cover[p, q]} blocks"))

    if (n - 1) % (k - 1):
        out.append(Violation("replication number", f"(n-1)/(k-1) = {n - 1}/{k - 1} is not an integer"))
    expected, rem = divmod(n * (n - 1), k * (k - 1))
    if rem:
        out.append(Violation("block count", f"n(n-1)/(k(k-1)) = {n * (n - 1)}/{k * (k - 1)} is not an integer"))
    elif len(design.blocks) != expected:
        out.append(Violation("block count", f"{len(design.blocks)} blocks, expected {expected}"))
    return out


def replication_number(design: Design) -> int:
    q, rem = divmod(design.n - 1, design.k - 1)
    if rem:
        raise DesignError(f"(n-1)/(k-1) is not an integer for n={design.n}, k={design.k}")
    return q


def block_through(design: Design, p: int, q: int) -> int:
    """Index of the unique block containing points ``p`` and ``q``."""
    if p == q:
        raise DesignError("block_through needs two distinct points")
    i = int(design.pair_table[p, q])
    if i < 0:
        raise DesignError(f"no block contains points {p} and {q}")
    return i


def _check_block(design: Design, b: int) -> None:
    if not 0 <= b < len(design.blocks):
        raise DesignError(f"block index {b} out of range [0, {len(design.blocks)})")


@dataclass(frozen=True, eq=False)
class BlockPencil:
    """The blocks meeting a base block in exactly one point."""

    base: int
    base_points: tuple[int, ...]
    members: tuple[int, ...]
    anchor: Mapping[int, int]

    def same_as(self, other: "BlockPencil") -> bool:
        return self.base_points == other.base_points and self.members == other.members

    def anchor_classes(self) -> dict[int, frozenset[int]]:
        groups: dict[int, set[int]] = {p: set() for p in self.base_points}
        for m in self.members:
            groups[self.anchor[m]].add(m)
        return {p: frozenset(s) for p, s in groups.items()}


def pencil(design: Design, b: int) -> BlockPencil:
    _check_block(design, b)
    base = design.block_sets[b]
    members = []
    anchor = {}
    for i, blk in enumerate(design.block_sets):
        if i == b:
            continue
        common = blk & base
        if len(common) == 1:
            members.append(i)
            anchor[i] = next(iter(common))
    return BlockPencil(b, design.blocks[b], tuple(members), anchor)


@dataclass(frozen=True, eq=False)
class DerivedSystem:
    """Points off ``b`` with the pencil blocks restricted to them."""

    design: Design
    outside_points: tuple[int, ...]
    pencil: BlockPencil
    restricted_blocks: Mapping[int, tuple[int, ...]]

    @property
    def members(self) -> tuple[int, ...]:
        return self.pencil.members

    @property
    def k(self) -> int:
        return self.design.k

    @cached_property
    def point_members(self) -> dict[int, tuple[int, ...]]:
        through: dict[int, list[int]] = {p: [] for p in self.outside_points}
        for m in self.members:
            for p in self.restricted_blocks[m]:
                through[p].append(m)
        return {p: tuple(v) for p, v in through.items()}


def derived_system(design: Design, b: int) -> DerivedSystem:
    pen = pencil(design, b)
    base = set(pen.base_points)
    outside = tuple(p for p in range(design.n) if p not in base)
    restricted = {m: tuple(p for p in design.blocks[m] if p != pen.anchor[m]) for m in pen.members}
    return DerivedSystem(design, outside, pen, restricted)


@dataclass(frozen=True, eq=False)
class BlockColoring:
    """Colors for the members of a pencil, drawn from the points of the base block."""

    pencil: BlockPencil
    color: Mapping[int, int]

    def classes(self) -> dict[int, frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for m in self.pencil.members:
            groups.setdefault(self.color[m], set()).add(m)
        return {c: frozenset(s) for c, s in groups.items()}

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(self.classes().values())


def trivial_coloring(pen: BlockPencil) -> BlockColoring:
    """Color every member by the point where it meets the base block."""
    return BlockColoring(pen, dict(pen.anchor))


def incidence_matrix(design: Design) -> np.ndarray:
    """Point-by-block 0/1 matrix in natural order."""
    m = np.zeros((design.n, len(design.blocks)), dtype=np.uint8)
    for j, b in enumerate(design.blocks):
        m[list(b), j] = 1
    return m


@dataclass(frozen=True, eq=False)
class StructuredIncidenceMatrix:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    bits: np.ndarray
    k: int
    r: int

    @property
    def corner(self) -> np.ndarray:
        """The top-left ``k x k(r-1)`` submatrix."""
        return self.bits[: self.k, : self.k * (self.r - 1)]


def structured_matrix(design: Design, b: int, layout: Design | None = None) -> StructuredIncidenceMatrix:
    """Incidence matrix with the points of ``b`` first and the pencil grouped by anchor.

    Row and column order come from ``layout`` when given (default: ``design``
    itself), so a design and its paramodification can be compared in one frame.
    """
    ref = design if layout is None else layout
    if (ref.n, len(ref.blocks)) != (design.n, len(design.blocks)):
        raise DesignError("layout design has different dimensions")
    pen = pencil(ref, b)
    r = replication_number(ref)
    rows = pen.base_points + tuple(p for p in range(ref.n) if p not in set(pen.base_points))
    groups = pen.anchor_classes()
    cols: list[int] = []
    for p in pen.base_points:
        cols.extend(sorted(groups[p]))
    cols.append(b)
    used = set(cols)
    cols.extend(i for i in range(len(ref.blocks)) if i not in used)
    bits = incidence_matrix(design)[np.ix_(rows, cols)]
    return StructuredIncidenceMatrix(tuple(rows), tuple(cols), bits, ref.k, r)
