"""Canonical labeling, isomorphism and automorphisms of Steiner 2-designs.

Points are colored by an ordered partition that is refined against block
signatures until stable; non-discrete partitions are split by individualizing
a point of the first non-singleton cell. Each leaf of the search tree is a
relabeling of the design, and the canonical form is the least leaf under the
key ``(trace of node invariants, relabeled block list)``. Leaves that agree
with an earlier one yield automorphisms, which prune sibling branches.
"""

from __future__ import annotations

import hashlib
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .design import Design

__all__ = [
    "CanonicalCertificate",
    "CanonicalForm",
    "are_isomorphic",
    "automorphism_generators",
    "block_orbits",
    "canonical_certificate",
    "canonical_form",
    "group_order",
    "isomorphism",
    "point_invariants",
]

Perm = tuple[int, ...]


@dataclass(frozen=True)
class CanonicalCertificate:
    """Parameters plus the serialized block list of the canonically relabeled design."""

    n: int
    k: int
    certificate: bytes

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.certificate).hexdigest()

    def design(self) -> Design:
        from .fileio import loads

        return loads(self.certificate.decode())


@dataclass(frozen=True)
class CanonicalForm:
    certificate: CanonicalCertificate
    labeling: Perm  # point p of the input becomes labeling[p]
    generators: list[Perm] = field(compare=False)
    nodes: int = field(default=0, compare=False)


def point_invariants(design: Design) -> list[tuple[int, ...]]:
    """Per-point sorted list, over pairs of blocks through the point, of the
    number of pairs of transversal blocks meeting off both blocks.

    For triple systems this counts Pasch configurations through the point and
    the block pair.
    """
    table = design.pair_table.tolist()
    blocks = design.blocks
    out = []
    for p in range(design.n):
        counts = []
        for bi, bj in combinations(design.point_blocks[p], 2):
            ri = [x for x in blocks[bi] if x != p]
            rj = [y for y in blocks[bj] if y != p]
            hits: Counter[int] = Counter()
            for x in ri:
                row = table[x]
                for y in rj:
                    for z in blocks[row[y]]:
                        if z != x and z != y:
                            hits[z] += 1
            counts.append(sum(v * (v - 1) // 2 for v in hits.values()))
        out.append(tuple(sorted(counts)))
    return out


def _colors_from_keys(keys: list) -> tuple[list[int], tuple]:
    """Cell-start colors for an ordered partition sorted by key, plus its shape."""
    tally = sorted(Counter(keys).items())
    start = {}
    pos = 0
    for key, cnt in tally:
        start[key] = pos
        pos += cnt
    return [start[key] for key in keys], tuple(tally)


class _Search:
    def __init__(self, design: Design, point_colors: Sequence | None):
        self.n = design.n
        self.blocks = design.blocks
        self.pb = design.point_blocks
        self.block_index = design.block_index
        self.gens: list[Perm] = []
        self.nodes = 0
        self.first = None  # (trace, cert, lab, seq) of the first leaf
        self.best = None
        self._orbit_cache: dict[tuple[int, ...], tuple[int, list[int]]] = {}

        inv = point_invariants(design) if design.n > 1 else [()] * design.n
        user = list(point_colors) if point_colors is not None else [0] * design.n
        colors, shape = _colors_from_keys(list(zip(user, inv)))
        self.root = colors
        self.root_shape = hash(shape)

    def refine(self, colors: list[int]) -> tuple[list[int], int]:
        blocks, pb, n = self.blocks, self.pb, self.n
        ncells = len(set(colors))
        shapes = []
        while True:
            bsig = [tuple(sorted([colors[p] for p in blk])) for blk in blocks]
            rank = {s: i for i, s in enumerate(sorted(set(bsig)))}
            brank = [rank[s] for s in bsig]
            keys = [(colors[p], tuple(sorted([brank[i] for i in pb[p]]))) for p in range(n)]
            new, shape = _colors_from_keys(keys)
            shapes.append(hash(shape))
            if len(shape) == ncells:
                return colors, hash(tuple(shapes))
            colors, ncells = new, len(shape)

    def target_cell(self, colors: list[int]) -> list[int] | None:
        count = Counter(colors)
        multi = [c for c, m in count.items() if m > 1]
        if not multi:
            return None
        c = min(multi)
        return [p for p in range(self.n) if colors[p] == c]

    def orbit_roots(self, seq: list[int]) -> list[int]:
        key = tuple(seq)
        cached = self._orbit_cache.get(key)
        if cached is not None and cached[0] == len(self.gens):
            return cached[1]
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[x] == x for x in seq):
                for x in range(self.n):
                    a, b = find(x), find(g[x])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        roots = [find(x) for x in range(self.n)]
        self._orbit_cache[key] = (len(self.gens), roots)
        return roots

    def run(self) -> None:
        colors, inv = self.refine(self.root)
        self.visit(colors, [], [self.root_shape, inv])

    def visit(self, colors: list[int], seq: list[int], trace: list[int]) -> int | None:
        self.nodes += 1
        cell = self.target_cell(colors)
        if cell is None:
            return self.leaf(colors, seq, trace)
        level = len(seq)
        explored: list[int] = []
        for v in cell:
            if explored:
                roots = self.orbit_roots(seq)
                if roots[v] in {roots[w] for w in explored}:
                    continue
            explored.append(v)
            child = list(colors)
            c = colors[v]
            for p in cell:
                if p != v:
                    child[p] = c + 1
            child, inv = self.refine(child)
            ctrace = trace + [inv]
            if self.first is not None:
                on_first = ctrace == self.first[0][: len(ctrace)]
                if not on_first and ctrace > self.best[0][: len(ctrace)]:
                    continue
            jump = self.visit(child, seq + [v], ctrace)
            if jump is not None and jump < level:
                return jump
        return None

    def leaf(self, lab: list[int], seq: list[int], trace: list[int]) -> int | None:
        cert = tuple(sorted(tuple(sorted([lab[p] for p in blk])) for blk in self.blocks))
        entry = (trace, cert, tuple(lab), list(seq))
        if self.first is None:
            self.first = self.best = entry
            return None
        for ref in (self.first, self.best):
            if trace == ref[0] and cert == ref[1]:
                self.add_automorphism(lab, ref[2])
                return _common_prefix(seq, ref[3])
        if (trace, cert) < (self.best[0], self.best[1]):
            self.best = entry
        return None

    def add_automorphism(self, lab: Sequence[int], ref_lab: Sequence[int]) -> None:
        back = [0] * self.n
        for p, l in enumerate(ref_lab):
            back[l] = p
        g = tuple(back[lab[p]] for p in range(self.n))
        for blk in self.blocks:
            if tuple(sorted(g[p] for p in blk)) not in self.block_index:
                raise AssertionError("leaf coincidence produced a non-automorphism")
        if any(g[p] != p for p in range(self.n)):
            self.gens.append(g)


def _common_prefix(a: list[int], b: list[int]) -> int:
    i = 0
    while i < len(a) and i < len(b) and a[i] == b[i]:
        i += 1
    return i


_CACHE: OrderedDict[str, CanonicalForm] = OrderedDict()
_CACHE_SIZE = 4096


def canonical_form(design: Design, point_colors: Sequence | None = None) -> CanonicalForm:
    """Canonical labeling with automorphism generators.

    ``point_colors`` restricts to labelings (and automorphisms) that preserve
    the given point coloring; colors must be mutually comparable.
    """
    cache_key = None
    if point_colors is None:
        cache_key = design.content_hash()
        hit = _CACHE.get(cache_key)
        if hit is not None:
            _CACHE.move_to_end(cache_key)
            return hit
    s = _Search(design, point_colors)
    s.run()
    _, cert, lab, _ = s.best
    text = Design(design.n, design.k, cert).to_text().encode()
    form = CanonicalForm(CanonicalCertificate(design.n, design.k, text), lab, list(s.gens), s.nodes)
    if cache_key is not None:
        _CACHE[cache_key] = form
        if len(_CACHE) > _CACHE_SIZE:
            _CACHE.popitem(last=False)
    return form


def canonical_certificate(design: Design) -> CanonicalCertificate:
    return canonical_form(design).certificate


def isomorphism(d1: Design, d2: Design) -> Perm | None:
    """A verified point bijection mapping the blocks of ``d1`` onto those of ``d2``, or None."""
    if (d1.n, d1.k, len(d1.blocks)) != (d2.n, d2.k, len(d2.blocks)):
        return None
    f1, f2 = canonical_form(d1), canonical_form(d2)
    if f1.certificate != f2.certificate:
        return None
    back = [0] * d2.n
    for p, l in enumerate(f2.labeling):
        back[l] = p
    phi = tuple(back[f1.labeling[p]] for p in range(d1.n))
    mapped = sorted(tuple(sorted(phi[p] for p in b)) for b in d1.blocks)
    if mapped != sorted(d2.blocks):
        raise AssertionError("equal certificates but the derived bijection is not an isomorphism")
    return phi


def are_isomorphic(d1: Design, d2: Design) -> bool:
    return isomorphism(d1, d2) is not None


def automorphism_generators(design: Design, stabilize: Sequence[int] = ()) -> list[Perm]:
    """Generators of the automorphism group, or of the setwise stabilizer of the listed blocks.

    Every generator is checked to map blocks to blocks.
    """
    if stabilize:
        marks = [0] * design.n
        for i, b in enumerate(stabilize):
            for p in design.blocks[b]:
                marks[p] |= 1 << i
        gens = canonical_form(design, marks).generators
    else:
        gens = canonical_form(design).generators
    blocks = set(design.blocks)
    for g in gens:
        assert all(tuple(sorted(g[p] for p in b)) in blocks for b in design.blocks)
    return list(gens)


def group_order(generators: Sequence[Perm], n: int) -> int:
    """Order of the permutation group on ``n`` points generated by ``generators``."""
    if not generators:
        return 1
    from sympy.combinatorics import Permutation, PermutationGroup

    return int(PermutationGroup([Permutation(list(g), size=n) for g in generators]).order())


def block_orbits(design: Design, generators: Sequence[Perm]) -> list[list[int]]:
    """Orbits of the block indices under the group generated by point permutations."""
    index = design.block_index
    actions = [[index[tuple(sorted(g[p] for p in b))] for b in design.blocks] for g in generators]
    seen = [False] * len(design.blocks)
    orbits = []
    for i in range(len(design.blocks)):
        if seen[i]:
            continue
        seen[i] = True
        orbit, stack = [i], [i]
        while stack:
            x = stack.pop()
            for act in actions:
                y = act[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    stack.append(y)
        orbits.append(sorted(orbit))
    return orbits
