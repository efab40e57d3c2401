"""Breadth-first exploration of the paramodification graph.

Vertices are isomorphism classes, keyed by the SHA-256 of the canonical
certificate. Each vertex is expanded from its canonical form, so the graph
depends only on the seeds and the limits.

Catalog layout::

    DIR/designs/<hash>.txt   canonical form of each vertex
    DIR/index.txt            append-only records, one per line, each ending
                             in ``crc=<crc32 of the rest of the line>``

Index records::

    <hash> <depth> <finished> <degree> <provenance> crc=...
    edge <src> <dst> <multiplicity> crc=...
    meta <key>=<value> ... crc=...

Later vertex records supersede earlier ones. On load, arcs from unfinished
vertices and vertices only reachable through them are dropped, so a run
killed mid-expansion resumes to exactly the graph of an uninterrupted run.
"""

from __future__ import annotations

import heapq
import logging
import time
import zlib
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

from .canon import automorphism_generators, block_orbits, canonical_form
from .coloring import best_assignment, coloring_from_resolution, enumerate_resolutions, orbit_representatives
from .design import Design, derived_system, validate
from .fileio import export_design, import_design
from .transform import paramodify

__all__ = [
    "Catalog",
    "CatalogError",
    "ClassStats",
    "Neighbor",
    "ParamodGraph",
    "VertexRecord",
    "class_stats",
    "expand",
    "explore",
]

log = logging.getLogger(__name__)


class CatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class Neighbor:
    hash: str
    design: Design  # canonical form
    multiplicity: int  # number of (block, resolution) pairs giving this class
    block: int  # first realizing pair, as indices into the expanded design
    resolution: int


def expand(design: Design, use_symmetry: bool = True) -> list[Neighbor]:
    """Isomorphism classes of all paramodifications of ``design``, sorted by hash.

    With ``use_symmetry`` only one block per automorphism orbit and one
    resolution per stabilizer orbit is paramodified; multiplicities are
    weighted by orbit sizes so they match the exhaustive count.
    """
    if use_symmetry:
        gens = automorphism_generators(design)
        reps = [(orb[0], len(orb)) for orb in block_orbits(design, gens)]
    else:
        reps = [(b, 1) for b in range(len(design.blocks))]

    found: dict[str, list] = {}
    for b, block_weight in reps:
        d = derived_system(design, b)
        resolutions = enumerate_resolutions(d)
        index = {res: j for j, res in enumerate(resolutions)}
        if use_symmetry:
            resolutions = orbit_representatives(d, resolutions, automorphism_generators(design, stabilize=[b]))
        for res in resolutions:
            col = coloring_from_resolution(d.pencil, res, best_assignment(d.pencil, res))
            result = paramodify(design, b, col)
            bad = validate(result)
            if bad:
                raise AssertionError(f"paramodification at block {b} is not a Steiner design: {bad[0]}")
            form = canonical_form(result)
            h = form.certificate.hash
            weight = block_weight * res.orbit_size
            if h in found:
                found[h][1] += weight
            else:
                found[h] = [form.certificate.design(), weight, b, index[res]]
    return [Neighbor(h, *found[h]) for h in sorted(found)]


@dataclass
class VertexRecord:
    hash: str
    depth: int
    finished: bool = False
    degree: int = 0
    provenance: str = ""

    def line(self) -> str:
        return f"{self.hash} {self.depth} {int(self.finished)} {self.degree} {self.provenance}"


@dataclass
class ParamodGraph:
    vertices: dict[str, VertexRecord] = field(default_factory=dict)
    arcs: dict[tuple[str, str], int] = field(default_factory=dict)
    designs: dict[str, Design] = field(default_factory=dict, repr=False, compare=False)

    @property
    def edges(self) -> dict[tuple[str, str], int]:
        """Unordered edges (sorted pairs) with multiplicity summed over both expansions."""
        out: dict[tuple[str, str], int] = {}
        for (u, v), m in self.arcs.items():
            key = (u, v) if u <= v else (v, u)
            out[key] = out.get(key, 0) + m
        return out

    def neighbors(self, h: str) -> set[str]:
        return {v for (u, v) in self.arcs if u == h} | {u for (u, v) in self.arcs if v == h}

    def components(self) -> list[list[str]]:
        parent = {h: h for h in self.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.arcs:
            a, b = find(u), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[str, list[str]] = {}
        for h in sorted(self.vertices):
            groups.setdefault(find(h), []).append(h)
        return sorted(groups.values(), key=lambda c: (-len(c), c[0]))


def _with_crc(body: str) -> str:
    return f"{body} crc={zlib.crc32(body.encode()):08x}"


def _check_crc(line: str) -> str | None:
    body, sep, crc = line.rpartition(" crc=")
    if not sep or f"{zlib.crc32(body.encode()):08x}" != crc:
        return None
    return body


class Catalog:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.index = self.root / "index.txt"
        self.design_dir = self.root / "designs"

    def exists(self) -> bool:
        return self.index.exists()

    def _append(self, lines: Iterable[str]) -> None:
        with self.index.open("a", encoding="utf-8") as fh:
            for body in lines:
                fh.write(_with_crc(body) + "\n")
            fh.flush()

    def write_design(self, h: str, design: Design) -> None:
        path = self.design_dir / f"{h}.txt"
        if not path.exists():
            self.design_dir.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            export_design(design, tmp)
            tmp.replace(path)

    def write_vertices(self, records: Iterable[VertexRecord]) -> None:
        self._append(rec.line() for rec in records)

    def write_expansion(self, rec: VertexRecord, arcs: dict[str, int]) -> None:
        lines = [f"edge {rec.hash} {dst} {m}" for dst, m in sorted(arcs.items())]
        lines.append(rec.line())
        self._append(lines)

    def write_meta(self, **items) -> None:
        self._append(["meta " + " ".join(f"{k}={v}" for k, v in items.items())])

    def load(self, repair: bool = False) -> ParamodGraph:
        """Read the catalog. With ``repair`` a torn final record is cut off the file
        so later appends start on a fresh line."""
        vertices: dict[str, VertexRecord] = {}
        arcs: dict[tuple[str, str], int] = {}
        text = self.index.read_text(encoding="utf-8") if self.exists() else ""
        lines = text.split("\n")
        if lines[-1] == "":
            lines.pop()
        torn = False
        bodies = []
        for no, line in enumerate(lines, 1):
            body = _check_crc(line)
            if body is None:
                if no < len(lines):
                    raise CatalogError(f"{self.index}:{no}: checksum mismatch")
                log.warning("ignoring torn final record in %s", self.index)
                lines.pop()
                torn = True
                break
            bodies.append(body)
        if repair and (torn or (text and not text.endswith("\n"))):
            self.index.write_text("".join(l + "\n" for l in lines), encoding="utf-8")
        for body in bodies:
            parts = body.split()
            if parts[0] == "meta":
                continue
            if parts[0] == "edge":
                arcs[(parts[1], parts[2])] = int(parts[3])
                continue
            h, depth, finished, degree, prov = parts
            vertices[h] = VertexRecord(h, int(depth), finished == "1", int(degree), prov)

        finished = {h for h, v in vertices.items() if v.finished}
        arcs = {key: m for key, m in arcs.items() if key[0] in finished}
        reached = {dst for _, dst in arcs}
        keep = {h for h, v in vertices.items() if v.provenance.startswith("seed") or h in reached}
        graph = ParamodGraph()
        for h in sorted(keep):
            graph.vertices[h] = vertices[h]
            graph.designs[h] = import_design(self.design_dir / f"{h}.txt")
        graph.arcs = arcs
        return graph


def explore(
    seeds: Sequence[Design],
    max_vertices: int | None = None,
    max_depth: int | None = None,
    time_budget: float | None = None,
    out: str | Path | None = None,
    use_symmetry: bool = True,
    max_expansions: int | None = None,
) -> ParamodGraph:
    """Grow the paramodification graph from ``seeds`` in (depth, hash) order.

    A vertex is expanded only while fewer than ``max_vertices`` vertices are
    known, its depth is below ``max_depth``, the wall-clock ``time_budget``
    (seconds) has not run out and fewer than ``max_expansions`` expansions
    happened in this call; everything else stays unfinished. With ``out``,
    progress is persisted and an existing catalog there is resumed.
    """
    params = {(s.n, s.k) for s in seeds}
    if len(params) > 1:
        raise ValueError(f"seeds have different parameters: {sorted(params)}")
    catalog = Catalog(out) if out is not None else None
    graph = catalog.load(repair=True) if catalog is not None and catalog.exists() else ParamodGraph()
    if graph.designs and seeds:
        some = next(iter(graph.designs.values()))
        if (some.n, some.k) not in params:
            raise ValueError("seeds do not match the parameters of the existing catalog")
    if catalog is not None:
        catalog.root.mkdir(parents=True, exist_ok=True)
        catalog.write_meta(
            run=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            seeds=len(seeds),
            max_vertices=max_vertices,
            max_depth=max_depth,
            time_budget=time_budget,
            symmetry=int(use_symmetry),
        )

    for i, seed in enumerate(seeds):
        form = canonical_form(seed)
        h = form.certificate.hash
        if h in graph.vertices:
            continue
        rec = VertexRecord(h, 0, provenance=f"seed:{i}")
        graph.vertices[h] = rec
        graph.designs[h] = form.certificate.design()
        if catalog is not None:
            catalog.write_design(h, graph.designs[h])
            catalog.write_vertices([rec])

    queue = [(v.depth, h) for h, v in graph.vertices.items() if not v.finished]
    heapq.heapify(queue)
    start = time.monotonic()
    done = 0
    while queue:
        depth, h = heapq.heappop(queue)
        rec = graph.vertices[h]
        if rec.finished or (max_depth is not None and depth >= max_depth):
            continue
        if max_vertices is not None and len(graph.vertices) >= max_vertices:
            break
        if time_budget is not None and time.monotonic() - start >= time_budget:
            break
        if max_expansions is not None and done >= max_expansions:
            break
        neighbors = expand(graph.designs[h], use_symmetry)
        new = []
        for nb in neighbors:
            if nb.hash not in graph.vertices:
                child = VertexRecord(nb.hash, depth + 1, provenance=f"paramod:{h[:16]}:b{nb.block}:r{nb.resolution}")
                graph.vertices[nb.hash] = child
                graph.designs[nb.hash] = nb.design
                new.append(child)
                heapq.heappush(queue, (depth + 1, nb.hash))
            graph.arcs[(h, nb.hash)] = nb.multiplicity
        rec.finished = True
        rec.degree = len({nb.hash for nb in neighbors} - {h})
        if catalog is not None:
            for child in new:
                catalog.write_design(child.hash, graph.designs[child.hash])
            catalog.write_vertices(new)
            catalog.write_expansion(rec, {nb.hash: nb.multiplicity for nb in neighbors})
        done += 1
        log.info("expanded %s (depth %d): %d neighbours, %d new", h[:12], depth, len(neighbors), len(new))
    return graph


@dataclass(frozen=True)
class StatsRow:
    label: str
    classes: int
    vertices: int
    incomplete: int


@dataclass(frozen=True)
class ClassStats:
    rows: list[StatsRow]
    components: list[tuple[int, int, int]]  # (size, finished, unfinished) per component
    isolated: int

    def row(self, label: str) -> StatsRow | None:
        return next((r for r in self.rows if r.label == label), None)

    def render(self) -> str:
        header = ("size of class", "classes", "vertices", "incomplete")
        table = [header] + [(r.label, str(r.classes), str(r.vertices), str(r.incomplete)) for r in self.rows]
        widths = [max(len(row[i]) for row in table) for i in range(4)]
        lines = [
            "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w) for i, (cell, w) in enumerate(zip(row, widths)))
            for row in table
        ]
        total = sum(c[0] for c in self.components)
        unfinished = sum(c[2] for c in self.components)
        lines.append(f"vertices: {total}, unfinished: {unfinished}, classes: {len(self.components)}")
        return "\n".join(lines)


_BUCKETS = [(1, 1, "isolated vertex"), (2, 5, "2-5"), (6, 10, "6-10"), (11, 100, "11-100"), (101, 1000, "101-1000")]


def _bucket(size: int) -> tuple[int, str]:
    for lo, hi, label in _BUCKETS:
        if lo <= size <= hi:
            return lo, label
    return size, str(size)


def class_stats(graph: ParamodGraph) -> ClassStats:
    """Distribution of paramodification class (component) sizes, bucketed like a census table."""
    comps = []
    rows: dict[str, list[int]] = {}
    order: dict[str, int] = {}
    for comp in graph.components():
        fin = sum(1 for h in comp if graph.vertices[h].finished)
        comps.append((len(comp), fin, len(comp) - fin))
        key, label = _bucket(len(comp))
        order[label] = key
        acc = rows.setdefault(label, [0, 0, 0])
        acc[0] += 1
        acc[1] += len(comp)
        acc[2] += int(fin < len(comp))
    table = [StatsRow(label, *rows[label]) for label in sorted(rows, key=order.__getitem__)]
    return ClassStats(table, comps, sum(1 for c in comps if c[0] == 1))
