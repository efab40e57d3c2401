"""Command line interface: ``paramod-cli <command> ...``.

Exit status is 0 on success, 1 when an input design fails validation or
cannot be parsed (or a catalog is corrupt), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import canon, coloring, explorer, generators, transform
from .design import DesignError, derived_system, validate
from .fileio import DesignFormatError, dumps, import_design

EXIT_INVALID = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _load(path: str, check: bool = True):
    design = import_design(path)
    if check:
        bad = validate(design)
        if bad:
            raise DesignFormatError(f"{path}: not a Steiner 2-design ({bad[0]})")
    return design


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _block(design, i: int) -> int:
    if not 0 <= i < len(design.blocks):
        raise UsageError(f"--block {i} out of range [0, {len(design.blocks)})")
    return i


def cmd_generate(args) -> int:
    make = {"ag": generators.affine_plane, "pg": generators.projective_plane, "hermitian": generators.hermitian_unital}
    try:
        design = make[args.family](args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(dumps(design, [f"{args.family} q={args.q}"]), args.output)
    return 0


def cmd_validate(args) -> int:
    design = _load(args.file, check=False)
    bad = validate(design)
    if not bad:
        print(f"valid 2-({design.n},{design.k},1) design, {len(design.blocks)} blocks, r={design.r}")
        return 0
    for v in bad:
        print(v)
    return EXIT_INVALID


def cmd_colorings(args) -> int:
    design = _load(args.file)
    b = _block(design, args.block)
    d = derived_system(design, b)
    total = coloring.enumerate_resolutions(d)
    shown = total
    if not args.no_symmetry:
        gens = canon.automorphism_generators(design, stabilize=[b])
        shown = coloring.orbit_representatives(d, total, gens)
    if not args.count_only:
        for res in shown:
            line = ";".join(",".join(map(str, cls)) for cls in res.as_lists())
            print(line if args.no_symmetry else f"{line} orbit={res.orbit_size}")
    if args.no_symmetry:
        print(f"# resolutions: {len(total)}")
    else:
        print(f"# resolutions: {len(total)} in {len(shown)} orbits")
    return 0


def cmd_paramod(args) -> int:
    design = _load(args.file)
    b = _block(design, args.block)
    d = derived_system(design, b)
    resolutions = coloring.enumerate_resolutions(d)
    if not 0 <= args.resolution < len(resolutions):
        raise UsageError(f"--resolution {args.resolution} out of range [0, {len(resolutions)})")
    res = resolutions[args.resolution]
    if args.assignment:
        try:
            assignment = tuple(int(x) for x in args.assignment.split(","))
        except ValueError:
            raise UsageError(f"bad --assignment {args.assignment!r}") from None
    else:
        assignment = coloring.best_assignment(d.pencil, res)
    try:
        col = coloring.coloring_from_resolution(d.pencil, res, assignment)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = transform.paramodify(design, b, col)
    note = f"paramod of {design.content_hash()} at block {b}, resolution {args.resolution}"
    _write(dumps(result, [note]), args.output)
    return 0


def cmd_switchings(args) -> int:
    design = _load(args.file)
    found = transform.enumerate_switchings(design)
    for b, col in found:
        classes = ";".join(f"{p}:" + ",".join(map(str, sorted(cls))) for p, cls in sorted(col.classes().items()))
        print(f"block {b}: {classes}")
    print(f"# switchings: {len(found)}")
    return 0


def cmd_pasch(args) -> int:
    design = _load(args.file)
    cfg = transform.find_pasch(design)
    if cfg is None:
        print("anti-Pasch")
    else:
        print("Pasch configuration: " + " ".join(map(str, cfg.points)))
    return 0


def cmd_canon(args) -> int:
    design = _load(args.file)
    print(canon.canonical_certificate(design).hash)
    return 0


def cmd_iso(args) -> int:
    d1, d2 = _load(args.file1), _load(args.file2)
    phi = canon.isomorphism(d1, d2)
    print("non-isomorphic" if phi is None else " ".join(map(str, phi)))
    return 0


def cmd_explore(args) -> int:
    seeds = [_load(path) for path in args.seed]
    graph = explorer.explore(
        seeds,
        max_vertices=args.max_vertices,
        max_depth=args.max_depth,
        time_budget=args.time_budget,
        out=args.out,
        use_symmetry=not args.no_symmetry,
    )
    print(explorer.class_stats(graph).render())
    return 0


def cmd_stats(args) -> int:
    cat = explorer.Catalog(args.dir)
    if not cat.exists():
        raise UsageError(f"no catalog index in {args.dir}")
    print(explorer.class_stats(cat.load()).render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramod-cli", description="Paramodifications of Steiner 2-designs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write AG(2,q), PG(2,q) or the Hermitian unital of order q")
    p.add_argument("family", choices=["ag", "pg", "hermitian"])
    p.add_argument("q", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="check the Steiner 2-design axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("colorings", help="list the resolutions of the derived system at a block")
    p.add_argument("file")
    p.add_argument("--block", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_colorings)

    p = sub.add_parser("paramod", help="apply one paramodification")
    p.add_argument("file")
    p.add_argument("--block", type=int, required=True)
    p.add_argument("--resolution", "--resolution-index", type=int, required=True, dest="resolution")
    p.add_argument("--assignment", help="comma-separated points of the block, one per class")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_paramod)

    p = sub.add_parser("switchings", help="list paramodifications with two non-trivial classes")
    p.add_argument("file")
    p.set_defaults(func=cmd_switchings)

    p = sub.add_parser("pasch", help="find a Pasch configuration")
    p.add_argument("file")
    p.set_defaults(func=cmd_pasch)

    p = sub.add_parser("canon", help="print the canonical certificate hash")
    p.add_argument("file")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("iso", help="print a point bijection or 'non-isomorphic'")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("explore", help="breadth-first paramodification graph search")
    p.add_argument("--seed", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--time-budget", type=float, help="seconds")
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("stats", help="class size distribution of a catalog")
    p.add_argument("dir")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"paramod-cli: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"paramod-cli: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DesignError, explorer.CatalogError) as exc:
        print(f"paramod-cli: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
