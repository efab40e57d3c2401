"""Plain-text design format.

First line ``n k``; then one block per non-empty line as space-separated
0-based point indices. Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from pathlib import Path

from .design import Design, DesignError

__all__ = ["DesignFormatError", "dumps", "export_design", "import_design", "loads"]


class DesignFormatError(DesignError):
    pass


def loads(text: str) -> Design:
    header: tuple[int, int] | None = None
    blocks: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise DesignFormatError(f"line {lineno}: malformed line {raw!r}") from None
        if header is None:
            if len(nums) != 2 or nums[0] < 1 or nums[1] < 2:
                raise DesignFormatError(f"line {lineno}: header must be 'n k', got {raw!r}")
            header = (nums[0], nums[1])
            continue
        n, k = header
        if len(nums) != k:
            raise DesignFormatError(f"line {lineno}: wrong block size {len(nums)}, expected {k}")
        if any(not 0 <= p < n for p in nums):
            raise DesignFormatError(f"line {lineno}: point index out of range [0, {n})")
        if len(set(nums)) != k:
            raise DesignFormatError(f"line {lineno}: repeated point in block")
        blocks.append(tuple(nums))
    if header is None:
        raise DesignFormatError("missing 'n k' header")
    return Design.from_blocks(header[0], header[1], blocks)


def dumps(design: Design, comments: list[str] | None = None) -> str:
    head = "".join(f"# {c}\n" for c in comments or [])
    return head + design.normalized().to_text()


def import_design(path: str | Path) -> Design:
    return loads(Path(path).read_text(encoding="utf-8"))


def export_design(design: Design, path: str | Path, comments: list[str] | None = None) -> None:
    Path(path).write_text(dumps(design, comments), encoding="utf-8")
