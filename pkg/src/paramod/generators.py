"""Classical Steiner 2-designs over small finite fields."""

from __future__ import annotations

from itertools import product

from .design import Design
from .fields import FiniteField, factor_prime_power, gf

__all__ = ["affine_plane", "projective_plane", "hermitian_unital", "projective_points"]

MAX_PLANE_ORDER = 9


def _plane_field(q: int) -> FiniteField:
    factor_prime_power(q)
    if q > MAX_PLANE_ORDER:
        raise ValueError(f"plane order {q} exceeds {MAX_PLANE_ORDER}")
    return gf(q)


def affine_plane(q: int) -> Design:
    """AG(2,q): points ``(x, y)`` numbered ``x*q + y``."""
    f = _plane_field(q)
    blocks = []
    for m, c in product(range(q), repeat=2):
        blocks.append([x * q + f.add(f.mul(m, x), c) for x in range(q)])
    for c in range(q):
        blocks.append([c * q + y for y in range(q)])
    return Design.from_blocks(q * q, q, blocks)


def projective_points(f: FiniteField) -> list[tuple[int, int, int]]:
    """Normalized homogeneous triples (first nonzero coordinate 1), in lexicographic order."""
    q = f.q
    pts = [(1, y, z) for y in range(q) for z in range(q)]
    pts += [(0, 1, z) for z in range(q)]
    pts.append((0, 0, 1))
    return sorted(pts)


def _dot(f: FiniteField, u: tuple[int, int, int], v: tuple[int, int, int]) -> int:
    return f.add(f.add(f.mul(u[0], v[0]), f.mul(u[1], v[1])), f.mul(u[2], v[2]))


def projective_plane(q: int) -> Design:
    """PG(2,q); lines are the same triples as points, incidence by dot product."""
    f = _plane_field(q)
    pts = projective_points(f)
    blocks = [[i for i, p in enumerate(pts) if _dot(f, line, p) == 0] for line in pts]
    return Design.from_blocks(len(pts), q + 1, blocks)


def hermitian_unital(q: int) -> Design:
    """Classical unital of order ``q``: the Hermitian curve
    ``x^(q+1) + y^(q+1) + z^(q+1) = 0`` in PG(2, q^2) with its secant lines."""
    if q not in (2, 3, 4):
        raise ValueError(f"hermitian_unital supports q in (2, 3, 4), got {q}")
    f = gf(q * q)
    pts = projective_points(f)

    def norm(a: int) -> int:
        return f.pow(a, q + 1)

    on_curve = [p for p in pts if f.add(f.add(norm(p[0]), norm(p[1])), norm(p[2])) == 0]
    index = {p: i for i, p in enumerate(on_curve)}
    blocks = []
    for line in pts:
        meet = [index[p] for p in on_curve if _dot(f, line, p) == 0]
        if len(meet) == q + 1:
            blocks.append(meet)
    return Design.from_blocks(len(on_curve), q + 1, blocks)
