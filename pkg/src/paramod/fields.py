"""Table-driven arithmetic in GF(q) for prime powers q <= 32."""

from __future__ import annotations

from functools import lru_cache

__all__ = ["CONWAY_POLYNOMIALS", "FiniteField", "factor_prime_power", "gf"]

MAX_ORDER = 32

# Coefficients low degree first, monic. Fixed so field labels never change.
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


class FiniteField:
    """GF(p^e) on the integers ``0..q-1``.

    An element is the integer whose base-``p`` digits are its polynomial
    coefficients, constant term first.
    """

    def __init__(self, q: int):
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds {MAX_ORDER}")
        self.p, self.e = factor_prime_power(q)
        self.q = q
        if self.e == 1:
            self.modulus: tuple[int, ...] = (0, 1)
        else:
            self.modulus = CONWAY_POLYNOMIALS[(self.p, self.e)]
        self._add = tuple(tuple(self._poly_add(a, b) for b in range(q)) for a in range(q))
        self._mul = tuple(tuple(self._poly_mul(a, b) for b in range(q)) for a in range(q))
        self._neg = tuple(self._add[a].index(0) for a in range(q))
        self._inv = (0,) + tuple(self._mul[a].index(1) for a in range(1, q))

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _from_digits(self, ds: list[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def _poly_add(self, a: int, b: int) -> int:
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _poly_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for deg in range(len(prod) - 1, e - 1, -1):
            c = prod[deg]
            if c:
                for i in range(e + 1):
                    prod[deg - e + i] = (prod[deg - e + i] - c * mod[i]) % p
        return self._from_digits(prod[:e])

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def pow(self, a: int, n: int) -> int:
        out = 1
        for _ in range(n):
            out = self._mul[out][a]
        return out

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    @property
    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    return FiniteField(q)
