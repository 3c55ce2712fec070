"""Slow, independent reference implementations used to check the library.

Nothing here imports the linear algebra, projective or group code under test:
fields are polynomial arithmetic on coefficient lists, subspaces are explicit
sets of vectors, and groups are closed by brute-force multiplication.
"""

from __future__ import annotations

import itertools
from collections import deque


class PolyField:
    """GF(p^e) as coefficient tuples reduced modulo a monic polynomial.

    Elements are encoded the same way as the library (base-p digits,
    constant term lowest) so results can be compared directly.
    """

    def __init__(self, p: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = len(modulus) - 1
        self.q = p**self.e
        self.modulus = modulus

    def coeffs(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def value(self, cs) -> int:
        return sum(c * self.p**i for i, c in enumerate(cs))

    def add(self, a: int, b: int) -> int:
        return self.value([(x + y) % self.p for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self.value([(-x) % self.p for x in self.coeffs(a)])

    def mul(self, a: int, b: int) -> int:
        x, y = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                prod[i + j] = (prod[i + j] + xi * yj) % self.p
        # reduce from the top using x^e = -(m_0 + ... + m_{e-1} x^{e-1})
        for d in range(len(prod) - 1, self.e - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for k in range(self.e):
                    prod[d - self.e + k] = (prod[d - self.e + k] - c * self.modulus[k]) % self.p
        return self.value(prod[: self.e])

    def inv(self, a: int) -> int:
        return next(b for b in range(1, self.q) if self.mul(a, b) == 1)

    def has_root(self) -> bool:
        """Whether the modulus has a root in the prime field."""
        return any(sum(c * x**i for i, c in enumerate(self.modulus)) % self.p == 0 for x in range(self.p))


def prime_field(p: int) -> PolyField:
    return PolyField(p, (0, 1))


def dot(F: PolyField, x, y) -> int:
    s = 0
    for a, b in zip(x, y):
        s = F.add(s, F.mul(a, b))
    return s


def scale(F: PolyField, c: int, x) -> tuple[int, ...]:
    return tuple(F.mul(c, a) for a in x)


def vadd(F: PolyField, x, y) -> tuple[int, ...]:
    return tuple(F.add(a, b) for a, b in zip(x, y))


def span_set(F: PolyField, vectors, v: int) -> frozenset[tuple[int, ...]]:
    """All GF(q)-linear combinations of ``vectors`` as an explicit set."""
    out = {tuple([0] * v)}
    for w in vectors:
        w = tuple(int(c) for c in w)
        out = {vadd(F, x, scale(F, c, w)) for x in out for c in range(F.q)}
    return frozenset(out)


def normalized(F: PolyField, x) -> tuple[int, ...]:
    lead = next(c for c in x if c)
    return scale(F, F.inv(lead), x)


def projective_points(F: PolyField, S: frozenset) -> frozenset[tuple[int, ...]]:
    return frozenset(normalized(F, x) for x in S if any(x))


def all_vectors(q: int, v: int):
    return itertools.product(range(q), repeat=v)


def k_subspaces(F: PolyField, v: int, k: int) -> set[frozenset]:
    """Every k-subspace as a vector set, grown one dimension at a time."""
    layer = {frozenset([tuple([0] * v)])}
    for _ in range(k):
        nxt = set()
        for S in layer:
            for w in all_vectors(F.q, v):
                if w not in S:
                    nxt.add(frozenset(vadd(F, x, scale(F, c, w)) for x in S for c in range(F.q)))
        layer = nxt
    return layer


def rank(F: PolyField, rows) -> int:
    rows = [list(r) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, a) for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = F.neg(rows[i][c])
                rows[i] = [F.add(a, F.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def group_closure(gens: list[tuple[int, ...]], n: int, limit: int = 100_000) -> set[tuple[int, ...]]:
    """All elements of the permutation group generated by image tuples."""
    ident = tuple(range(n))
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = tuple(s[i] for i in g)
            if h not in seen:
                seen.add(h)
                if len(seen) > limit:
                    raise RuntimeError("group too large for brute-force closure")
                queue.append(h)
    return seen


def orbit_of(gens: list[tuple[int, ...]], x: int) -> set[int]:
    seen = {x}
    queue = deque([x])
    while queue:
        a = queue.popleft()
        for s in gens:
            b = s[a]
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def common_neighbor_table(point_sets: list[frozenset[int]]) -> dict[tuple[int, int], tuple[bool, int]]:
    """For x < y: (adjacent, |N(x) & N(y) minus {x, y}|) from explicit point sets."""
    out = {}
    n = len(point_sets)
    for x in range(n):
        for y in range(x + 1, n):
            out[x, y] = (y in point_sets[x], len((point_sets[x] & point_sets[y]) - {x, y}))
    return out
