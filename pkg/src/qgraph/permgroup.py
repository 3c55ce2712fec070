"""Permutation groups on point indices: orbits, transversals, Schreier-Sims.

Permutations act on the right, matching the semilinear maps: ``i * (g * h)``
is ``(i * g) * h``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np


class Perm:
    """A permutation of ``range(n)`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images, check: bool = True):
        a = np.asarray(images, dtype=np.int64)
        if check:
            if a.ndim != 1 or not np.array_equal(np.sort(a), np.arange(a.size)):
                raise ValueError("images do not form a permutation")
        a.flags.writeable = False
        self.images = a
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(np.arange(n), check=False)

    @property
    def n(self) -> int:
        return self.images.size

    def one(self) -> Perm:
        return Perm.identity(self.n)

    def __call__(self, i: int) -> int:
        return int(self.images[i])

    def __mul__(self, other: Perm) -> Perm:
        return Perm(other.images[self.images], check=False)

    def inverse(self) -> Perm:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.n)
        return Perm(inv, check=False)

    def __pow__(self, k: int) -> Perm:
        base = self if k >= 0 else self.inverse()
        out = self.one()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.n)))

    def order(self) -> int:
        from math import lcm

        seen = np.zeros(self.n, dtype=bool)
        out = 1
        for i in range(self.n):
            if seen[i]:
                continue
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                length += 1
            out = lcm(out, length)
        return out

    def image_of_set(self, points: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.images[list(points)].tolist()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def __repr__(self) -> str:
        return f"Perm({self.images.tolist()})"


@dataclass
class OrbitData:
    """Orbit of ``base`` with its Schreier tree.

    ``parent[b] = (gen_index, a)`` records that generator ``gen_index`` maps
    ``a`` to ``b``; the base point has no entry.
    """

    base: int
    orbit: list[int]
    parent: dict[int, tuple[int, int]] = field(default_factory=dict)

    def __contains__(self, b: int) -> bool:
        return b == self.base or b in self.parent

    def __len__(self) -> int:
        return len(self.orbit)

    def word(self, b: int) -> list[int]:
        """Generator indices whose product maps the base point to ``b``."""
        if b not in self:
            raise KeyError(f"{b} is not in the orbit of {self.base}")
        w = []
        while b != self.base:
            gi, b = self.parent[b]
            w.append(gi)
        w.reverse()
        return w

    def depth(self, b: int) -> int:
        return len(self.word(b))


def orbit(gens: Sequence[Perm], alpha: int) -> OrbitData:
    """Breadth-first orbit; generators are tried in order, queue is FIFO."""
    od = OrbitData(alpha, [alpha])
    imgs = [g.images for g in gens]
    queue = deque([alpha])
    while queue:
        a = queue.popleft()
        for gi, im in enumerate(imgs):
            b = int(im[a])
            if b not in od:
                od.parent[b] = (gi, a)
                od.orbit.append(b)
                queue.append(b)
    return od


def all_orbits(gens: Sequence[Perm], n: int) -> list[list[int]]:
    """Orbit partition of ``range(n)``; orbits sorted internally and by minimum."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, j in enumerate(g.images.tolist()):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda o: o[0])


def transversal_element(od: OrbitData, gens: Sequence, b: int, identity=None):
    """Group element ``u`` with ``base * u == b``, read off the Schreier tree.

    Works for any generators supporting ``*`` (permutations or semilinear maps).
    """
    w = od.word(b)
    if identity is None:
        identity = gens[0].one()
    u = identity
    for gi in w:
        u = u * gens[gi]
    return u


def schreier_generators(gens: Sequence[Perm], alpha: int) -> list[Perm]:
    """Deduplicated non-identity Schreier generators of the stabilizer of ``alpha``."""
    od = orbit(gens, alpha)
    n = gens[0].n
    trans = {alpha: Perm.identity(n)}
    for b in od.orbit[1:]:
        gi, a = od.parent[b]
        trans[b] = trans[a] * gens[gi]
    out: dict[Perm, None] = {}
    for b in od.orbit:
        for g in gens:
            bg = int(g.images[b])
            h = trans[b] * g * trans[bg].inverse()
            if not h.is_identity():
                out.setdefault(h, None)
    return list(out)


# Schreier-Sims --------------------------------------------------------------

class _Level:
    __slots__ = ("base", "gens", "trans", "trans_inv", "order", "checked")

    def __init__(self, base: int, n: int):
        self.base = base
        self.gens: list[np.ndarray] = []
        ident = np.arange(n)
        self.trans = {base: ident}
        self.trans_inv = {base: ident}
        self.order = [base]
        self.checked: set[tuple[int, int]] = set()

    def add_gen(self, g: np.ndarray) -> None:
        self.gens.append(g)
        self._close()

    def _close(self) -> None:
        queue = deque(self.order)
        while queue:
            a = queue.popleft()
            ua = self.trans[a]
            for g in self.gens:
                b = int(g[a])
                if b not in self.trans:
                    ub = g[ua]
                    inv = np.empty_like(ub)
                    inv[ub] = np.arange(ub.size)
                    self.trans[b] = ub
                    self.trans_inv[b] = inv
                    self.order.append(b)
                    queue.append(b)


class StabChain:
    """Base and strong generating set built by deterministic Schreier-Sims.

    Transversal elements are stored explicitly; level ``i`` generators are the
    strong generators fixing the first ``i`` base points.
    """

    def __init__(self, n: int, base: Sequence[int] = ()):
        self.n = n
        self.levels: list[_Level] = [_Level(b, n) for b in base]

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.order)
        return out

    def orbit_sizes(self) -> list[int]:
        return [len(lv.order) for lv in self.levels]

    def strong_generators(self, level: int = 0) -> list[Perm]:
        seen: dict[bytes, np.ndarray] = {}
        for lv in self.levels[level:]:
            for g in lv.gens:
                seen.setdefault(g.tobytes(), g)
        return [Perm(g, check=False) for g in seen.values()]

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        """Strip ``g`` through the levels from ``start``; return residue and the level reached."""
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            b = int(g[lv.base])
            inv = lv.trans_inv.get(b)
            if inv is None:
                return g, i
            g = inv[g]
        return g, len(self.levels)

    def contains(self, p: Perm) -> bool:
        g, i = self.sift(p.images)
        return i == len(self.levels) and np.array_equal(g, np.arange(self.n))

    def add_generator(self, p: Perm) -> bool:
        """Extend the group by ``p``; return False if ``p`` was already a member."""
        res, j = self.sift(p.images)
        if j == len(self.levels) and np.array_equal(res, np.arange(self.n)):
            return False
        self._insert(res, j)
        self._complete()
        return True

    def _insert(self, g: np.ndarray, upto: int) -> None:
        """Add ``g`` as a strong generator at levels ``0..upto``, extending the base if needed."""
        if upto >= len(self.levels):
            fixed = set(self.base)
            moved = np.flatnonzero(g != np.arange(self.n))
            b = next(int(x) for x in moved if int(x) not in fixed)
            self.levels.append(_Level(b, self.n))
            upto = len(self.levels) - 1
        for lv in self.levels[: upto + 1]:
            lv.add_gen(g)

    def _complete(self) -> None:
        ident = np.arange(self.n)
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restarted = False
            for a in list(lv.order):
                ua = lv.trans[a]
                for gi, g in enumerate(lv.gens):
                    key = (a, gi)
                    if key in lv.checked:
                        continue
                    b = int(g[a])
                    h = lv.trans_inv[b][g[ua]]
                    res, j = self.sift(h, i + 1)
                    if j == len(self.levels) and np.array_equal(res, ident):
                        lv.checked.add(key)
                        continue
                    self._insert(res, j)
                    i = min(j, len(self.levels) - 1)
                    restarted = True
                    break
                if restarted:
                    break
            if not restarted:
                i -= 1


def schreier_sims(gens: Sequence[Perm], n: int | None = None, base: Sequence[int] = ()) -> StabChain:
    """Stabilizer chain of ``<gens>``; ``base`` fixes a prefix of the base."""
    if n is None:
        n = gens[0].n
    chain = StabChain(n, base)
    for g in gens:
        chain.add_generator(g)
    return chain


def group_order(gens: Sequence[Perm], n: int | None = None) -> int:
    if not gens:
        return 1
    return schreier_sims(gens, n).order()


def stabilizer_gens(gens: Sequence[Perm], alpha: int) -> list[Perm]:
    """Generators of the point stabilizer, pruned by sifting.

    Schreier generators are added one at a time to a growing stabilizer chain
    and kept only when they enlarge the group.
    """
    if not gens:
        return []
    n = gens[0].n
    chain = StabChain(n)
    kept = []
    for h in schreier_generators(gens, alpha):
        if chain.add_generator(h):
            kept.append(h)
    return kept


def set_orbit(gens: Sequence[Perm], S: Iterable[int]) -> list[tuple[int, ...]]:
    """Orbit of the point set ``S`` under the induced action on sets (BFS order)."""
    start = tuple(sorted(S))
    seen = {start}
    out = [start]
    queue = deque([start])
    imgs = [g.images for g in gens]
    while queue:
        s = queue.popleft()
        arr = np.fromiter(s, dtype=np.int64, count=len(s))
        for im in imgs:
            t = tuple(sorted(im[arr].tolist()))
            if t not in seen:
                seen.add(t)
                out.append(t)
                queue.append(t)
    return out


def setwise_stabilizer_order(gens: Sequence[Perm], S: Iterable[int], order: int | None = None) -> int:
    """``|G_S| = |G| / |S^G|``."""
    if order is None:
        order = group_order(gens)
    size = len(set_orbit(gens, S))
    assert order % size == 0
    return order // size


def is_transitive(gens: Sequence[Perm], n: int) -> bool:
    if n <= 1:
        return True
    return len(orbit(gens, 0)) == n
