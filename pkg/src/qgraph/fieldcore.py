"""Exact arithmetic in small finite fields GF(p^e).

Elements are integers in ``[0, q)``.  The base-``p`` digits of an element are
the coefficients of a polynomial in ``x`` (constant term in the lowest digit),
reduced modulo a fixed Conway polynomial.  Every field is built once and
cached, together with dense lookup tables used by the linear algebra layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_FIELD_SIZE = 1 << 16
DENSE_TABLE_LIMIT = 1024

# Conway polynomials, coefficients lowest degree first (monic).
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 15): (1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (3, 7): (1, 0, 2, 0, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (5, 5): (3, 4, 0, 0, 0, 1),
    (5, 6): (2, 0, 1, 4, 1, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (11, 4): (2, 10, 8, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
    (13, 4): (2, 12, 3, 0, 1),
}


class FieldError(ValueError):
    """Raised for unsupported fields and invalid field operations."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, e)`` with ``q == p**e``; raise if not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^e) with its canonical modulus.

    Scalar helpers (``add``, ``mul``, ...) work on plain ints; the ``v*``
    helpers are their numpy-vectorized counterparts.
    """

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]
    exp: np.ndarray = field(repr=False, compare=False, hash=False)
    log: np.ndarray = field(repr=False, compare=False, hash=False)

    def __str__(self) -> str:
        return f"GF({self.q})"

    @property
    def primitive_element(self) -> int:
        return int(self.exp[1]) if self.q > 2 else 1

    # tables -----------------------------------------------------------
    @property
    def neg_table(self) -> np.ndarray:
        return _tables(self)["neg"]

    @property
    def inv_table(self) -> np.ndarray:
        return _tables(self)["inv"]

    @property
    def add_table(self) -> np.ndarray | None:
        return _tables(self)["add"]

    @property
    def mul_table(self) -> np.ndarray | None:
        return _tables(self)["mul"]

    def frob_table(self, i: int) -> np.ndarray:
        return _tables(self)["frob"][i % self.e]

    # scalar arithmetic ------------------------------------------------
    def _check(self, *xs: int) -> None:
        for a in xs:
            if not 0 <= a < self.q:
                raise FieldError(f"{a} is not an element of {self}")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.vadd(np.int64(a), np.int64(b)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        self._check(a)
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.vmul(np.int64(a), np.int64(b)))

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        self._check(a)
        if a == 0:
            if n < 0:
                raise ZeroDivisionError(f"0 has no inverse in {self}")
            return 1 if n == 0 else 0
        return int(self.exp[(int(self.log[a]) * n) % (self.q - 1)])

    def frobenius(self, a: int, i: int = 1) -> int:
        """Return ``a ** (p ** i)`` for ``0 <= i < e``."""
        if not 0 <= i < self.e:
            raise FieldError(f"Frobenius exponent {i} outside [0, {self.e})")
        self._check(a)
        return int(self.frob_table(i)[a])

    def element(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(a, self) for a in range(self.q)]

    # vectorized arithmetic -------------------------------------------
    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.e == 1:
            return (np.asarray(a) + b) % self.p
        t = self.add_table
        if t is not None:
            return t[a, b]
        return _digitwise_add(np.asarray(a), np.asarray(b), self.p, self.e)

    def vsub(self, a, b):
        return self.vadd(a, self.neg_table[b])

    def vmul(self, a, b):
        if self.e == 1 and self.q <= 1 << 31:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        t = self.mul_table
        if t is not None:
            return t[a, b]
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vfrob(self, a, i: int):
        if i % self.e == 0:
            return a
        return self.frob_table(i)[a]

    # polynomial view --------------------------------------------------
    def digits(self, a: int) -> list[int]:
        """Coefficients of ``a`` as a polynomial over GF(p), constant first."""
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def from_digits(self, ds) -> int:
        return sum(int(d) * self.p**i for i, d in enumerate(ds))


def _digitwise_add(a: np.ndarray, b: np.ndarray, p: int, e: int) -> np.ndarray:
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    w = 1
    for _ in range(e):
        out += ((a // w % p + b // w % p) % p) * w
        w *= p
    return out


def _poly_mulx(digits: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    e = len(digits)
    top = digits[-1]
    shifted = [0] + digits[:-1]
    return [(shifted[i] - top * modulus[i]) % p for i in range(e)]


_TABLE_CACHE: dict[tuple[int, int], dict] = {}


def _tables(F: FieldSpec) -> dict:
    key = (F.p, F.e)
    t = _TABLE_CACHE.get(key)
    if t is not None:
        return t
    q, p = F.q, F.p
    elems = np.arange(q, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = F.exp[(-F.log[1:]) % (q - 1)]
    if p == 2:
        neg = elems.copy()
    else:
        neg = np.zeros(q, dtype=np.int64)
        w = 1
        for _ in range(F.e):
            neg += ((-(elems // w % p)) % p) * w
            w *= p
    frob = []
    for i in range(F.e):
        f = np.zeros(q, dtype=np.int64)
        f[1:] = F.exp[(F.log[1:] * p**i) % (q - 1)]
        frob.append(f)
    add = mul = None
    if q <= DENSE_TABLE_LIMIT:
        a, b = np.meshgrid(elems, elems, indexing="ij")
        if p == 2:
            add = a ^ b
        else:
            add = _digitwise_add(a, b, p, F.e)
        mul = F.exp[(F.log[a] + F.log[b]) % (q - 1)]
        mul[(a == 0) | (b == 0)] = 0
        for arr in (add, mul):
            arr.flags.writeable = False
    for arr in (inv, neg, *frob):
        arr.flags.writeable = False
    t = {"inv": inv, "neg": neg, "frob": frob, "add": add, "mul": mul}
    _TABLE_CACHE[key] = t
    return t


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    """Return GF(p^e) with the canonical modulus from the built-in table."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree {e} must be >= 1")
    q = p**e
    if q > MAX_FIELD_SIZE:
        raise FieldError(f"GF({q}) exceeds the supported bound {MAX_FIELD_SIZE}")
    if e == 1:
        modulus = (0, 1)
        g = _primitive_root(p)
        exp = np.ones(q, dtype=np.int64)
        for i in range(1, q - 1):
            exp[i] = exp[i - 1] * g % p
    else:
        try:
            modulus = CONWAY[(p, e)]
        except KeyError:
            raise FieldError(f"no canonical modulus for GF({p}^{e})") from None
        exp = np.zeros(q, dtype=np.int64)
        cur = [1] + [0] * (e - 1)
        for i in range(q - 1):
            exp[i] = sum(c * p**j for j, c in enumerate(cur))
            cur = _poly_mulx(cur, modulus, p)
        exp[q - 1] = exp[0]
    log = np.zeros(q, dtype=np.int64)
    log[exp[: q - 1]] = np.arange(q - 1)
    if q > 2 and len(set(exp[: q - 1].tolist())) != q - 1:
        raise FieldError(f"modulus of GF({q}) is not primitive")
    exp.flags.writeable = False
    log.flags.writeable = False
    return FieldSpec(p, e, q, tuple(modulus), exp, log)


def field_of_order(q: int) -> FieldSpec:
    return make_field(*prime_power(q))


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = _prime_factors(p - 1)
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // f, p) != 1 for f in fs))


@dataclass(frozen=True)
class FieldElement:
    """A field element bound to its field; operators reject mixed fields."""

    value: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise FieldError(f"{self.value} is not an element of {self.field}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field} and {other.field}")
            return other.value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.add(self.value, b), self.field)

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.sub(self.value, b), self.field)

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.mul(self.value, b), self.field)

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field.div(self.value, b), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __pow__(self, n: int):
        return FieldElement(self.field.pow(self.value, n), self.field)

    def inv(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def frobenius(self, i: int = 1) -> FieldElement:
        return FieldElement(self.field.frobenius(self.value, i), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}@{self.field}"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def frobenius(a: FieldElement, i: int) -> FieldElement:
    return a.frobenius(i)
