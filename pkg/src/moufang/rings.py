"""Finite commutative unital rings with exact, table-backed arithmetic.

Two kinds of ring are supported: Z_n (integers modulo n, n >= 2) and
GF(p^k) (polynomial residues modulo a monic irreducible of degree k over
Z_p).  Every element is identified with a canonical integer code in
[0, size): the residue itself for Z_n, and the base-p value of the
little-endian coefficient vector for GF(p^k).

All arithmetic goes through numpy lookup tables built once per ring, so
scalar element code and bulk verification sweeps share one implementation.
Rings here are deliberately small ("desk scale"); construction refuses
carriers too large to tabulate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_RING_SIZE = 2048


class RingError(ValueError):
    """Bad ring construction or ill-typed ring arithmetic."""


class NotAUnit(RingError):
    """A multiplicative inverse was requested for a non-invertible element."""


class NoElementOfOrder(RingError):
    """No unit of the requested multiplicative order exists."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomial helpers over Z_p (little-endian coefficient tuples) --------

def _poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f, d, p):
    """Remainder of f modulo monic d, coefficients in Z_p."""
    f = [c % p for c in f]
    k = len(d) - 1
    for i in range(len(f) - 1, k - 1, -1):
        c = f[i]
        if c:
            f[i] = 0
            for j in range(k):
                f[i - k + j] = (f[i - k + j] - c * d[j]) % p
    return f[:k] + [0] * (k - len(f))


def _poly_mul(u, v, p):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def _is_irreducible(f, p):
    """Brute-force trial division by every monic factor of degree <= deg/2."""
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for code in range(p ** deg):
            d = _digits(code, p, deg) + [1]
            if not any(_poly_mod(f, d, p)):
                return False
    return True


def _digits(code, p, k):
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _smallest_irreducible(p, k):
    """Monic irreducible of degree k with the smallest coefficient encoding.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are scanned in increasing
    order of the base-p value of (c_0, ..., c_{k-1}).
    """
    for code in range(p ** k):
        f = _digits(code, p, k) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RingError(f"no monic irreducible of degree {k} over Z_{p}")  # unreachable for prime p


class Ring:
    """A finite commutative unital ring; see make_ring for construction."""

    def __init__(self, kind, *, n=None, p=None, k=None, poly=None):
        if kind == "Zn":
            if n is None or n < 2:
                raise RingError("Z_n requires n >= 2")
            self.kind, self.size, self.char = "Zn", n, n
            self.p, self.k, self.poly = None, None, None
            self.descriptor = f"Zn:{n}"
        elif kind == "GF":
            if not _is_prime(p):
                raise RingError(f"{p} is not prime")
            if k is None or k < 1:
                raise RingError("GF(p^k) requires k >= 1")
            if poly is None:
                poly = _smallest_irreducible(p, k)
            else:
                poly = tuple(c % p for c in poly)
                if len(poly) != k + 1 or poly[-1] != 1:
                    raise RingError("defining polynomial must be monic of degree k")
                if not _is_irreducible(list(poly), p):
                    raise RingError(f"polynomial {poly} is reducible over Z_{p}")
            self.kind, self.size, self.char = "GF", p ** k, p
            self.p, self.k, self.poly = p, k, poly
            self.descriptor = f"GF:{p}" if k == 1 else f"GF:{p}^{k}"
        else:
            raise RingError(f"unknown ring kind {kind!r}")
        if self.size > MAX_RING_SIZE:
            raise RingError(f"ring size {self.size} exceeds supported maximum {MAX_RING_SIZE}")
        self._key = (self.kind, self.size, self.poly)
        self._build_tables()

    def _build_tables(self):
        n = self.size
        if self.kind == "Zn":
            idx = np.arange(n, dtype=np.int64)
            self.add_table = ((idx[:, None] + idx[None, :]) % n).astype(np.int32)
            self.mul_table = ((idx[:, None] * idx[None, :]) % n).astype(np.int32)
            self.neg_table = ((-idx) % n).astype(np.int32)
        else:
            p, k, mod = self.p, self.k, list(self.poly)
            coeffs = [_digits(c, p, k) for c in range(n)]
            vec = np.array(coeffs, dtype=np.int64)  # (n, k)
            pows = p ** np.arange(k, dtype=np.int64)
            self.add_table = (((vec[:, None, :] + vec[None, :, :]) % p) @ pows).astype(np.int32)
            self.neg_table = (((-vec) % p) @ pows).astype(np.int32)
            mul = np.empty((n, n), dtype=np.int32)
            for i in range(n):
                for j in range(i, n):
                    prod = _poly_mod(_poly_mul(coeffs[i], coeffs[j], p), mod, p)
                    code = sum(c * p ** d for d, c in enumerate(prod))
                    mul[i, j] = code
                    mul[j, i] = code
            self.mul_table = mul
            self._coeffs = [tuple(c) for c in coeffs]
        # brute-force inverse table: inv[i] = j with i*j == 1, else -1
        inv = np.full(n, -1, dtype=np.int32)
        hits = np.argwhere(self.mul_table == 1 % n)
        for i, j in hits:
            inv[i] = j
        self.inv_table = inv
        self.units = np.flatnonzero(inv >= 0).astype(np.int32)

    # -- element access -----------------------------------------------------

    def element(self, code: int) -> "RingElement":
        if not 0 <= code < self.size:
            raise RingError(f"code {code} out of range for {self.descriptor}")
        return RingElement(self, int(code))

    def from_literal(self, lit: int) -> "RingElement":
        """Interpret an integer literal as a ring element.

        Literals in [0, size) are canonical codes.  Anything else (negative
        values in particular) is taken as the image of the integer under
        Z -> R, so -2 always means the ring element -2*1.
        """
        if 0 <= lit < self.size:
            return RingElement(self, int(lit))
        return RingElement(self, int(lit) % self.char)

    @property
    def zero(self) -> "RingElement":
        return RingElement(self, 0)

    @property
    def one(self) -> "RingElement":
        return RingElement(self, 1 % self.size)

    def elements(self):
        return [RingElement(self, c) for c in range(self.size)]

    def coeff_vector(self, code):
        """Little-endian coefficient tuple of a GF(p^k) element."""
        if self.kind != "GF":
            raise RingError("coefficient vectors exist only for GF(p^k)")
        return self._coeffs[code]

    def __eq__(self, other):
        return isinstance(other, Ring) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Ring({self.descriptor})"


@dataclass(frozen=True)
class RingElement:
    ring: Ring
    code: int

    def _join(self, other):
        if not isinstance(other, RingElement):
            raise RingError(f"cannot combine ring element with {type(other).__name__}")
        if other.ring != self.ring:
            raise RingError(f"mixed rings: {self.ring.descriptor} vs {other.ring.descriptor}")
        return other

    def __add__(self, other):
        other = self._join(other)
        return RingElement(self.ring, int(self.ring.add_table[self.code, other.code]))

    def __sub__(self, other):
        other = self._join(other)
        neg = self.ring.neg_table[other.code]
        return RingElement(self.ring, int(self.ring.add_table[self.code, neg]))

    def __mul__(self, other):
        other = self._join(other)
        return RingElement(self.ring, int(self.ring.mul_table[self.code, other.code]))

    def __neg__(self):
        return RingElement(self.ring, int(self.ring.neg_table[self.code]))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.ring.one
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    @property
    def is_unit(self) -> bool:
        return self.ring.inv_table[self.code] >= 0

    def inverse(self) -> "RingElement":
        j = self.ring.inv_table[self.code]
        if j < 0:
            raise NotAUnit(f"{self.code} is not a unit in {self.ring.descriptor}")
        return RingElement(self.ring, int(j))

    @property
    def is_zero(self) -> bool:
        return self.code == 0

    def __str__(self):
        return str(self.code)

    def __repr__(self):
        return f"{self.ring.descriptor}[{self.code}]"


def make_ring(spec: str) -> Ring:
    """Build a ring from a descriptor string.

    Grammar: ``Zn:<n>`` | ``GF:<p>`` | ``GF:<p>^<k>`` |
    ``GF:<p>^<k>:poly=<c0,c1,...,ck>`` (little-endian, c_k = 1).
    """
    parts = spec.strip().split(":")
    if len(parts) < 2:
        raise RingError(f"bad ring spec {spec!r}")
    kind = parts[0]
    if kind == "Zn":
        if len(parts) != 2:
            raise RingError(f"bad ring spec {spec!r}")
        try:
            n = int(parts[1])
        except ValueError:
            raise RingError(f"bad modulus in {spec!r}") from None
        return Ring("Zn", n=n)
    if kind == "GF":
        body = parts[1]
        if "^" in body:
            p_str, k_str = body.split("^", 1)
        else:
            p_str, k_str = body, "1"
        try:
            p, k = int(p_str), int(k_str)
        except ValueError:
            raise RingError(f"bad field spec {spec!r}") from None
        poly = None
        if len(parts) == 3:
            if not parts[2].startswith("poly="):
                raise RingError(f"bad ring spec {spec!r}")
            poly = tuple(int(c) for c in parts[2][5:].split(","))
        elif len(parts) > 3:
            raise RingError(f"bad ring spec {spec!r}")
        return Ring("GF", p=p, k=k, poly=poly)
    raise RingError(f"unknown ring kind {kind!r}")


def multiplicative_order(a: RingElement) -> int:
    if not a.is_unit:
        raise NotAUnit(f"{a.code} is not a unit in {a.ring.descriptor}")
    acc, order = a, 1
    one = a.ring.one
    while acc != one:
        acc = acc * a
        order += 1
    return order


def element_of_order(ring: Ring, k: int) -> RingElement:
    """First unit (in encoding order) of multiplicative order exactly k."""
    if k < 1:
        raise RingError("order must be >= 1")
    for code in range(ring.size):
        if ring.inv_table[code] < 0:
            continue
        a = ring.element(code)
        if multiplicative_order(a) == k:
            return a
    raise NoElementOfOrder(f"{ring.descriptor} has no unit of order {k}")


class UnitSubgroup:
    """Cyclic subgroup of the unit group, stored as consecutive generator powers."""

    def __init__(self, generator: RingElement):
        if not generator.is_unit:
            raise NotAUnit(f"{generator.code} is not a unit in {generator.ring.descriptor}")
        self.ring = generator.ring
        self.generator = generator
        elems = [self.ring.one]
        acc = generator
        while acc != self.ring.one:
            elems.append(acc)
            acc = acc * generator
        self.elements = tuple(elems)
        self.order = len(elems)
        self.codes = np.array([e.code for e in elems], dtype=np.int32)
        self._index = {e.code: i for i, e in enumerate(elems)}

    def index_of(self, code: int) -> int:
        try:
            return self._index[code]
        except KeyError:
            raise RingError(f"code {code} is not in the subgroup") from None

    def __contains__(self, elem):
        code = elem.code if isinstance(elem, RingElement) else elem
        return code in self._index

    @property
    def has_exponent_3(self) -> bool:
        """Whether every element cubes to the identity (cyclic: order divides 3)."""
        return self.order in (1, 3)

    def __eq__(self, other):
        return (isinstance(other, UnitSubgroup) and other.ring == self.ring
                and other.generator.code == self.generator.code)

    def __hash__(self):
        return hash((self.ring, self.generator.code))

    def __repr__(self):
        return f"UnitSubgroup(gen={self.generator.code}, order={self.order}, ring={self.ring.descriptor})"


def cyclic_subgroup(generator: RingElement) -> UnitSubgroup:
    return UnitSubgroup(generator)
