"""Zorn-matrix model of the Cayley (octonion) algebra over a finite ring.

Elements are (alpha, v, w, beta) with scalars on the diagonal and
3-vectors off it; the product is

    (a1, v1, w1, b1)(a2, v2, w2, b2) =
        (a1 a2 + v1.w2,
         a1 v2 + b2 v1 - w1 x w2,
         a2 w1 + b1 w2 + v1 x v2,
         w1.v2 + b1 b2)

with the usual dot and cross products.  The algebra is alternative but not
associative; its invertible elements form a Moufang loop.  Invertibility is
decided by the quadratic norm n(A) = alpha beta - v.w with conjugate
inverse; the test suite validates that criterion against a brute-force
two-sided inverse search before it is trusted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loops import Report
from .mab import MabLoop, MabParamsError
from .rings import NotAUnit, Ring, RingError, RingElement
from .sampling import CHUNK, CheckStrategy, SplitMix64


@dataclass(frozen=True)
class ZornMatrix:
    ring: Ring
    alpha: int
    v: tuple
    w: tuple
    beta: int

    def _join(self, other):
        if not isinstance(other, ZornMatrix) or other.ring != self.ring:
            raise RingError("mixed rings")
        return other

    def __mul__(self, other):
        other = self._join(other)
        cols = _mul_cols(self.ring, _cols_of(self), _cols_of(other))
        return _from_cols(self.ring, cols)

    def __add__(self, other):
        other = self._join(other)
        A = self.ring.add_table
        return ZornMatrix(self.ring, int(A[self.alpha, other.alpha]),
                          tuple(int(A[a, b]) for a, b in zip(self.v, other.v)),
                          tuple(int(A[a, b]) for a, b in zip(self.w, other.w)),
                          int(A[self.beta, other.beta]))

    def conjugate(self) -> "ZornMatrix":
        NEG = self.ring.neg_table
        return ZornMatrix(self.ring, self.beta, tuple(int(NEG[c]) for c in self.v),
                          tuple(int(NEG[c]) for c in self.w), self.alpha)

    def norm(self) -> RingElement:
        A, M, NEG = self.ring.add_table, self.ring.mul_table, self.ring.neg_table
        dot = 0
        for a, b in zip(self.v, self.w):
            dot = A[dot, M[a, b]]
        return self.ring.element(int(A[M[self.alpha, self.beta], NEG[dot]]))

    @property
    def is_invertible(self) -> bool:
        return self.norm().is_unit

    def inverse(self) -> "ZornMatrix":
        n = self.norm()
        if not n.is_unit:
            raise NotAUnit(f"norm {n.code} is not a unit; element not invertible")
        ninv = n.inverse().code
        M = self.ring.mul_table
        c = self.conjugate()
        return ZornMatrix(self.ring, int(M[ninv, c.alpha]),
                          tuple(int(M[ninv, x]) for x in c.v),
                          tuple(int(M[ninv, x]) for x in c.w),
                          int(M[ninv, c.beta]))

    def __str__(self):
        fmt = lambda t: "[" + ",".join(str(c) for c in t) + "]"
        return f"({self.alpha},{fmt(self.v)},{fmt(self.w)},{self.beta})"


def zorn_identity(ring: Ring) -> ZornMatrix:
    one = 1 % ring.size
    return ZornMatrix(ring, one, (0, 0, 0), (0, 0, 0), one)


def zorn(ring: Ring, alpha, v, w, beta) -> ZornMatrix:
    lit = ring.from_literal
    return ZornMatrix(ring, lit(alpha).code, tuple(lit(c).code for c in v),
                      tuple(lit(c).code for c in w), lit(beta).code)


# -- column representation for vectorised sweeps -----------------------------
# order: (alpha, v0, v1, v2, w0, w1, w2, beta)


def _cols_of(z: ZornMatrix):
    return tuple(np.asarray(c) for c in (z.alpha, *z.v, *z.w, z.beta))


def _from_cols(ring, cols, i=None):
    pick = (lambda c: int(c)) if i is None else (lambda c: int(np.asarray(c).ravel()[i]))
    vals = [pick(c) for c in cols]
    return ZornMatrix(ring, vals[0], tuple(vals[1:4]), tuple(vals[4:7]), vals[7])


def _dot(ring, u, v):
    A, M = ring.add_table, ring.mul_table
    return A[A[M[u[0], v[0]], M[u[1], v[1]]], M[u[2], v[2]]]


def _cross(ring, u, v):
    A, M, NEG = ring.add_table, ring.mul_table, ring.neg_table
    return (A[M[u[1], v[2]], NEG[M[u[2], v[1]]]],
            A[M[u[2], v[0]], NEG[M[u[0], v[2]]]],
            A[M[u[0], v[1]], NEG[M[u[1], v[0]]]])


def _mul_cols(ring, p, q):
    A, M, NEG = ring.add_table, ring.mul_table, ring.neg_table
    a1, b1 = p[0], p[7]
    a2, b2 = q[0], q[7]
    v1, w1 = p[1:4], p[4:7]
    v2, w2 = q[1:4], q[4:7]
    alpha = A[M[a1, a2], _dot(ring, v1, w2)]
    beta = A[_dot(ring, w1, v2), M[b1, b2]]
    ww = _cross(ring, w1, w2)
    vv = _cross(ring, v1, v2)
    v = tuple(A[A[M[a1, v2[i]], M[b2, v1[i]]], NEG[ww[i]]] for i in range(3))
    w = tuple(A[A[M[a2, w1[i]], M[b1, w2[i]]], vv[i]] for i in range(3))
    return (alpha, *v, *w, beta)


def _norm_cols(ring, p):
    A, M, NEG = ring.add_table, ring.mul_table, ring.neg_table
    return A[M[p[0], p[7]], NEG[_dot(ring, p[1:4], p[4:7])]]


def _enumerate_cols(ring, idx):
    S = ring.size
    idx = np.asarray(idx, dtype=np.int64)
    cols = []
    t = idx
    for _ in range(8):
        cols.append(t % S)
        t = t // S
    return tuple(cols)


def octonion_count(ring: Ring) -> int:
    return ring.size ** 8


# ---------------------------------------------------------------------------
# checks


def verify_alternative(ring: Ring, strategy: CheckStrategy) -> Report:
    """(AA)B = A(AB) and (BA)A = B(AA) over pairs; Moufang on invertible triples."""
    name = "alternative"
    total = octonion_count(ring)
    if strategy.mode == "exhaustive":
        idx = np.arange(total, dtype=np.int64)
        a = _enumerate_cols(ring, idx[:, None].repeat(total, 1).ravel())
        b = _enumerate_cols(ring, idx[None, :].repeat(total, 0).ravel())
        checked = total * total
        bad = _alternative_defect(ring, a, b)
        if bad.size:
            i = int(bad[0])
            return Report(name, False, checked,
                          {"A": str(_from_cols(ring, a, i)), "B": str(_from_cols(ring, b, i))})
    else:
        rng = strategy.rng()
        checked = 0
        while checked < strategy.samples:
            cnt = min(CHUNK, strategy.samples - checked)
            a = _enumerate_cols(ring, rng.batch_below(cnt, total))
            b = _enumerate_cols(ring, rng.batch_below(cnt, total))
            bad = _alternative_defect(ring, a, b)
            if bad.size:
                i = int(bad[0])
                return Report(name, False, checked + i + 1,
                              {"A": str(_from_cols(ring, a, i)), "B": str(_from_cols(ring, b, i))})
            checked += cnt
    # Moufang identity on invertible triples (seeded, fixed budget)
    rng = SplitMix64(strategy.seed if strategy.mode == "random" else 0)
    want = 2000
    pool = np.empty(0, dtype=np.int64)
    while pool.size < 3 * want:
        idx = rng.batch_below(CHUNK, total)
        unit = ring.inv_table[_norm_cols(ring, _enumerate_cols(ring, idx))] >= 0
        pool = np.concatenate([pool, idx[unit]])
    pool = pool[: 3 * want]
    x = _enumerate_cols(ring, pool[0::3])
    y = _enumerate_cols(ring, pool[1::3])
    z = _enumerate_cols(ring, pool[2::3])
    lhs = _mul_cols(ring, _mul_cols(ring, x, y), _mul_cols(ring, z, x))
    rhs = _mul_cols(ring, _mul_cols(ring, x, _mul_cols(ring, y, z)), x)
    for l, r in zip(lhs, rhs):
        if (np.asarray(l) != np.asarray(r)).any():
            return Report(name, False, checked, {"kind": "moufang-on-units"})
    return Report(name, True, checked, data={"moufang_triples": want})


def _alternative_defect(ring, a, b):
    aa = _mul_cols(ring, a, a)
    ab = _mul_cols(ring, a, b)
    lhs1 = _mul_cols(ring, aa, b)
    rhs1 = _mul_cols(ring, a, ab)
    ba = _mul_cols(ring, b, a)
    lhs2 = _mul_cols(ring, ba, a)
    rhs2 = _mul_cols(ring, b, aa)
    bad = np.zeros(np.asarray(a[0]).shape, dtype=bool)
    for l, r in zip(lhs1 + lhs2, rhs1 + rhs2):
        bad |= (np.asarray(l) != np.asarray(r))
    return np.flatnonzero(bad)


def find_nonassociative_triple(ring: Ring, budget: int = 200_000):
    """A triple with (AB)C != A(BC); scans deterministically, None if not found."""
    total = octonion_count(ring)
    rng = SplitMix64(99)
    scanned = 0
    while scanned < budget:
        cnt = min(CHUNK, budget - scanned)
        a = _enumerate_cols(ring, rng.batch_below(cnt, total))
        b = _enumerate_cols(ring, rng.batch_below(cnt, total))
        c = _enumerate_cols(ring, rng.batch_below(cnt, total))
        lhs = _mul_cols(ring, _mul_cols(ring, a, b), c)
        rhs = _mul_cols(ring, a, _mul_cols(ring, b, c))
        bad = np.zeros(cnt, dtype=bool)
        for l, r in zip(lhs, rhs):
            bad |= (np.asarray(l) != np.asarray(r))
        hits = np.flatnonzero(bad)
        if hits.size:
            i = int(hits[0])
            return (_from_cols(ring, a, i), _from_cols(ring, b, i), _from_cols(ring, c, i))
        scanned += cnt
    return None


def verify_norm_criterion(ring: Ring) -> Report:
    """Exhaustive: norm-is-unit iff a two-sided inverse exists (brute force)."""
    total = octonion_count(ring)
    idx = np.arange(total, dtype=np.int64)
    cols = _enumerate_cols(ring, idx)
    norm_unit = ring.inv_table[_norm_cols(ring, cols)] >= 0
    has_inverse = np.zeros(total, dtype=bool)
    ident = zorn_identity(ring)
    id_cols = _cols_of(ident)
    for j in range(total):
        bj = _enumerate_cols(ring, np.full(total, j, dtype=np.int64))
        left = _mul_cols(ring, cols, bj)
        right = _mul_cols(ring, bj, cols)
        two_sided = np.ones(total, dtype=bool)
        for l, r, e in zip(left, right, id_cols):
            two_sided &= (np.asarray(l) == int(e)) & (np.asarray(r) == int(e))
        has_inverse |= two_sided
    agree = norm_unit == has_inverse
    ok = bool(agree.all())
    witness = None
    if not ok:
        i = int(np.flatnonzero(~agree)[0])
        witness = {"A": str(_from_cols(ring, cols, i))}
    return Report("norm-criterion", ok, total, witness,
                  {"invertible": int(norm_unit.sum())})


# ---------------------------------------------------------------------------
# embedding of the b = 0, a = 1 loops


def embed_m10(p) -> ZornMatrix:
    """(r, x, y, z) as the Zorn matrix with rows (r, (0,x,y)) and ((z,0,0), 1)."""
    loop = p.loop
    _require_m10(loop)
    ring = loop.params.ring
    one = 1 % ring.size
    return ZornMatrix(ring, p.r.code, (0, p.x.code, p.y.code), (p.z.code, 0, 0), one)


def _require_m10(loop: MabLoop):
    ring = loop.params.ring
    if loop.params.a != ring.one or not loop.params.b.is_zero:
        raise MabParamsError("the Zorn embedding applies to parameters (1, 0) only")


def _embed_cols(loop: MabLoop, idx):
    ring = loop.params.ring
    S = ring.size
    ri, x, y, z = loop.coords_of(np.asarray(idx))
    r = loop.params.r0.codes.astype(np.int64)[ri]
    zero = np.zeros(r.shape, dtype=np.int64)
    one = np.full(r.shape, 1 % S, dtype=np.int64)
    return (r, zero, np.asarray(x), np.asarray(y), np.asarray(z), zero, zero, one)


def verify_embedding(loop: MabLoop, strategy: CheckStrategy | None = None) -> Report:
    """embed(p) embed(q) = embed(pq), images invertible, map injective."""
    _require_m10(loop)
    ring = loop.params.ring
    n = loop.order
    if strategy is None:
        strategy = (CheckStrategy("exhaustive") if n * n <= 250_000
                    else CheckStrategy("random", 100_000, 0))
    if strategy.mode == "exhaustive":
        ar = np.arange(n, dtype=np.int64)
        I = ar[:, None].repeat(n, 1).ravel()
        J = ar[None, :].repeat(n, 0).ravel()
        checked = n * n
    else:
        rng = strategy.rng()
        I = rng.batch_below(strategy.samples, n)
        J = rng.batch_below(strategy.samples, n)
        checked = strategy.samples
    pa = _embed_cols(loop, I)
    pb = _embed_cols(loop, J)
    got = _mul_cols(ring, pa, pb)
    want = _embed_cols(loop, loop.mul_arrays(I, J))
    bad = np.zeros(np.asarray(I).shape, dtype=bool)
    for g, w in zip(got, want):
        bad |= (np.asarray(g) != np.asarray(w))
    hits = np.flatnonzero(bad)
    if hits.size:
        i = int(hits[0])
        return Report("zorn-embedding", False, checked,
                      {"p": loop.label(int(I[i])), "q": loop.label(int(J[i]))})
    # every image invertible: the norm is r, a unit by construction
    all_cols = _embed_cols(loop, np.arange(n, dtype=np.int64))
    norms = _norm_cols(ring, all_cols)
    invertible = bool((ring.inv_table[norms] >= 0).all())
    # injectivity: images differ pairwise since (r,x,y,z) is read off the entries
    packed = np.zeros(n, dtype=np.int64)
    for c in all_cols:
        packed = packed * ring.size + np.asarray(c)
    injective = int(np.unique(packed).size) == n
    ok = invertible and injective
    return Report("zorn-embedding", ok, checked,
                  None if ok else {"kind": "invertibility" if not invertible else "injectivity"},
                  {"images_invertible": invertible, "injective": injective})
