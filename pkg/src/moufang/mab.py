"""The loops M_{a,b} over a finite ring.

Carrier: tuples (r, x, y, z) with r in a cyclic unit subgroup R_0 and
x, y, z in the ring R.  Closed-form multiplication

    (r1,x1,y1,z1)(r2,x2,y2,z2)
        = (r1 r2, x1 + r1 x2, y1 + r1 y2,
           r2 z1 + z2 + a(x1 y2 - x2 y1) + b r1^{-1} r2 x1 y2)

and inversion (r,x,y,z)^{-1} = (r^{-1}, -r^{-1}x, -r^{-1}y, -r^{-1}z + bxy).
Parameters must satisfy one of the two regimes under which the construction
is proven to give a Moufang loop: R_0 has exponent 3, or b = 0; and at
least one of a, b must be invertible.  Constructing outside that regime is
possible only with checked=False, and reports are then flagged.

The z-coordinate specialisation with (a, b) = (1, -2),

    r2 z1 + z2 + (1 - 2 r1^{-1} r2) x1 y2 - x2 y1,

is available separately (eq1_mul) as an independent expression; it must
agree with the general formula wherever both apply.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import loops
from .loops import FiniteLoop, Report
from .rings import Ring, RingElement, RingError, UnitSubgroup
from .sampling import CHUNK, EXHAUSTIVE, CheckStrategy, SplitMix64


class MabParamsError(ValueError):
    """Parameters outside the supported construction regime."""


@dataclass(frozen=True)
class MabParams:
    ring: Ring
    r0: UnitSubgroup
    a: RingElement
    b: RingElement
    checked: bool = True

    def __post_init__(self):
        if self.r0.ring != self.ring:
            raise MabParamsError("R_0 must be a subgroup of the ring's units")
        if self.a.ring != self.ring or self.b.ring != self.ring:
            raise MabParamsError("a, b must live in the ring")
        if self.checked:
            if not (self.condition_exponent3 or self.condition_b_zero):
                raise MabParamsError(
                    "need R_0 of exponent 3 or b = 0 (use checked=False to explore)")
            if not (self.a.is_unit or self.b.is_unit):
                raise MabParamsError(
                    "at least one of a, b must be invertible (use checked=False to explore)")

    @property
    def condition_exponent3(self) -> bool:
        return self.r0.has_exponent_3

    @property
    def condition_b_zero(self) -> bool:
        return self.b.is_zero

    @property
    def degenerate(self) -> bool:
        """Trivial R_0 collapses the loop to the group N itself."""
        return self.r0.order == 1

    def describe(self) -> str:
        return (f"M(a={self.a.code},b={self.b.code}) over {self.ring.descriptor}, "
                f"|R0|={self.r0.order}")


@dataclass(frozen=True)
class MabElem:
    loop: "MabLoop"
    r: RingElement
    x: RingElement
    y: RingElement
    z: RingElement

    def __mul__(self, other):
        return self.loop.mab_mul(self, other)

    def inverse(self):
        return self.loop.mab_inv(self)

    @property
    def index(self) -> int:
        return self.loop.index_of(self.loop.params.r0.index_of(self.r.code),
                                  self.x.code, self.y.code, self.z.code)

    def coords(self):
        return (self.r.code, self.x.code, self.y.code, self.z.code)

    def __str__(self):
        return f"({self.r.code},{self.x.code},{self.y.code},{self.z.code})"


class MabLoop(FiniteLoop):
    """FiniteLoop over the M_{a,b} carrier with vectorised coordinate arithmetic.

    Element indices enumerate (r-index, x, y, z) in mixed radix, r varying
    slowest; r is indexed by its exponent in R_0 = <g>, so the r-part of a
    product is plain index addition mod |R_0|.
    """

    def __init__(self, params: MabParams):
        self.params = params
        ring = params.ring
        S = ring.size
        order = params.r0.order * S ** 3
        super().__init__(order, 0, params.describe())
        self._S = S
        self._m = params.r0.order
        self._r0c = params.r0.codes.astype(np.int64)
        self._ac = params.a.code
        self._bc = params.b.code

    # -- index <-> coordinates (r given by its R_0 exponent) ---------------

    def coords_of(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        S = self._S
        z = idx % S
        t = idx // S
        y = t % S
        t = t // S
        x = t % S
        ri = t // S
        return ri, x, y, z

    def index_of(self, ri, x, y, z):
        S = np.int64(self._S)
        return ((np.asarray(ri, dtype=np.int64) * S + x) * S + y) * S + z

    # -- raw coordinate arithmetic (works on scalars and arrays) ------------

    def mul_coords(self, ri1, x1, y1, z1, ri2, x2, y2, z2):
        A = self.params.ring.add_table
        M = self.params.ring.mul_table
        NEG = self.params.ring.neg_table
        rc1 = self._r0c[ri1]
        rc2 = self._r0c[ri2]
        rinv1 = self._r0c[(-np.asarray(ri1)) % self._m]
        ri = (np.asarray(ri1) + ri2) % self._m
        x = A[x1, M[rc1, x2]]
        y = A[y1, M[rc1, y2]]
        cross = A[M[x1, y2], NEG[M[x2, y1]]]
        zc = A[A[M[rc2, z1], z2],
               A[M[self._ac, cross], M[M[self._bc, M[rinv1, rc2]], M[x1, y2]]]]
        return ri, x, y, zc

    def inv_coords(self, ri, x, y, z):
        A = self.params.ring.add_table
        M = self.params.ring.mul_table
        NEG = self.params.ring.neg_table
        rii = (-np.asarray(ri)) % self._m
        nrinv = NEG[self._r0c[rii]]
        return (rii, M[nrinv, x], M[nrinv, y],
                A[M[nrinv, z], M[self._bc, M[x, y]]])

    def mul_arrays(self, i, j):
        if self._table is not None:
            return self._table[np.asarray(i), np.asarray(j)]
        i, j = np.broadcast_arrays(np.asarray(i), np.asarray(j))
        c1 = self.coords_of(i)
        c2 = self.coords_of(j)
        return self.index_of(*self.mul_coords(*c1, *c2))

    def inv_arrays(self, i):
        return self.index_of(*self.inv_coords(*self.coords_of(np.asarray(i))))

    def inverse_index(self, i):
        return int(self.inv_arrays(i))

    def label(self, i):
        ri, x, y, z = (int(v) for v in self.coords_of(i))
        return f"({int(self._r0c[ri])},{x},{y},{z})"

    # -- element-level API ---------------------------------------------------

    def element(self, r, x, y, z) -> MabElem:
        ring = self.params.ring
        vals = []
        for v in (r, x, y, z):
            vals.append(v if isinstance(v, RingElement) else ring.from_literal(v))
        r, x, y, z = vals
        if r.code not in self.params.r0:
            raise RingError(f"r = {r.code} is not in R_0")
        return MabElem(self, r, x, y, z)

    def elem(self, idx) -> MabElem:
        ri, x, y, z = (int(v) for v in self.coords_of(idx))
        ring = self.params.ring
        return MabElem(self, self.params.r0.elements[ri], ring.element(x),
                       ring.element(y), ring.element(z))

    @property
    def identity_elem(self) -> MabElem:
        ring = self.params.ring
        return MabElem(self, ring.one, ring.zero, ring.zero, ring.zero)

    def _check_member(self, p: MabElem):
        if p.loop is not self:
            raise MabParamsError("elements belong to different loops")

    def mab_mul(self, p: MabElem, q: MabElem) -> MabElem:
        self._check_member(p)
        self._check_member(q)
        a, b = self.params.a, self.params.b
        r = p.r * q.r
        x = p.x + p.r * q.x
        y = p.y + p.r * q.y
        z = (q.r * p.z + q.z + a * (p.x * q.y - q.x * p.y)
             + b * p.r.inverse() * q.r * p.x * q.y)
        return MabElem(self, r, x, y, z)

    def mab_inv(self, p: MabElem) -> MabElem:
        self._check_member(p)
        ri = p.r.inverse()
        return MabElem(self, ri, -(ri * p.x), -(ri * p.y),
                       -(ri * p.z) + self.params.b * p.x * p.y)

    def eq1_mul(self, p: MabElem, q: MabElem) -> MabElem:
        """Direct evaluation of the (a, b) = (1, -2) specialisation."""
        ring = self.params.ring
        minus2 = -(ring.one + ring.one)
        if self.params.a != ring.one or self.params.b != minus2:
            raise MabParamsError("eq1_mul applies only to parameters (1, -2)")
        self._check_member(p)
        self._check_member(q)
        one = ring.one
        r = p.r * q.r
        x = p.x + p.r * q.x
        y = p.y + p.r * q.y
        z = (q.r * p.z + q.z
             + (one - (one + one) * p.r.inverse() * q.r) * p.x * q.y - q.x * p.y)
        return MabElem(self, r, x, y, z)

    # -- associator determinant ----------------------------------------------

    def associator_det(self, p1: MabElem, p2: MabElem, p3: MabElem) -> RingElement:
        """a * det[[r_i - 1], [x_i], [y_i]]; zero iff the triple associates."""
        for p in (p1, p2, p3):
            self._check_member(p)
        one = self.params.ring.one
        c = [(p.r - one, p.x, p.y) for p in (p1, p2, p3)]
        det = (c[0][0] * (c[1][1] * c[2][2] - c[2][1] * c[1][2])
               - c[1][0] * (c[0][1] * c[2][2] - c[2][1] * c[0][2])
               + c[2][0] * (c[0][1] * c[1][2] - c[1][1] * c[0][2]))
        return self.params.a * det

    def associator_det_codes(self, i, j, k):
        """Vectorised associator determinant for index arrays; returns codes."""
        A = self.params.ring.add_table
        M = self.params.ring.mul_table
        NEG = self.params.ring.neg_table
        one = 1 % self._S

        def unpack(idx):
            ri, x, y, _ = self.coords_of(np.asarray(idx))
            return A[self._r0c[ri], NEG[one]], x, y

        r1, x1, y1 = unpack(i)
        r2, x2, y2 = unpack(j)
        r3, x3, y3 = unpack(k)
        m1 = A[M[x2, y3], NEG[M[x3, y2]]]
        m2 = A[M[x1, y3], NEG[M[x3, y1]]]
        m3 = A[M[x1, y2], NEG[M[x2, y1]]]
        det = A[A[M[r1, m1], NEG[M[r2, m2]]], M[r3, m3]]
        return M[self._ac, det]

    # -- structure reports ---------------------------------------------------

    def n_indices(self) -> np.ndarray:
        """Indices of N = {(1, x, y, z)} (the r = 1 slice, contiguous)."""
        return np.arange(self._S ** 3, dtype=np.int64)

    def n_commutative_sweep(self, strategy: CheckStrategy | None = None):
        """(holds, witness, mode): commutativity of N by pair sweep."""
        Nn = self._S ** 3
        if strategy is None or strategy.mode == "exhaustive":
            if Nn * Nn > 20_000_000 and strategy is None:
                strategy = CheckStrategy("random", 100_000, 0)
            else:
                N = self.n_indices()
                P = np.asarray(self.mul_arrays(N[:, None], N[None, :]))
                bad = np.argwhere(P != P.T)
                if bad.size:
                    i, j = map(int, bad[0])
                    return False, {"p": self.label(i), "q": self.label(j)}, "exhaustive"
                return True, None, "exhaustive"
        rng = strategy.rng()
        i = rng.batch_below(strategy.samples, Nn)
        j = rng.batch_below(strategy.samples, Nn)
        lhs = np.asarray(self.mul_arrays(i, j))
        rhs = np.asarray(self.mul_arrays(j, i))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            b = int(bad[0])
            return False, {"p": self.label(int(i[b])), "q": self.label(int(j[b]))}, "random"
        return True, None, "random"

    def nonassociativity_witness(self):
        """A triple with nonzero associator determinant, or None.

        The reachable determinants form the ideal a(g - 1)R for the R_0
        generator g, so scanning u over R against the triple
        ((g,0,0,0), (1,u,0,0), (1,0,1,0)) is decisive.
        """
        ring = self.params.ring
        g = self.params.r0.generator
        one, zero = ring.one, ring.zero
        for u in ring.elements():
            det = self.params.a * (g - one) * u
            if not det.is_zero:
                p1 = MabElem(self, g, zero, zero, zero)
                p2 = MabElem(self, one, u, zero, zero)
                p3 = MabElem(self, one, zero, one, zero)
                return p1, p2, p3
        return None

    def structure_report(self, strategy: CheckStrategy | None = None) -> dict:
        """Order, parameter regime, N commutativity/normality, nucleus, associativity."""
        params = self.params
        ring = params.ring
        predicate = ((params.a + params.a) + params.b).is_zero
        n_comm, comm_witness, comm_mode = self.n_commutative_sweep(strategy)
        # a sampled sweep can only ever refute commutativity
        inconsistent = (n_comm != predicate) if comm_mode == "exhaustive" else (
            not n_comm and predicate)
        if params.checked and inconsistent:
            raise AssertionError(
                "internal inconsistency: N commutativity sweep disagrees with 2a+b = 0")
        report = {
            "loop": params.describe(),
            "order": self.order,
            "conditions": {"I": params.condition_exponent3, "II": params.condition_b_zero},
            "degenerate": params.degenerate,
            "n_size": int(self._S ** 3),
            "n_commutative": bool(n_comm),
            "n_commutative_predicate": bool(predicate),
        }
        if not params.checked:
            report["unchecked_params"] = True
        witnesses = {}
        if comm_witness:
            witnesses["noncommutative_pair"] = comm_witness
        if self.order <= 300:
            ns = loops.normal_structure(self, self.n_indices())
            report["n_normal"] = ns.ok
            if ns.ok:
                q = ns.data["quotient"]
                report["quotient_order"] = q.order
                report["quotient_cyclic"] = loops.is_cyclic_group(q)
        else:
            report["n_normal"] = self._sampled_normality(strategy)
            report["quotient_order"] = params.r0.order
            # the r-part of the product law is exponent addition mod |R_0|,
            # so the coset map (r,x,y,z) -> r is a homomorphism onto Z_|R0|
            report["quotient_cyclic"] = True
        if self.order <= loops.TABLE_LIMIT:
            nuc = loops.nucleus(self)
            report["nucleus_size"] = int(nuc.size)
            report["nucleus_method"] = "exhaustive"
            if nuc.size <= 32:
                report["nucleus"] = [self.label(int(i)) for i in nuc]
        else:
            report["nucleus_size"] = self._sampled_nucleus_size(strategy)
            report["nucleus_method"] = "sampled"
        witness = self.nonassociativity_witness()
        report["nonassociative"] = witness is not None
        if witness:
            witnesses["nonassociative_triple"] = [str(p) for p in witness]
        report["witnesses"] = witnesses
        return report

    def _sampled_normality(self, strategy: CheckStrategy | None) -> bool:
        rng = strategy.rng() if strategy and strategy.mode == "random" else SplitMix64(1)
        count = strategy.samples if strategy and strategy.mode == "random" else 200
        count = min(count, 500)
        N = self.n_indices()
        for _ in range(count):
            x = rng.below(self.order)
            y = rng.below(self.order)
            xyN = np.sort(np.asarray(self.mul_arrays(self.mul_arrays(x, y), N)))
            xyN2 = np.sort(np.asarray(self.mul_arrays(x, self.mul_arrays(y, N))))
            if not np.array_equal(xyN, xyN2):
                return False
            xN = np.sort(np.asarray(self.mul_arrays(x, N)))
            Nx = np.sort(np.asarray(self.mul_arrays(N, x)))
            if not np.array_equal(xN, Nx):
                return False
        return True

    def _sampled_nucleus_size(self, strategy: CheckStrategy | None) -> int:
        rng = strategy.rng() if strategy and strategy.mode == "random" else SplitMix64(2)
        cands = np.arange(self.order, dtype=np.int64)
        for _ in range(24):
            x = rng.below(self.order)
            y = rng.below(self.order)
            keep = (np.asarray(self.mul_arrays(self.mul_arrays(cands, x), y))
                    == np.asarray(self.mul_arrays(cands, self.mul_arrays(x, y))))
            keep &= (np.asarray(self.mul_arrays(self.mul_arrays(x, cands), y))
                     == np.asarray(self.mul_arrays(x, self.mul_arrays(cands, y))))
            keep &= (np.asarray(self.mul_arrays(self.mul_arrays(x, y), cands))
                     == np.asarray(self.mul_arrays(x, self.mul_arrays(y, cands))))
            cands = cands[keep]
        return int(cands.size)

    # -- scaling isomorphism ---------------------------------------------------

    def scale_isomorphism(self, c: RingElement, strategy: CheckStrategy | None = None):
        """The map (r,x,y,z) -> (r,x,y,cz) onto M_{ca,cb}, verified multiplicatively.

        Returns (target_loop, index_map, report).
        """
        if not isinstance(c, RingElement):
            c = self.params.ring.from_literal(c)
        if not c.is_unit:
            raise MabParamsError("scaling constant must be a unit")
        params = self.params
        target = MabLoop(MabParams(params.ring, params.r0, c * params.a, c * params.b,
                                   checked=params.checked))
        M = params.ring.mul_table
        ri, x, y, z = self.coords_of(np.arange(self.order))
        phi = target.index_of(ri, x, y, M[c.code, z]).astype(np.int64)
        if strategy is None:
            strategy = (EXHAUSTIVE if self.order ** 2 <= 4_000_000
                        else CheckStrategy("random", 100_000, 0))
        if strategy.mode == "exhaustive":
            ar = np.arange(self.order)
            src = np.asarray(self.mul_arrays(ar[:, None], ar[None, :]))
            tgt = np.asarray(target.mul_arrays(phi[:, None], phi[None, :]))
            bad = np.argwhere(phi[src] != tgt)
            checked = self.order ** 2
            if bad.size:
                i, j = map(int, bad[0])
                return target, phi, Report("scale-isomorphism", False, checked,
                                           {"p": self.label(i), "q": self.label(j)})
        else:
            rng = strategy.rng()
            i = rng.batch_below(strategy.samples, self.order)
            j = rng.batch_below(strategy.samples, self.order)
            lhs = phi[np.asarray(self.mul_arrays(i, j))]
            rhs = np.asarray(target.mul_arrays(phi[i], phi[j]))
            bad = np.flatnonzero(lhs != rhs)
            checked = strategy.samples
            if bad.size:
                b = int(bad[0])
                return target, phi, Report("scale-isomorphism", False, checked,
                                           {"p": self.label(int(i[b])),
                                            "q": self.label(int(j[b]))})
        return target, phi, Report("scale-isomorphism", True, checked,
                                   data={"target": target.name, "c": c.code})


def build_mab(params: MabParams) -> MabLoop:
    return MabLoop(params)
