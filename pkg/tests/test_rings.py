import itertools

import numpy as np
import pytest

from moufang import (NoElementOfOrder, NotAUnit, RingError, cyclic_subgroup,
                     element_of_order, make_ring, multiplicative_order)
from moufang.sampling import SplitMix64


# independent polynomial arithmetic used as the oracle for GF tables
def poly_mul_mod(u, v, mod, p):
    prod = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] = (prod[i + j] + a * b) % p
    k = len(mod) - 1
    while len(prod) > k:
        c = prod.pop()
        if c:
            for j in range(k):
                prod[-k + j] = (prod[-k + j] - c * mod[j + len(prod) - k - 0]) % p
    prod += [0] * (k - len(prod))
    return prod


def poly_mul_mod_ref(u, v, mod, p):
    # plain long division, written separately from the package implementation
    prod = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            prod[i + j] = (prod[i + j] + a * b) % p
    k = len(mod) - 1
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return (prod + [0] * k)[:k]


def test_make_ring_basics():
    gf7 = make_ring("GF:7")
    assert gf7.size == 7 and gf7.char == 7
    gf4 = make_ring("GF:2^2")
    assert gf4.size == 4 and gf4.char == 2
    assert gf4.poly == (1, 1, 1)  # x^2 + x + 1, the unique monic irreducible quadratic
    z9 = make_ring("Zn:9")
    assert z9.size == 9 and z9.char == 9


def test_make_ring_errors():
    with pytest.raises(RingError):
        make_ring("Zn:1")
    with pytest.raises(RingError):
        make_ring("GF:4")  # not prime
    with pytest.raises(RingError):
        make_ring("GF:2^2:poly=1,0,1")  # x^2 + 1 = (x+1)^2 is reducible
    with pytest.raises(RingError):
        make_ring("GF:2^2:poly=1,1")  # wrong degree
    with pytest.raises(RingError):
        make_ring("nonsense")


def test_default_polynomials_are_smallest():
    assert make_ring("GF:2^3").poly == (1, 1, 0, 1)   # x^3 + x + 1
    assert make_ring("GF:5^2").poly == (2, 0, 1)      # x^2 + 2
    assert make_ring("GF:3^2").poly == (1, 0, 1)      # x^2 + 1


def test_gf4_known_table():
    gf4 = make_ring("GF:2^2")
    w, w2, one = gf4.element(2), gf4.element(3), gf4.one
    assert w * w == w2
    assert w * w2 == one
    assert w2 * w2 == w
    assert w + w == gf4.zero  # characteristic 2
    assert (w + one) == w2


@pytest.mark.parametrize("spec", ["Zn:6", "Zn:9", "GF:2", "GF:7", "GF:2^2", "GF:3^2"])
def test_ring_axioms_exhaustive(spec):
    ring = make_ring(spec)
    assert ring.size <= 16
    elems = range(ring.size)
    A, M = ring.add_table, ring.mul_table
    for a, b, c in itertools.product(elems, repeat=3):
        assert A[a, b] == A[b, a]
        assert M[M[a, b], c] == M[a, M[b, c]]
        assert M[a, A[b, c]] == A[M[a, b], M[a, c]]


@pytest.mark.parametrize("spec", ["GF:5^2", "Zn:24", "GF:2^3"])
def test_ring_axioms_random(spec):
    ring = make_ring(spec)
    rng = SplitMix64(12345)
    n = ring.size
    cnt = 100_000
    a = rng.batch_below(cnt, n)
    b = rng.batch_below(cnt, n)
    c = rng.batch_below(cnt, n)
    A, M = ring.add_table, ring.mul_table
    assert (A[a, b] == A[b, a]).all()
    assert (M[M[a, b], c] == M[a, M[b, c]]).all()
    assert (M[a, A[b, c]] == A[M[a, b], M[a, c]]).all()


def test_gf_tables_match_polynomial_oracle():
    for spec in ("GF:2^2", "GF:2^3", "GF:5^2"):
        ring = make_ring(spec)
        p, k, mod = ring.p, ring.k, list(ring.poly)
        for i in range(ring.size):
            ci = list(ring.coeff_vector(i))
            for j in range(ring.size):
                cj = list(ring.coeff_vector(j))
                want = poly_mul_mod_ref(ci, cj, mod, p)
                code = sum(c * p ** d for d, c in enumerate(want))
                assert int(ring.mul_table[i, j]) == code


def test_encoding_roundtrip():
    for spec in ("GF:2^3", "GF:5^2", "Zn:12"):
        ring = make_ring(spec)
        for e in ring.elements():
            assert ring.element(e.code) == e
        if ring.kind == "GF":
            for code in range(ring.size):
                cv = ring.coeff_vector(code)
                assert sum(c * ring.p ** d for d, c in enumerate(cv)) == code


def test_arithmetic_examples():
    gf7 = make_ring("GF:7")
    assert (gf7.element(3) * gf7.element(5)).code == 1
    z9 = make_ring("Zn:9")
    assert (-z9.element(4)).code == 5
    gf4 = make_ring("GF:2^2")
    assert (gf4.element(2) + gf4.element(2)).code == 0


def test_unit_inverse():
    gf7 = make_ring("GF:7")
    assert gf7.element(2).inverse().code == 4
    assert gf7.one.inverse() == gf7.one
    z9 = make_ring("Zn:9")
    with pytest.raises(NotAUnit):
        z9.element(3).inverse()
    # inverse really inverts, for every unit of a few rings
    for spec in ("Zn:24", "GF:2^3", "GF:5^2"):
        ring = make_ring(spec)
        for code in ring.units:
            e = ring.element(int(code))
            assert e * e.inverse() == ring.one


def test_mixed_ring_error():
    a = make_ring("GF:7").element(3)
    b = make_ring("Zn:7").element(3)
    with pytest.raises(RingError):
        a * b


def test_element_of_order():
    gf7 = make_ring("GF:7")
    assert element_of_order(gf7, 3).code == 2
    gf4 = make_ring("GF:2^2")
    assert element_of_order(gf4, 3).code == 2
    with pytest.raises(NoElementOfOrder):
        element_of_order(gf7, 5)  # 5 does not divide 6
    for k in (1, 2, 3, 6):
        e = element_of_order(gf7, k)
        assert multiplicative_order(e) == k
        for d in range(1, k):
            if k % d == 0:
                assert (e ** d) != gf7.one


def test_cyclic_subgroup():
    gf7 = make_ring("GF:7")
    r0 = cyclic_subgroup(gf7.element(2))
    assert r0.order == 3
    assert [e.code for e in r0.elements] == [1, 2, 4]
    assert cyclic_subgroup(gf7.one).order == 1
    gf8 = make_ring("GF:2^3")
    for code in gf8.units:
        if code != 1:
            assert cyclic_subgroup(gf8.element(int(code))).order == 7
    with pytest.raises(NotAUnit):
        cyclic_subgroup(make_ring("Zn:9").element(3))
    assert r0.has_exponent_3
    assert not cyclic_subgroup(gf7.element(3)).has_exponent_3  # order 6


def test_from_literal_reduction():
    gf7 = make_ring("GF:7")
    assert gf7.from_literal(-2).code == 5
    assert gf7.from_literal(5).code == 5
    gf4 = make_ring("GF:2^2")
    # out-of-range literals are integer images: -2 means -2*1 = 0 in char 2
    assert gf4.from_literal(-2).code == 0
    assert gf4.from_literal(2).code == 2  # in-range literals are codes (= the generator)


def test_splitmix_batch_matches_scalar():
    a = SplitMix64(987654321)
    b = SplitMix64(987654321)
    scal = [a.next_u64() for _ in range(1000)]
    vec = b.batch(300).tolist() + b.batch(700).tolist()
    assert scal == vec
