import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsub.ff_tower import (
    FieldError, GF, build_tower, factor_prime_power, gf, is_irreducible, smallest_irreducible,
)

ORDERS = (2, 3, 4, 5, 7, 8, 9, 16, 25, 49, 64)


@pytest.mark.parametrize("q,r,h,sizes", [(2, 2, 2, (2, 4, 64)), (4, 2, 4, (2, 16, 4096))])
def test_tower_shapes(q, r, h, sizes):
    T = build_tower(q, r)
    assert T.h == h
    assert (T.Fr.order, T.Fq2.order, T.Fq6.order) == sizes


@pytest.mark.parametrize("q,r", [(4, 8), (6, 2), (3, 2), (9, 27)])
def test_bad_pairs(q, r):
    with pytest.raises(FieldError):
        build_tower(q, r)


def test_factor_prime_power():
    assert factor_prime_power(64) == (2, 6)
    assert factor_prime_power(49) == (7, 2)
    with pytest.raises(FieldError):
        factor_prime_power(12)


def test_moduli_irreducible():
    for p, d in [(2, 2), (2, 4), (3, 2), (5, 2), (2, 6)]:
        m = smallest_irreducible(p, d)
        assert len(m) == d + 1 and m[-1] == 1
        assert is_irreducible(m, p)


def test_inverse_exhaustive_f16():
    F = gf(16)
    for x in range(1, 16):
        assert F.e_mul(x, F.e_inv(x)) == 1


def test_omega_in_f4():
    F = gf(4)
    assert F.modulus == (1, 1, 1)
    w = F.generator
    assert F.e_mul(w, F.e_mul(w, w)) == 1


@pytest.mark.parametrize("order", ORDERS)
def test_frobenius_fixes_everything(order):
    F = gf(order)
    assert np.array_equal(F.pow_table(order), np.arange(order))


@pytest.mark.parametrize("order", (4, 9, 25))
def test_field_axioms_exhaustive(order):
    F = gf(order)
    x = np.arange(order)
    assert np.array_equal(F.add, F.add.T) and np.array_equal(F.mul, F.mul.T)
    assert np.all(F.add[x, F.neg] == 0)
    for a in range(order):
        # associativity of + and *, distributivity a(b+c) = ab + ac
        assert np.array_equal(F.add[F.add[a, x][:, None], x[None, :]], F.add[a, F.add])
        assert np.array_equal(F.mul[F.mul[a, x][:, None], x[None, :]], F.mul[a, F.mul])
        assert np.array_equal(F.mul[a, F.add], F.add[F.mul[a, x][:, None], F.mul[a, x][None, :]])


def test_cubic_extension_inverse_and_frobenius_order():
    T = build_tower(2, 2)
    E = T.Fq6
    for x in range(1, E.order):
        assert E.e_mul(x, E.e_inv(x)) == 1
    fixed = [x for x in range(E.order) if T.frob6(x) == x]
    assert fixed == [E.join(a, 0, 0) for a in range(4)]
    assert all(T.frob6(T.frob6(T.frob6(x))) == x for x in range(E.order))
    assert any(T.frob6(x) != x for x in range(E.order))


def test_cubic_frob_matches_power():
    T = build_tower(3, 3)
    E = T.Fq6
    rng = random.Random(1)
    for _ in range(100):
        x = rng.randrange(E.order)
        assert E.frob(x) == E.e_pow(x, 9)


def test_field_elem_operators():
    F = gf(9)
    a, b = F.elem(4), F.elem(7)
    assert int((a * b) / b) == 4
    assert int(a - a) == 0 and int(-a + a) == 0
    assert int(a ** 8) == 1
    with pytest.raises(FieldError):
        a + gf(3).elem(1)
    with pytest.raises(ZeroDivisionError):
        F.elem(0).inverse()


def test_trace_f4_over_f2():
    T = build_tower(2, 2)
    assert T.trace_rel(T.Fq2.generator) == 1


@pytest.mark.parametrize("q,r", [(2, 2), (4, 2), (4, 4), (3, 3), (5, 5), (8, 2)])
def test_trace_properties(q, r):
    T = build_tower(q, r)
    F = T.Fq2
    # Tr(x) = h x on the embedded subfield, returned in F_r coordinates
    for a in range(r):
        hx = 0
        for _ in range(T.h):
            hx = T.Fr.e_add(hx, a)
        assert T.trace_rel(int(T.embed_r[a])) == hx
    assert np.any(T.trace != 0)
    fr = F.pow_table(r)
    assert np.array_equal(T.trace[fr], T.trace)


def test_trace_linear_f25():
    T = build_tower(5, 5)
    rng = random.Random(0)
    for _ in range(100):
        x, y = rng.randrange(25), rng.randrange(25)
        assert T.trace_rel(T.Fq2.e_add(x, y)) == T.Fr.e_add(T.trace_rel(x), T.trace_rel(y))


def test_trace_oracle_direct_powers():
    T = build_tower(4, 2)
    F = T.Fq2
    for x in range(F.order):
        acc, t = 0, x
        for _ in range(T.h):
            acc, t = F.e_add(acc, t), F.e_pow(t, 2)
        assert T.to_r(acc) == T.trace_rel(x)


def test_subfield_coords_roundtrip_f16():
    T = build_tower(4, 2)
    assert not T.subfield_coords(0).any()
    for c, e in enumerate(T.basis):
        assert list(T.subfield_coords(e)) == [int(i == c) for i in range(T.h)]
    for x in range(16):
        assert T.reassemble(T.subfield_coords(x)) == x


@pytest.mark.parametrize("q,r", [(4, 2), (4, 4), (8, 2), (9, 3)])
def test_embedded_subfield_tables_agree(q, r):
    T = build_tower(q, r)
    e = T.embed_r
    a = np.arange(r)
    assert np.array_equal(T.Fq2.add[e[:, None], e[None, :]], e[T.Fr.add[a[:, None], a[None, :]]])
    assert np.array_equal(T.Fq2.mul[e[:, None], e[None, :]], e[T.Fr.mul[a[:, None], a[None, :]]])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from((4, 8, 9, 16, 27)), st.data())
def test_pow_is_repeated_multiplication(order, data):
    F = gf(order)
    x = data.draw(st.integers(0, order - 1))
    k = data.draw(st.integers(0, 40))
    acc = 1
    for _ in range(k):
        acc = F.e_mul(acc, x)
    assert F.e_pow(x, k) == acc


def test_explicit_modulus_must_be_irreducible():
    with pytest.raises(FieldError):
        GF(2, 2, modulus=(1, 0, 1))
