import pytest
from hypothesis import given, settings, strategies as st

from hermsub.herm_curve import find_degree3_place, genus, rational_points
from hermsub.rr_spaces import (
    BivarPoly, branch_expansion, branch_residual, deg3_spanning_set, monomial_basis,
    numerator_monomials, pole_order, series_mul, split_s, substitute, valuation_at_least,
)


def test_monomial_basis_small():
    assert set(monomial_basis(2, 2).exponents) == {(0, 0), (1, 0)}
    assert monomial_basis(2, 0).exponents == ((0, 0),)
    assert len(monomial_basis(3, 10)) == 8


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_monomial_count_riemann_roch_regime(q):
    g, n = genus(q), q**3
    for s in range(2 * g - 1, n):
        assert len(monomial_basis(q, s)) == s - g + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_monomial_count_saturates(q):
    n, top = q**3, q**3 + (q + 1) * (q - 2)
    sizes = [len(monomial_basis(q, s)) for s in range(top + 3)]
    assert sizes == sorted(sizes)
    # one monomial short at n + 2g - 2, full from the next step on
    assert sizes[top] == n - 1
    assert sizes[top + 1] == sizes[top + 2] == n


def test_monomial_basis_sorted_by_pole_order():
    exps = monomial_basis(4, 30).exponents
    orders = [pole_order(4, i, j) for i, j in exps]
    assert orders == sorted(orders) and len(set(orders)) == len(orders)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 200))
def test_split_s(q, s):
    u, v = split_s(q, s)
    assert s == u * (q + 1) - v and 0 <= v <= q


def test_numerator_monomial_counts():
    assert len(numerator_monomials(2, 1, reduced=False)) == 10
    assert len(numerator_monomials(5, 0)) == 1
    assert all(i <= 3 for i, _ in numerator_monomials(3, 4))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_branch_first_coefficient(q):
    C = rational_points(q)
    T, E = C.tower, C.tower.Fq6
    pts = [(P.x, P.y) for P in find_degree3_place(C).points] + C.points[:3]
    for a, b in pts:
        exp = branch_expansion(T, (a, b), 4)
        assert exp.coeffs[0] == b and exp.coeffs[1] == E.e_pow(a, q)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_branch_at_origin(q):
    T = rational_points(q).tower
    E = T.Fq6
    N = 2 * (q + 1)
    exp = branch_expansion(T, (0, 0), N)
    expected = [0] * (N + 1)
    expected[q + 1] = 1
    if q * (q + 1) <= N:
        expected[q * (q + 1)] = E.e_neg(1)
    assert list(exp.coeffs) == expected
    assert not any(branch_residual(T, exp))


@pytest.mark.parametrize("q,u_max", [(2, 1), (3, 3)])
def test_branch_residual_at_degree3_points(q, u_max):
    C = rational_points(q)
    T = C.tower
    N = 3 * u_max * (q + 1)
    for P in find_degree3_place(C).points:
        assert not any(branch_residual(T, branch_expansion(T, (P.x, P.y), N)))


def test_substitute_against_power_products():
    C = rational_points(3)
    T, E = C.tower, C.tower.Fq6
    P = find_degree3_place(C).points[0]
    exp = branch_expansion(T, (P.x, P.y), 12)
    poly = {(0, 0): 5, (2, 1): 3, (1, 3): 7, (3, 0): 1}
    prec = 8
    X, Y = [P.x, 1], list(exp.coeffs[:prec])
    ref = [0] * prec
    for (i, j), c in poly.items():
        term = [c] + [0] * (prec - 1)
        for _ in range(i):
            term = series_mul(E, term, X, prec)
        for _ in range(j):
            term = series_mul(E, term, Y, prec)
        ref = [E.e_add(a, b) for a, b in zip(ref, term)]
    assert substitute(T, poly, exp, prec) == ref


def test_deg3_spanning_set_edge_cases():
    C = rational_points(2)
    T, place = C.tower, find_degree3_place(C)
    S0 = deg3_spanning_set(T, place, 0)
    assert (S0.u, S0.v, len(S0)) == (0, 0, 1)
    assert S0.numerators[0].coeffs == {(0, 0): 1}
    S = deg3_spanning_set(T, place, 3, reduced=False)
    assert (S.u, S.v, len(S)) == (1, 0, 10)
    with pytest.raises(ValueError):
        deg3_spanning_set(T, place, -1)


@pytest.mark.parametrize("q,s_values", [(2, [1, 2, 4, 5]), (3, [1, 2, 3, 5, 6, 7, 9, 10])])
def test_spanning_numerators_meet_valuation(q, s_values):
    C = rational_points(q)
    T, place = C.tower, find_degree3_place(C)
    for s in s_values:
        S = deg3_spanning_set(T, place, s)
        assert S.v > 0
        for f in S.numerators:
            for P in place.points:
                assert valuation_at_least(T, f.coeffs, (P.x, P.y), S.v, extra=2 * q)


def test_bivar_poly_validation():
    assert BivarPoly({(1, 2): 3}, 3).degree == 3
    with pytest.raises(ValueError):
        BivarPoly({(2, 2): 1}, 3)
    with pytest.raises(ValueError):
        BivarPoly({(0, 0): 0}, 3)
