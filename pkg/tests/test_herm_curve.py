import numpy as np
import pytest

from hermsub.agcodes import dim_series
from hermsub.herm_curve import (
    eval_bivar, find_degree3_place, genus, on_curve, rational_points, tangent_line,
)


def poly_mul(E, a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = E.e_add(out[i + j], E.e_mul(x, y))
    return out


def poly_pow(E, a, k):
    out = [1]
    for _ in range(k):
        out = poly_mul(E, out, a)
    return out


def poly_add(E, a, b):
    n = max(len(a), len(b))
    a, b = a + [0] * (n - len(a)), b + [0] * (n - len(b))
    return [E.e_add(x, y) for x, y in zip(a, b)]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_point_count_and_genus_identity(q):
    C = rational_points(q)
    assert C.n == q**3
    assert C.n + 2 * genus(q) - 2 == q**3 + (q + 1) * (q - 2)
    _, counts = np.unique(C.xs, return_counts=True)
    assert np.all(counts == q)
    assert len(set(C.points)) == C.n


def test_q2_contains_origin_and_satisfies_equation():
    C = rational_points(2)
    assert (0, 0) in C.points
    T = C.tower
    assert all(on_curve(T, x, y) for x, y in C.points)


def test_points_csv_and_fingerprint_stable():
    C = rational_points(3)
    assert C.to_csv().splitlines()[0] == "x,y"
    assert len(C.to_csv().splitlines()) == 28
    assert C.fingerprint() == rational_points(3).fingerprint()
    assert C.fingerprint() != rational_points(2).fingerprint()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_degree3_place_orbit(q):
    C = rational_points(q)
    T = C.tower
    P = find_degree3_place(C)
    pts = [(p.x, p.y) for p in P.points]
    assert len(set(pts)) == 3
    for x, y in pts:
        assert on_curve(T, x, y)
        assert not (T.Fq6.in_base(x) and T.Fq6.in_base(y))
    fr = [(T.frob6(x), T.frob6(y)) for x, y in pts]
    assert fr == pts[1:] + pts[:1]
    # tangent lines permuted like the points
    assert [tuple(T.frob6(c) for c in ln) for ln in P.lines] == list(P.lines[1:] + P.lines[:1])
    assert P.serialize() == find_degree3_place(C).serialize()


def test_second_place_is_distinct():
    C = rational_points(2)
    a, b = find_degree3_place(C, 0), find_degree3_place(C, 1)
    assert not {(p.x, p.y) for p in a.points} & {(p.x, p.y) for p in b.points}


def test_tangent_at_origin():
    T = rational_points(2).tower
    assert tangent_line(T, (0, 0)) == (0, 1, 0)


def substituted_curve(E, q, a, b):
    """Y^q + Y - X^{q+1} restricted to the tangent Y = a^q X - b^q, low degree first."""
    ylin = [E.e_neg(E.e_pow(b, q)), E.e_pow(a, q)]
    f = poly_add(E, poly_pow(E, ylin, q), ylin)
    return poly_add(E, f, [0] * (q + 1) + [E.e_neg(1)])


def divide_linear(E, f, a):
    """Synthetic division by (X - a): (quotient, remainder)."""
    out, acc = [], 0
    for c in reversed(f):
        acc = E.e_add(E.e_mul(acc, a), c)
        out.append(acc)
    return list(reversed(out[:-1])), out[-1]


@pytest.mark.parametrize("q", [2, 3])
def test_tangent_at_rational_point_has_full_contact(q):
    C = rational_points(q)
    E = C.tower.Fq6
    for a, b in C.points[:: max(1, q)]:
        target = [E.e_neg(c) for c in poly_pow(E, [E.e_neg(a), 1], q + 1)]
        assert substituted_curve(E, q, a, b) == target


@pytest.mark.parametrize("q", [2, 3])
def test_tangent_at_degree3_points(q):
    C = rational_points(q)
    T = C.tower
    E = T.Fq6
    for P in find_degree3_place(C).points:
        a, b = P.x, P.y
        cx, cy, c0 = tangent_line(T, (a, b))
        assert E.e_add(E.e_add(E.e_mul(cx, a), E.e_mul(cy, b)), c0) == 0
        f, mult = substituted_curve(E, q, a, b), 0
        while True:
            quo, rem = divide_linear(E, f, a)
            if rem:
                break
            f, mult = quo, mult + 1
        # contact order q away from the rational points
        assert mult == q


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_line_product_rational_and_nonvanishing(q):
    C = rational_points(q)
    P = find_degree3_place(C)
    F = C.tower.Fq2
    assert all(0 <= c < F.order for c in P.product.values())
    vals = eval_bivar(F, P.product, C.xs, C.ys)
    assert np.all(vals != 0)


@pytest.mark.parametrize("q", [2, 3])
def test_second_orbit_gives_same_series(q):
    a = dim_series(q, q, "deg3", place_index=0)
    b = dim_series(q, q, "deg3", place_index=1)
    assert a.dims == b.dims
