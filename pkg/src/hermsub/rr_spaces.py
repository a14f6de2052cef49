"""Riemann-Roch spaces L(sP_inf) and L(sP) on the Hermitian curve.

The one-point space has an explicit monomial basis.  For a degree-3 place P
the space is described by numerators f of degree <= 3u over F_{q^2} whose
valuation at each conjugate point is at least v, divided by (l1 l2 l3)^u.
Valuation conditions are imposed on truncated power series in the local
parameter t = X - a, which is a uniformizer at every affine point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exact_linalg import MatrixF, nullspace
from .ff_tower import CubicExt, TowerContext
from .herm_curve import Degree3Place


@dataclass(frozen=True)
class BivarPoly:
    """Polynomial sum c_ij X^i Y^j; ``coeffs`` holds only nonzero terms."""

    coeffs: dict
    bound: int

    def __post_init__(self):
        if any(c == 0 for c in self.coeffs.values()):
            raise ValueError("zero coefficient stored")
        if any(i + j > self.bound for i, j in self.coeffs):
            raise ValueError("term exceeds the total-degree bound")

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.coeffs), default=-1)


@dataclass(frozen=True)
class MonomialBasis1Pt:
    s: int
    exponents: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.exponents)


def pole_order(q: int, i: int, j: int) -> int:
    return q * i + (q + 1) * j


def monomial_basis(q: int, s: int) -> MonomialBasis1Pt:
    """Exponents (i, j) of x^i y^j spanning L(s P_inf), sorted by pole order."""
    exps = [(i, j) for j in range(q) for i in range(q * q)
            if pole_order(q, i, j) <= s]
    exps.sort(key=lambda e: (pole_order(q, *e), e))
    return MonomialBasis1Pt(s=s, exponents=tuple(exps))


# ---------------------------------------------------------------------------
# truncated power series over F_{q^6}


def series_mul(E: CubicExt, a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, ai in enumerate(a[:prec]):
        if ai == 0:
            continue
        for j in range(min(len(b), prec - i)):
            if b[j]:
                out[i + j] = E.e_add(out[i + j], E.e_mul(ai, b[j]))
    return out


@dataclass(frozen=True)
class BranchExpansion:
    """Y(t) = b + sum_{k=1}^{N} c_k t^k on the branch through (a, b), t = X - a.

    ``coeffs[0]`` is b.
    """

    a: int
    b: int
    precision: int
    coeffs: tuple[int, ...]


def branch_expansion(T: TowerContext, point: tuple[int, int], N: int) -> BranchExpansion:
    """Solve u^q + u = a^q t + a t^q + t^{q+1} for u = Y - b, coefficientwise."""
    if N < 1:
        raise ValueError("precision must be at least 1")
    E, q = T.Fq6, T.q
    a, b = point
    rhs = [0] * (N + 1)
    for k, val in ((1, E.e_pow(a, q)), (q, a), (q + 1, 1)):
        if k <= N:
            rhs[k] = E.e_add(rhs[k], val)
    c = [0] * (N + 1)
    for k in range(1, N + 1):
        c[k] = rhs[k]
        if k % q == 0:
            c[k] = E.e_sub(c[k], E.e_pow(c[k // q], q))
    c[0] = b
    return BranchExpansion(a=a, b=b, precision=N, coeffs=tuple(c))


def branch_residual(T: TowerContext, exp: BranchExpansion) -> list[int]:
    """Coefficients of Y(t)^q + Y(t) - (a + t)^{q+1} up to t^N."""
    E, q = T.Fq6, T.q
    prec = exp.precision + 1
    Y = list(exp.coeffs)
    Yq = [1] + [0] * (prec - 1)
    X = [exp.a, 1]
    Xq1 = [1] + [0] * (prec - 1)
    for _ in range(q):
        Yq = series_mul(E, Yq, Y, prec)
    for _ in range(q + 1):
        Xq1 = series_mul(E, Xq1, X, prec)
    return [E.e_sub(E.e_add(Yq[k], Y[k]), Xq1[k]) for k in range(prec)]


def substitute(T: TowerContext, poly: dict, exp: BranchExpansion, prec: int) -> list[int]:
    """Series of f(a + t, Y(t)) to ``prec`` terms by Horner in Y then X.

    Coefficients of ``poly`` are F_{q^2} ints (embedded in F_{q^6}).
    """
    E = T.Fq6
    if prec > exp.precision + 1:
        raise ValueError("branch expansion too short")
    Y = list(exp.coeffs[:prec])
    X = [exp.a, 1]
    maxj = max((j for _, j in poly), default=0)
    maxi = max((i for i, _ in poly), default=0)
    out = [0] * prec
    for i in range(maxi, -1, -1):
        # inner Horner in Y for the coefficient polynomial of X^i
        inner = [0] * prec
        for j in range(maxj, -1, -1):
            inner = series_mul(E, inner, Y, prec)
            c = poly.get((i, j), 0)
            if c:
                inner[0] = E.e_add(inner[0], c)
        out = series_mul(E, out, X, prec)
        out = [E.e_add(o, t) for o, t in zip(out, inner)]
    return out


def valuation_at_least(T: TowerContext, poly: dict, point: tuple[int, int], v: int, extra: int | None = None) -> bool:
    """Check v_P(f) >= v with an expansion computed from scratch."""
    if v <= 0:
        return True
    extra = T.q if extra is None else extra
    exp = branch_expansion(T, point, v + extra)
    ser = substitute(T, poly, exp, v)
    return all(c == 0 for c in ser)


# ---------------------------------------------------------------------------
# L(sP) for a degree-3 place


class LocalSeries:
    """Cached power-series tables of X^i and Y^j at the conjugate points."""

    def __init__(self, T: TowerContext, place: Degree3Place):
        self.T = T
        self.place = place
        self.prec = T.q + 1
        self.exps = [branch_expansion(T, (P.x, P.y), self.prec) for P in place.points]
        one = [1] + [0] * (self.prec - 1)
        self._x = [[one] for _ in self.exps]
        self._y = [[one] for _ in self.exps]

    def xpow(self, k: int, i: int) -> list[int]:
        xs = self._x[k]
        while len(xs) <= i:
            xs.append(series_mul(self.T.Fq6, xs[-1], [self.exps[k].a, 1], self.prec))
        return xs[i]

    def ypow(self, k: int, j: int) -> list[int]:
        ys = self._y[k]
        while len(ys) <= j:
            ys.append(series_mul(self.T.Fq6, ys[-1], list(self.exps[k].coeffs), self.prec))
        return ys[j]

    def monomial(self, k: int, i: int, j: int) -> list[int]:
        return series_mul(self.T.Fq6, self.xpow(k, i), self.ypow(k, j), self.prec)


def split_s(q: int, s: int) -> tuple[int, int]:
    """s = u(q+1) - v with 0 <= v <= q."""
    u = -(-s // (q + 1))
    return u, u * (q + 1) - s


def numerator_monomials(q: int, u: int, reduced: bool = True) -> list[tuple[int, int]]:
    """Monomials of total degree <= 3u.

    With ``reduced`` the X-degree is capped at q: X^{q+1} = Y^q + Y on the
    curve lowers total degree, so the capped set spans the same functions.
    """
    d = 3 * u
    imax = min(d, q) if reduced else d
    return [(i, j) for i in range(imax + 1) for j in range(d - i + 1)]


@dataclass(frozen=True, eq=False)
class Deg3SpanningSet:
    s: int
    u: int
    v: int
    monomials: tuple[tuple[int, int], ...]
    coeffs: MatrixF  # one row per numerator, columns indexed by ``monomials``
    place: Degree3Place

    @cached_property
    def numerators(self) -> list[BivarPoly]:
        out = []
        for row in self.coeffs.data:
            terms = {m: int(c) for m, c in zip(self.monomials, row) if c}
            out.append(BivarPoly(terms, 3 * self.u))
        return out

    def __len__(self):
        return self.coeffs.rows


def deg3_conditions(local: LocalSeries, u: int, v: int, monomials) -> MatrixF:
    """Linear conditions over F_{q^2} forcing v_{P_k}(f) >= v at all three points."""
    T = local.T
    E = T.Fq6
    rows = []
    for k in range(3):
        series = [local.monomial(k, i, j)[:v] for i, j in monomials]
        for e in range(v):
            parts = [E.split(ser[e]) for ser in series]
            for c in range(3):
                rows.append([p[c] for p in parts])
    data = np.array(rows, dtype=np.int64).reshape(len(rows), len(monomials))
    return MatrixF(T.Fq2, data)


def deg3_spanning_set(T: TowerContext, place: Degree3Place, s: int, *,
                      local: LocalSeries | None = None, reduced: bool = True) -> Deg3SpanningSet:
    """Numerators f with deg f <= 3u and v_{P_k}(f) >= v, as a solution-space basis."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    q = T.q
    u, v = split_s(q, s)
    mons = numerator_monomials(q, u, reduced)
    if v == 0:
        N = MatrixF.identity(T.Fq2, len(mons))
    else:
        local = local or LocalSeries(T, place)
        N = nullspace(deg3_conditions(local, u, v, mons))
    return Deg3SpanningSet(s=s, u=u, v=v, monomials=tuple(mons), coeffs=N, place=place)
