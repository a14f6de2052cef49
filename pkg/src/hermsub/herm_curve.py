"""The Hermitian curve Y^q + Y = X^{q+1} over F_{q^2}.

Rational affine points form the evaluation divisor D; a degree-3 place is
realized as a q^2-Frobenius orbit of three points over F_{q^6}.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exact_linalg import MatrixF, rref_rank
from .ff_tower import (GF, InconsistencyError, TowerContext, build_tower,
                       factor_prime_power, from_digits, gf, to_digits)


@dataclass(frozen=True, eq=False)
class CurveCtx:
    q: int
    tower: TowerContext
    genus: int
    xs: np.ndarray  # F_{q^2} ints, sorted lexicographically with ys
    ys: np.ndarray

    @property
    def n(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> list[tuple[int, int]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def to_csv(self) -> str:
        lines = ["x,y"] + [f"{x},{y}" for x, y in self.points]
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        T = self.tower
        h = hashlib.sha256()
        h.update(repr((T.Fq2.modulus, T.Fq6.modulus, T.Fr.modulus, T.embed_r.tolist())).encode())
        h.update(self.to_csv().encode())
        return h.hexdigest()


@dataclass(frozen=True)
class AffinePoint:
    x: int
    y: int
    field: str  # "q2" or "q6"


@dataclass(frozen=True, eq=False)
class Degree3Place:
    """Three Frobenius-conjugate points over F_{q^6} and their tangents.

    ``lines[j]`` holds (c_X, c_Y, c_0) of the tangent c_X X + c_Y Y + c_0 at
    ``points[j]``; ``product`` is their product as a dict {(i, j): coeff}
    with coefficients in F_{q^2}.
    """

    points: tuple[AffinePoint, AffinePoint, AffinePoint]
    lines: tuple[tuple[int, int, int], ...]
    product: dict

    def serialize(self) -> str:
        pts = ";".join(f"{P.x},{P.y}" for P in self.points)
        prod = ";".join(f"{i},{j},{c}" for (i, j), c in sorted(self.product.items()))
        return f"{pts}|{prod}"


def genus(q: int) -> int:
    return q * (q - 1) // 2


def _check_genus(q: int, g: int) -> None:
    n = q**3
    if n + 2 * g - 2 != q**3 + (q + 1) * (q - 2):
        raise InconsistencyError("genus does not match the parameter range n + 2g - 2")


@lru_cache(maxsize=None)
def rational_points(q: int, r: int | None = None) -> CurveCtx:
    """Enumerate the q^3 affine F_{q^2}-rational points in (x, y) order."""
    p, _ = factor_prime_power(q)
    T = build_tower(q, r if r is not None else p)
    F = T.Fq2
    Q = F.order
    norm = F.pow_table(q + 1)  # a -> a^{q+1}
    ytr = F.add[F.pow_table(q), np.arange(Q)]  # b -> b^q + b
    xs, ys = [], []
    for a in range(Q):
        sols = np.flatnonzero(ytr == norm[a])
        if sols.size != q:
            raise InconsistencyError(f"fiber over x={a} has {sols.size} points, expected {q}")
        xs.extend([a] * q)
        ys.extend(sols.tolist())
    g = genus(q)
    _check_genus(q, g)
    xs_a = np.array(xs, dtype=np.int64)
    ys_a = np.array(ys, dtype=np.int64)
    xs_a.setflags(write=False)
    ys_a.setflags(write=False)
    return CurveCtx(q=q, tower=T, genus=g, xs=xs_a, ys=ys_a)


def on_curve(T: TowerContext, x: int, y: int) -> bool:
    """Check y^q + y == x^{q+1} in F_{q^6} (F_{q^2} ints embed as-is)."""
    E = T.Fq6
    q = T.q
    return E.e_add(E.e_pow(y, q), y) == E.e_pow(x, q + 1)


# ---------------------------------------------------------------------------
# degree-3 places


class _ArtinSchreierSolver:
    """Solve y^q + y = c over F_{q^6} as an F_p-linear system."""

    def __init__(self, T: TowerContext):
        E = T.Fq6
        self.E, self.q, self.p, self.d = E, T.q, E.p, E.d
        Fp = gf(self.p)
        cols = []
        for i in range(self.d):
            b = self.p**i
            cols.append(to_digits(E.e_add(E.e_pow(b, self.q), b), self.p, self.d))
        self.Fp = Fp
        self.A = np.array(cols, dtype=np.int64).T  # d x d
        # kernel of y -> y^q + y; all of it lies in F_{q^2}
        Fq2 = T.Fq2
        ytr = Fq2.add[Fq2.pow_table(self.q), np.arange(Fq2.order)]
        self.kernel = np.flatnonzero(ytr == 0).tolist()

    def solutions(self, c: int) -> list[int]:
        rhs = np.array(to_digits(c, self.p, self.d), dtype=np.int64)[:, None]
        aug = MatrixF(self.Fp, np.hstack([self.A, rhs]))
        R, rk, piv = rref_rank(aug)
        if self.d in piv:
            return []
        y = np.zeros(self.d, dtype=np.int64)
        for i, col in enumerate(piv):
            y[col] = R.data[i, -1]
        y0 = from_digits(y.tolist(), self.p)
        return sorted(self.E.e_add(y0, k) for k in self.kernel)


def tangent_line(T: TowerContext, point: tuple[int, int]) -> tuple[int, int, int]:
    """Tangent at (a, b): Y - a^q X + b^q = 0, as (c_X, c_Y, c_0) = (-a^q, 1, b^q)."""
    E = T.Fq6
    a, b = point
    return E.e_neg(E.e_pow(a, T.q)), 1, E.e_pow(b, T.q)


def _line_product(E, lines) -> dict:
    # polynomials as {(i, j): coeff}
    poly = {(0, 0): 1}
    for cx, cy, c0 in lines:
        out: dict = {}
        for (i, j), c in poly.items():
            for (di, dj), lc in (((1, 0), cx), ((0, 1), cy), ((0, 0), c0)):
                if lc == 0:
                    continue
                key = (i + di, j + dj)
                out[key] = E.e_add(out.get(key, 0), E.e_mul(c, lc))
        poly = {k: v for k, v in out.items() if v}
    return poly


def find_degree3_place(ctx: CurveCtx, index: int = 0) -> Degree3Place:
    """Return the ``index``-th degree-3 place in serialized point order.

    Points over F_{q^6} are scanned lexicographically by (x, y).  A point lies
    on a size-3 Frobenius orbit exactly when x is outside F_{q^2} (points with
    x in F_{q^2} are all rational).  Orbits already seen through a conjugate
    are skipped.
    """
    T = ctx.tower
    E = T.Fq6
    Q = T.Fq2.order
    solver = _ArtinSchreierSolver(T)
    seen: set[tuple[int, int]] = set()
    found = 0
    for x in range(Q, E.order):
        ys = solver.solutions(E.e_pow(x, T.q + 1))
        for y in ys:
            if (x, y) in seen:
                continue
            orbit = [(x, y)]
            for _ in range(2):
                px, py = orbit[-1]
                orbit.append((T.frob6(px), T.frob6(py)))
            px, py = orbit[-1]
            if (T.frob6(px), T.frob6(py)) != orbit[0] or len(set(orbit)) != 3:
                raise InconsistencyError("Frobenius orbit is not of size 3")
            seen.update(orbit)
            if found == index:
                return _make_place(T, orbit)
            found += 1
    raise InconsistencyError("no degree-3 place found")


def _make_place(T: TowerContext, orbit) -> Degree3Place:
    E = T.Fq6
    for x, y in orbit:
        if not on_curve(T, x, y):
            raise InconsistencyError("orbit point is not on the curve")
    lines = tuple(tangent_line(T, P) for P in orbit)
    prod = _line_product(E, lines)
    prod = {k: E.to_base(v) for k, v in prod.items()}
    pts = tuple(AffinePoint(x, y, "q6") for x, y in orbit)
    return Degree3Place(points=pts, lines=lines, product=prod)


def eval_bivar(F: GF, poly: dict, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Evaluate {(i, j): c} over F at arrays of points."""
    out = np.zeros(len(xs), dtype=np.int64)
    xp: dict[int, np.ndarray] = {0: np.ones(len(xs), dtype=np.int64)}
    yp: dict[int, np.ndarray] = {0: np.ones(len(xs), dtype=np.int64)}

    def power(cache, base, k):
        if k not in cache:
            cache[k] = F.mul[power(cache, base, k - 1), base]
        return cache[k]

    for (i, j), c in poly.items():
        term = F.mul[c, F.mul[power(xp, xs, i), power(yp, ys, j)]]
        out = F.add[out, term]
    return out
