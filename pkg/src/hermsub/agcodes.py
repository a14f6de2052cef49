"""Hermitian functional codes C_L(D, sG) and their F_r subfield subcodes.

The subcode dimension is computed from a parity-check matrix H of the
F_{q^2}-code: every entry is expanded into its h coordinates over F_r and the
F_r-nullity of the expanded system is the answer.  Delsarte's identity
(C|F_r)^perp = Tr(C^perp) is kept as an independent cross-check.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .exact_linalg import (MatrixF, matmul, nullspace, nullspace_from_rref, rank,
                           row_space_equal, rref_rank)
from .ff_tower import InconsistencyError, TowerContext, build_tower
from .herm_curve import CurveCtx, Degree3Place, eval_bivar, find_degree3_place, rational_points
from .rate_stats import GAMMAS, RateSeries, alpha_of, deg_of
from .rr_spaces import LocalSeries, deg3_spanning_set, monomial_basis

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodeSpec:
    q: int
    r: int
    gamma: str
    s: int

    def __post_init__(self):
        deg_of(self.gamma)
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        build_tower(self.q, self.r)  # validates the pair

    @property
    def deg_G(self) -> int:
        return deg_of(self.gamma)


@dataclass(frozen=True)
class DimRecord:
    spec: CodeSpec
    n: int
    deg_G: int
    k: int
    subcode_dim: int

    @property
    def designed_distance(self) -> int:
        return self.n - self.spec.s * self.deg_G

    @property
    def trace_bound(self) -> int:
        h = build_tower(self.spec.q, self.spec.r).h
        return max(0, self.n - h * (self.n - self.k))


class HermitianFamily:
    """Shared, immutable construction data for one (q, r)."""

    def __init__(self, q: int, r: int, place_index: int = 0):
        self.q, self.r = q, r
        self.tower: TowerContext = build_tower(q, r)
        self.curve: CurveCtx = rational_points(q, r)
        self.n = self.curve.n
        self.g = self.curve.genus
        self.place_index = place_index
        F = self.tower.Fq2
        self._xpow = [np.ones(self.n, dtype=np.int64)]
        self._ypow = [np.ones(self.n, dtype=np.int64)]
        self._F = F

    def _power(self, cache: list, base: np.ndarray, k: int) -> np.ndarray:
        while len(cache) <= k:
            cache.append(self._F.mul[cache[-1], base])
        return cache[k]

    def monomial_values(self, exps: Iterable[tuple[int, int]]) -> np.ndarray:
        F = self._F
        rows = [F.mul[self._power(self._xpow, self.curve.xs, i),
                      self._power(self._ypow, self.curve.ys, j)] for i, j in exps]
        if not rows:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    @cached_property
    def place(self) -> Degree3Place:
        return find_degree3_place(self.curve, self.place_index)

    @cached_property
    def local(self) -> LocalSeries:
        return LocalSeries(self.tower, self.place)

    @cached_property
    def line_product_values(self) -> np.ndarray:
        vals = eval_bivar(self._F, self.place.product, self.curve.xs, self.curve.ys)
        if np.any(vals == 0):
            raise InconsistencyError("tangent-line product vanishes at a rational point")
        return vals

    def alpha(self, gamma: str) -> int:
        return alpha_of(self.n, self.g, deg_of(gamma))

    def fingerprint(self, gamma: str) -> str:
        fp = self.curve.fingerprint()
        if gamma == "deg3":
            fp = hashlib.sha256((fp + self.place.serialize()).encode()).hexdigest()
        return fp


@lru_cache(maxsize=None)
def family(q: int, r: int, place_index: int = 0) -> HermitianFamily:
    return HermitianFamily(q, r, place_index)


# ---------------------------------------------------------------------------
# codes


def eval_matrix(spec: CodeSpec, fam: HermitianFamily | None = None, *, reduced: bool = True) -> MatrixF:
    """Generator rows: evaluations of a spanning set of L(sG) at the affine points."""
    fam = fam or family(spec.q, spec.r)
    F = fam.tower.Fq2
    if spec.gamma == "1pt":
        return MatrixF(F, fam.monomial_values(monomial_basis(spec.q, spec.s).exponents))
    span = deg3_spanning_set(fam.tower, fam.place, spec.s, local=fam.local, reduced=reduced)
    mons = MatrixF(F, fam.monomial_values(span.monomials))
    G = matmul(span.coeffs, mons).data
    if span.u:
        scale = F.pow_table(F.order - 1 - span.u % (F.order - 1))[fam.line_product_values]
        G = F.mul[G, scale[None, :]]
    return MatrixF(F, G)


def code_dim(spec: CodeSpec, fam: HermitianFamily | None = None) -> int:
    return rank(eval_matrix(spec, fam))


def expand_parity(tower: TowerContext, H: MatrixF) -> MatrixF:
    """Rows sum_j coords_c(H_ij) x_j = 0 over F_r, grouped by coordinate c."""
    C = tower.coords[H.data]  # (m, n, h)
    E = np.transpose(C, (2, 0, 1)).reshape(-1, H.cols)
    return MatrixF(tower.Fr, E)


def _subcode_from_generator(tower: TowerContext, G: MatrixF) -> tuple[int, int, MatrixF, MatrixF]:
    """Return (k, subcode dim, H, expanded H)."""
    n = G.cols
    R, k, piv = rref_rank(G)
    H = nullspace_from_rref(R, piv)
    if k == n:
        return k, n, H, MatrixF.zeros(tower.Fr, 0, n)
    E = expand_parity(tower, H)
    return k, n - rank(E), H, E


def subfield_subcode_dim(spec: CodeSpec, fam: HermitianFamily | None = None) -> DimRecord:
    fam = fam or family(spec.q, spec.r)
    k, d, _, _ = _subcode_from_generator(fam.tower, eval_matrix(spec, fam))
    return DimRecord(spec=spec, n=fam.n, deg_G=spec.deg_G, k=k, subcode_dim=d)


def trace_code(tower: TowerContext, gens: MatrixF) -> MatrixF:
    """Generators Tr(beta_c g_j) of Tr(C) for every basis scalar beta_c."""
    F = tower.Fq2
    blocks = [tower.trace[F.mul[b, gens.data]] for b in tower.basis]
    if gens.rows == 0:
        return MatrixF.zeros(tower.Fr, 0, gens.cols)
    return MatrixF(tower.Fr, np.vstack(blocks))


def subcode_basis(tower: TowerContext, G: MatrixF) -> MatrixF:
    """Basis of C|F_r as F_r vectors."""
    _, _, _, E = _subcode_from_generator(tower, G)
    if E.rows == 0:
        return MatrixF.identity(tower.Fr, G.cols)
    return nullspace(E)


def verify_delsarte(spec: CodeSpec, fam: HermitianFamily | None = None) -> bool:
    """Check (C|F_r)^perp == Tr(C^perp) and the dimension formula it implies."""
    fam = fam or family(spec.q, spec.r)
    T = fam.tower
    G = eval_matrix(spec, fam)
    k, dim_sub, H, E = _subcode_from_generator(T, G)
    S = nullspace(E) if E.rows else MatrixF.identity(T.Fr, fam.n)
    dual_sub = nullspace(S) if S.rows else MatrixF.identity(T.Fr, fam.n)
    trH = trace_code(T, H)
    if not row_space_equal(dual_sub, trH):
        return False
    rk = rank(trH)
    kernel_dim = T.h * (fam.n - k) - rk  # kernel of Tr restricted to C^perp
    veron = fam.n - T.h * (fam.n - k) + kernel_dim
    return S.rows == dim_sub == fam.n - rk == veron


# ---------------------------------------------------------------------------
# dimension series


class _IncrementalRREF:
    """Reduced echelon basis that grows one row at a time (nested 1-point codes)."""

    def __init__(self, F, n: int):
        self.F = F
        self.n = n
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    def add(self, row: np.ndarray) -> bool:
        F = self.F
        v = row.astype(np.int64).copy()
        for prow, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = F.sub[v, F.mul[c, prow]]
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = F.mul[F.inv[v[pc]], v]
        if self.rows.shape[0]:
            coef = self.rows[:, pc]
            hit = np.flatnonzero(coef)
            if hit.size:
                self.rows[hit] = F.sub[self.rows[hit], F.mul[coef[hit][:, None], v[None, :]]]
        self.rows = np.vstack([self.rows, v[None, :]])
        self.pivots.append(pc)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _series_1pt(fam: HermitianFamily, s_values: list[int]) -> dict[int, tuple[int, int]]:
    q = fam.q
    T = fam.tower
    basis = _IncrementalRREF(T.Fq2, fam.n)
    done: set = set()
    out = {}
    for s in range(max(s_values) + 1):
        for e in monomial_basis(q, s).exponents:
            if e not in done:
                basis.add(fam.monomial_values([e])[0])
                done.add(e)
        if s not in s_values:
            continue
        k = basis.rank
        if k == fam.n:
            out[s] = (k, fam.n)
            continue
        H = nullspace_from_rref(MatrixF(T.Fq2, basis.rows), basis.pivots)
        out[s] = (k, fam.n - rank(expand_parity(T, H)))
    return out


def _series_generic(fam: HermitianFamily, gamma: str, s_values: list[int]) -> dict[int, tuple[int, int]]:
    out = {}
    for s in s_values:
        rec = subfield_subcode_dim(CodeSpec(fam.q, fam.r, gamma, s), fam)
        out[s] = (rec.k, rec.subcode_dim)
    return out


def _worker(args):
    q, r, gamma, place_index, s_values = args
    fam = family(q, r, place_index)
    if gamma == "1pt":
        return _series_1pt(fam, s_values)
    return _series_generic(fam, gamma, s_values)


def dim_records(q: int, r: int, gamma: str, *, place_index: int = 0,
                workers: int = 1) -> dict[int, tuple[int, int]]:
    """{s: (k, subcode dim)} for s = 0..alpha."""
    if gamma not in GAMMAS:
        raise ValueError(f"unknown divisor type {gamma!r}")
    fam = family(q, r, place_index)
    s_all = list(range(fam.alpha(gamma) + 1))
    log.info("dimension series q=%d r=%d %s: %d values of s", q, r, gamma, len(s_all))
    if workers <= 1:
        return _worker((q, r, gamma, place_index, s_all))
    from concurrent.futures import ProcessPoolExecutor
    chunks = [s_all[i::workers] for i in range(workers)]
    out: dict = {}
    with ProcessPoolExecutor(workers) as pool:
        for part in pool.map(_worker, [(q, r, gamma, place_index, c) for c in chunks]):
            out.update(part)
    return dict(sorted(out.items()))


def dim_series(q: int, r: int, gamma: str, *, place_index: int = 0, workers: int = 1) -> RateSeries:
    recs = dim_records(q, r, gamma, place_index=place_index, workers=workers)
    series = RateSeries(q, r, gamma, tuple(recs[s][1] for s in sorted(recs)))
    series.check()
    return series


def brute_force_subcode_dim(spec: CodeSpec, fam: HermitianFamily | None = None, max_k: int = 10) -> int:
    """log_r #{c in C : c in F_r^n} by enumerating all q^{2k} codewords."""
    fam = fam or family(spec.q, spec.r)
    T = fam.tower
    F = T.Fq2
    R, k, _ = rref_rank(eval_matrix(spec, fam))
    if k > max_k:
        raise ValueError(f"k = {k} too large to enumerate")
    words = np.zeros((1, fam.n), dtype=np.int64)
    scalars = np.arange(F.order)
    for g in R.data[:k]:
        prod = F.mul[scalars[:, None], g[None, :]]  # (Q, n)
        words = F.add[words[:, None, :], prod[None, :, :]].reshape(-1, fam.n)
    in_sub = np.isin(words, T.embed_r).all(axis=1)
    count = int(in_sub.sum())
    d = round(np.log(count) / np.log(T.r))
    if T.r**d != count:
        raise InconsistencyError(f"subcode size {count} is not a power of {T.r}")
    return d
