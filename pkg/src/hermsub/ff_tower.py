"""Finite field arithmetic for the tower F_r <= F_{q^2} <= F_{q^6}.

Elements are plain Python ints: the little-endian base-p packing of the
coefficient vector over the prime field.  The same integer form is used in
every CSV/JSON artifact.  Flat fields (``GF``) carry numpy operation tables;
the sextic field is a cubic extension of F_{q^2} (``CubicExt``) whose
arithmetic is built on those tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np


class FieldError(ValueError):
    """Raised on invalid field construction or mixed-field operands."""


class InconsistencyError(RuntimeError):
    """An internal invariant of a deterministic construction was violated."""


# ---------------------------------------------------------------------------
# integer helpers


def factor_prime_power(n: int) -> tuple[int, int]:
    """Return (p, k) with n == p**k, or raise FieldError."""
    if n < 2:
        raise FieldError(f"{n} is not a prime power")
    p = next(d for d in range(2, n + 1) if n % d == 0)
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise FieldError(f"{n} is not a prime power")
    return p, k


def to_digits(x: int, p: int, d: int) -> list[int]:
    out = []
    for _ in range(d):
        x, c = divmod(x, p)
        out.append(c)
    return out


def from_digits(coeffs: Sequence[int], p: int) -> int:
    x = 0
    for c in reversed(coeffs):
        x = x * p + int(c)
    return x


# ---------------------------------------------------------------------------
# dense polynomials over F_p (coefficient lists, low degree first)


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _poly_trim(a)
    return a


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= d/2."""
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] % p == 0:
        return False
    for k in range(1, d // 2 + 1):
        for low in range(p**k):
            div = to_digits(low, p, k) + [1]
            if not _poly_mod(coeffs, div, p):
                return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Monic irreducible of degree d with the smallest packed integer encoding."""
    for low in range(p**d):
        coeffs = to_digits(low, p, d) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise InconsistencyError(f"no irreducible polynomial of degree {d} over F_{p}")


# ---------------------------------------------------------------------------
# flat fields


class GF:
    """The field F_{p^d} = F_p[X]/(modulus), elements as packed ints.

    Operation tables are numpy arrays indexed by element integers, so whole
    matrices can be multiplied with a single fancy-indexing expression.
    """

    def __init__(self, p: int, d: int, modulus: Sequence[int] | None = None):
        if factor_prime_power(p) != (p, 1):
            raise FieldError(f"characteristic {p} is not prime")
        if d < 1:
            raise FieldError("extension degree must be positive")
        modulus = tuple(modulus) if modulus is not None else smallest_irreducible(p, d)
        if len(modulus) != d + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is not monic irreducible of degree {d}")
        self.p = p
        self.d = d
        self.modulus = modulus
        self.order = p**d
        self._build_tables()

    def _build_tables(self) -> None:
        p, d, Q = self.p, self.d, self.order
        digits = np.array([to_digits(x, p, d) for x in range(Q)], dtype=np.int64)
        weights = p ** np.arange(d, dtype=np.int64)
        self.digits = digits
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.sub = self.add[:, self.neg]
        # multiplication by X: shift coefficients and reduce by the modulus
        xmul = np.empty(Q, dtype=np.int64)
        red = np.array(self.modulus[:-1], dtype=np.int64)
        for x in range(Q):
            c = digits[x]
            top = c[-1]
            shifted = np.concatenate(([0], c[:-1]))
            xmul[x] = ((shifted - top * red) % p) @ weights
        # mul[a, b] = sum_i a_i X^i b, built column-block by column-block
        mul = np.zeros((Q, Q), dtype=np.int64)
        power = np.arange(Q, dtype=np.int64)  # X^i * b for all b, starting i=0
        for i in range(d):
            for c in range(1, p):
                rows = digits[:, i] == c
                term = power
                for _ in range(c - 1):
                    term = self.add[term, power]
                mul[rows] = self.add[mul[rows], term[None, :]]
            power = xmul[power]
        self.mul = mul
        inv = np.zeros(Q, dtype=np.int64)
        nz_rows, nz_cols = np.nonzero(mul[1:, 1:] == 1)
        inv[nz_rows + 1] = nz_cols + 1
        self.inv = inv
        for t in ("add", "neg", "sub", "mul", "inv"):
            arr = getattr(self, t).astype(np.int32)
            arr.setflags(write=False)
            setattr(self, t, arr)

    # -- scalar operations -------------------------------------------------

    def e_add(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def e_sub(self, a: int, b: int) -> int:
        return int(self.sub[a, b])

    def e_mul(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def e_neg(self, a: int) -> int:
        return int(self.neg[a])

    def e_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.inv[a])

    def e_pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.e_inv(a), -k
        result, base = 1, a
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def pow_table(self, k: int) -> np.ndarray:
        """x**k for every element x, vectorized square-and-multiply."""
        base = np.arange(self.order, dtype=np.int64)
        result = np.ones(self.order, dtype=np.int64)
        while k:
            if k & 1:
                result = self.mul[result, base]
            base = self.mul[base, base]
            k >>= 1
        return result

    def elem(self, x: int) -> "FieldElem":
        return FieldElem(self, int(x))

    @property
    def generator(self) -> int:
        """The class of X (not necessarily primitive)."""
        return self.p if self.d > 1 else 1

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.d}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def gf(order: int) -> GF:
    """Shared flat field of the given order with the canonical modulus."""
    p, d = factor_prime_power(order)
    return GF(p, d)


# ---------------------------------------------------------------------------
# cubic extension F_{Q^3} over a flat field F_Q


class CubicExt:
    """F_{Q^3} = F_Q[T]/(T^3 + c2 T^2 + c1 T + c0).

    Elements pack as a0 + a1*Q + a2*Q^2 with a_i in F_Q, which is the same
    base-p digit packing as a flat field of degree 3d.  Ints below Q are the
    embedded copy of the base field.
    """

    def __init__(self, base: GF, modulus: Sequence[int] | None = None):
        self.base = base
        self.p = base.p
        self.d = 3 * base.d
        Q = base.order
        self.order = Q**3
        if modulus is None:
            modulus = self._smallest_cubic()
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != 3 or self._has_root(modulus):
            raise FieldError(f"cubic {modulus} is reducible over F_{Q}")
        self.modulus = modulus  # (c0, c1, c2); the T^3 coefficient is 1
        self._frob_t = None
        self._frob_t = (self.e_pow(Q, Q), self.e_pow(self.e_pow(Q, Q), 2))

    def _has_root(self, c: Sequence[int]) -> bool:
        B = self.base
        x = np.arange(B.order)
        x2 = B.mul[x, x]
        val = B.add[B.add[B.mul[x2, x], B.mul[c[2], x2]], B.add[B.mul[c[1], x], c[0]]]
        return bool(np.any(val == 0))

    def _smallest_cubic(self) -> tuple[int, int, int]:
        Q = self.base.order
        for low in range(Q**3):
            c = (low % Q, (low // Q) % Q, low // (Q * Q))
            if not self._has_root(c):
                return c
        raise InconsistencyError("no irreducible cubic found")

    def split(self, x: int) -> tuple[int, int, int]:
        Q = self.base.order
        return x % Q, (x // Q) % Q, x // (Q * Q)

    def join(self, a0: int, a1: int, a2: int) -> int:
        Q = self.base.order
        return int(a0) + Q * (int(a1) + Q * int(a2))

    def in_base(self, x: int) -> bool:
        return 0 <= x < self.base.order

    def to_base(self, x: int) -> int:
        if not self.in_base(x):
            raise InconsistencyError(f"element {x} is not in the base field F_{self.base.order}")
        return x

    def e_add(self, x: int, y: int) -> int:
        A = self.base.add
        a, b = self.split(x), self.split(y)
        return self.join(A[a[0], b[0]], A[a[1], b[1]], A[a[2], b[2]])

    def e_neg(self, x: int) -> int:
        N = self.base.neg
        a = self.split(x)
        return self.join(N[a[0]], N[a[1]], N[a[2]])

    def e_sub(self, x: int, y: int) -> int:
        return self.e_add(x, self.e_neg(y))

    def e_mul(self, x: int, y: int) -> int:
        B = self.base
        A, M = B.add, B.mul
        a, b = self.split(x), self.split(y)
        # schoolbook product, degree <= 4 in T
        c = [0] * 5
        for i in range(3):
            if a[i] == 0:
                continue
            for j in range(3):
                if b[j]:
                    c[i + j] = A[c[i + j], M[a[i], b[j]]]
        m0, m1, m2 = self.modulus
        for k in (4, 3):
            t = c[k]
            if t:
                # T^k = -T^{k-3}(c2 T^2 + c1 T + c0)
                nt = B.neg[t]
                c[k - 1] = A[c[k - 1], M[nt, m2]]
                c[k - 2] = A[c[k - 2], M[nt, m1]]
                c[k - 3] = A[c[k - 3], M[nt, m0]]
                c[k] = 0
        return self.join(c[0], c[1], c[2])

    def e_scale(self, k: int, x: int) -> int:
        """Multiply by a base-field scalar."""
        M = self.base.mul
        a = self.split(x)
        return self.join(M[k, a[0]], M[k, a[1]], M[k, a[2]])

    def e_pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.e_inv(x), -k
        result, base = 1, x
        while k:
            if k & 1:
                result = self.e_mul(result, base)
            base = self.e_mul(base, base)
            k >>= 1
        return result

    def e_inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.e_pow(x, self.order - 2)

    def frob(self, x: int) -> int:
        """x -> x^Q, computed from the images of T and T^2."""
        if self._frob_t is None:
            return self.e_pow(x, self.base.order)
        a0, a1, a2 = self.split(x)
        t1, t2 = self._frob_t
        return self.e_add(a0, self.e_add(self.e_scale(a1, t1), self.e_scale(a2, t2)))

    def elem(self, x: int) -> "FieldElem":
        return FieldElem(self, int(x))

    def __repr__(self):
        return f"CubicExt(F_{self.base.order}, modulus={self.modulus})"


# ---------------------------------------------------------------------------
# element wrapper for interactive use


@dataclass(frozen=True)
class FieldElem:
    """Element bound to its field; supports + - * / ** with field checks."""

    field: object
    value: int

    @property
    def coeffs(self) -> list[int]:
        return to_digits(self.value, self.field.p, self.field.d)

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field is not self.field:
            raise FieldError("operands belong to different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.e_add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.e_sub(self.value, other.value))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.e_mul(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return FieldElem(self.field, self.field.e_mul(self.value, self.field.e_inv(other.value)))

    def __neg__(self):
        return FieldElem(self.field, self.field.e_neg(self.value))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.e_pow(self.value, k))

    def inverse(self):
        return FieldElem(self.field, self.field.e_inv(self.value))

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# the tower


@dataclass(frozen=True, eq=False)
class TowerContext:
    """F_r <= F_{q^2} <= F_{q^6} with the fixed data used everywhere else.

    Attributes:
        q, r: the Hermitian parameter and the subfield order.
        h: degree [F_{q^2} : F_r].
        Fr, Fq2, Fq6: the three fields.
        embed_r: array mapping F_r ints to their images in F_{q^2}.
        basis: F_r-basis of F_{q^2}, ``basis[0] == 1`` and basis[c] = X^c.
        coords: (q^2, h) array of F_r coordinates of every F_{q^2} element.
        trace: array of Tr_{F_{q^2}/F_r} values, given as F_r ints.
    """

    q: int
    r: int
    h: int
    Fr: GF
    Fq2: GF
    Fq6: CubicExt
    embed_r: np.ndarray = field(repr=False)
    basis: tuple[int, ...] = field(repr=False)
    coords: np.ndarray = field(repr=False)
    trace: np.ndarray = field(repr=False)

    @cached_property
    def restrict_r(self) -> dict[int, int]:
        return {int(v): i for i, v in enumerate(self.embed_r)}

    def to_r(self, x: int) -> int:
        """Down-convert an element of the embedded F_r to F_r coordinates."""
        try:
            return self.restrict_r[int(x)]
        except KeyError:
            raise InconsistencyError(f"{x} is not in the embedded F_{self.r}") from None

    def trace_rel(self, x: int) -> int:
        """x + x^r + ... + x^{r^{h-1}}, returned as an F_r int."""
        return int(self.trace[x])

    def subfield_coords(self, x: int) -> np.ndarray:
        return self.coords[x].copy()

    def reassemble(self, c: Sequence[int]) -> int:
        F = self.Fq2
        x = 0
        for ci, e in zip(c, self.basis):
            x = int(F.add[x, F.mul[self.embed_r[ci], e]])
        return x

    def frob6(self, x: int) -> int:
        """The q^2-power Frobenius on F_{q^6}."""
        return self.Fq6.frob(x)


@lru_cache(maxsize=None)
def build_tower(q: int, r: int) -> TowerContext:
    """Construct the tower for Hermitian parameter q and subfield order r.

    Raises:
        FieldError: if q or r is not a prime power, or F_r is not a subfield
            of F_{q^2}.
    """
    p, m = factor_prime_power(q)
    pr, a = factor_prime_power(r)
    if pr != p or (2 * m) % a != 0:
        raise FieldError(f"F_{r} is not a subfield of F_{q * q}")
    h = 2 * m // a
    Fq2 = gf(q * q)
    Fr = gf(r)
    Fq6 = _cubic_over(q * q)

    # embedding F_r -> F_{q^2}: send Fr's generator to the smallest root of its modulus
    if a == 1:
        embed = np.arange(r, dtype=np.int64)
    else:
        xs = np.arange(Fq2.order)
        val = np.zeros(Fq2.order, dtype=np.int64)
        for c in reversed(Fr.modulus):
            val = Fq2.add[Fq2.mul[val, xs], c]
        roots = np.nonzero(val == 0)[0]
        if roots.size == 0:
            raise InconsistencyError("F_r modulus has no root in F_{q^2}")
        rho = int(roots[0])
        embed = np.zeros(r, dtype=np.int64)
        powers = [Fq2.e_pow(rho, i) for i in range(a)]
        for x in range(r):
            acc = 0
            for ci, pw in zip(to_digits(x, p, a), powers):
                for _ in range(ci):
                    acc = Fq2.e_add(acc, pw)
            embed[x] = acc
    embed.setflags(write=False)

    basis = tuple(Fq2.e_pow(Fq2.generator, c) for c in range(h))
    coords = np.full((Fq2.order, h), -1, dtype=np.int64)
    for packed in range(r**h):
        c = to_digits(packed, r, h)
        x = 0
        for ci, e in zip(c, basis):
            x = Fq2.e_add(x, Fq2.e_mul(int(embed[ci]), e))
        coords[x] = c
    if np.any(coords < 0):
        raise InconsistencyError("chosen elements do not form an F_r-basis")
    coords.setflags(write=False)

    # trace as a vectorized sum of Frobenius powers
    restrict = {int(v): i for i, v in enumerate(embed)}
    acc = np.zeros(Fq2.order, dtype=np.int64)
    term = np.arange(Fq2.order, dtype=np.int64)
    fr = Fq2.pow_table(r)
    for _ in range(h):
        acc = Fq2.add[acc, term]
        term = fr[term]
    trace = np.array([restrict[int(v)] for v in acc], dtype=np.int64)
    trace.setflags(write=False)

    return TowerContext(q=q, r=r, h=h, Fr=Fr, Fq2=Fq2, Fq6=Fq6, embed_r=embed,
                        basis=basis, coords=coords, trace=trace)


@lru_cache(maxsize=None)
def _cubic_over(order: int) -> CubicExt:
    return CubicExt(gf(order))
