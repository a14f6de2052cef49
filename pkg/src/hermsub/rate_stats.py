"""The extended rate function of a subfield-subcode family as a distribution.

All moment arithmetic is exact (``fractions.Fraction``); floats appear only
in renderings.
"""

from __future__ import annotations

import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

GAMMAS = ("1pt", "deg3")
CSV_HEADER = "q,r,gamma,s,dim"


def deg_of(gamma: str) -> int:
    if gamma not in GAMMAS:
        raise ValueError(f"unknown divisor type {gamma!r}; expected one of {GAMMAS}")
    return 1 if gamma == "1pt" else 3


def alpha_of(n: int, g: int, deg_G: int) -> int:
    """First s with s deg G > n + 2g - 2, where C_L(D, sG) is the full space.

    Equals ceil((n + 2g - 2)/deg G) unless deg G divides n + 2g - 2; then the
    code at s = (n + 2g - 2)/deg G still misses one dimension.
    """
    return (n + 2 * g - 2) // deg_G + 1


@dataclass(frozen=True)
class RateSeries:
    """Subcode dimensions dims[s] for s = 0..alpha of one (q, r, gamma)."""

    q: int
    r: int
    gamma: str
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n(self) -> int:
        return self.q**3

    @property
    def g(self) -> int:
        return self.q * (self.q - 1) // 2

    @property
    def deg_G(self) -> int:
        return deg_of(self.gamma)

    @property
    def alpha(self) -> int:
        return alpha_of(self.n, self.g, self.deg_G)

    @property
    def complete(self) -> bool:
        return len(self.dims) == self.alpha + 1

    def check(self) -> None:
        """Raise ValueError unless the series is complete, monotone and ends at n."""
        if not self.complete:
            raise ValueError(f"series has {len(self.dims)} values, expected {self.alpha + 1}")
        if self.dims[0] < 1:
            raise ValueError("dims[0] must be at least 1")
        if any(b < a for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError("dimension series is not monotone")
        if self.dims[-1] != self.n:
            raise ValueError(f"dims[alpha] = {self.dims[-1]} != n = {self.n}")

    def rate(self, s: int) -> Fraction:
        return extended_rate(self, s)

    # -- CSV ---------------------------------------------------------------

    def to_csv(self) -> str:
        lines = [CSV_HEADER] + [f"{self.q},{self.r},{self.gamma},{s},{d}"
                                for s, d in enumerate(self.dims)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "RateSeries":
        rows = [ln.strip() for ln in io.StringIO(text) if ln.strip()]
        if not rows or rows[0] != CSV_HEADER:
            raise ValueError("bad rate-series header")
        body = [r.split(",") for r in rows[1:]]
        if not body:
            raise ValueError("empty rate series")
        q, r, gamma = int(body[0][0]), int(body[0][1]), body[0][2]
        dims = []
        for i, (qq, rr, gg, s, d) in enumerate(body):
            if (int(qq), int(rr), gg) != (q, r, gamma) or int(s) != i:
                raise ValueError(f"inconsistent rate-series row {i}")
            dims.append(int(d))
        deg_of(gamma)
        return cls(q, r, gamma, tuple(dims))


def extended_rate(series: RateSeries, x: float) -> Fraction:
    """R(x): 0 left of 0, dims[floor x]/n on [0, alpha), 1 from alpha on."""
    if x < 0:
        return Fraction(0)
    if x >= series.alpha:
        return Fraction(1)
    return Fraction(series.dims[math.floor(x)], series.n)


@dataclass(frozen=True)
class MomentSummary:
    E: Fraction
    E2: Fraction

    @property
    def Var(self) -> Fraction:
        return self.E2 - self.E**2

    @property
    def D(self) -> float:
        return math.sqrt(self.Var)

    def render(self, digits: int = 2) -> dict:
        return {"E": f"{float(self.E):.{digits}f}", "Var": f"{float(self.Var):.{digits}f}",
                "D": f"{self.D:.{digits}f}"}


def moments(series: RateSeries) -> MomentSummary:
    """E = sum (1 - R(s)), E2 = sum (2s+1)(1 - R(s)), s = 0..alpha."""
    if not series.complete:
        raise ValueError("moments need the series through alpha")
    E = Fraction(0)
    E2 = Fraction(0)
    for s in range(series.alpha + 1):
        tail = 1 - extended_rate(series, s)
        E += tail
        E2 += (2 * s + 1) * tail
    out = MomentSummary(E, E2)
    if out.Var < 0:
        raise ArithmeticError("negative variance")
    return out


SAMPLE_MODES = ("jumps", "jumps_positive")


def empirical_sample(series: RateSeries, mode: str = "jumps") -> Counter:
    """Multiset whose empirical CDF is R: value s with multiplicity dims[s] - dims[s-1].

    ``jumps_positive`` drops the mass at s = 0.
    """
    if mode not in SAMPLE_MODES:
        raise ValueError(f"unknown sample mode {mode!r}")
    if not series.complete:
        raise ValueError("sample needs the series through alpha")
    out: Counter = Counter()
    prev = 0
    for s, d in enumerate(series.dims):
        if d > prev:
            out[s] = d - prev
        prev = d
    if mode == "jumps_positive":
        out.pop(0, None)
    return out


def ratios(series: RateSeries, summary: MomentSummary | None = None) -> tuple[Fraction, float]:
    """(E deg G / n, D deg G / n): E-ratio exact, D-ratio float."""
    summary = summary or moments(series)
    scale = Fraction(series.deg_G, series.n)
    return summary.E * scale, summary.D * float(scale)


def moments_json(series: RateSeries) -> dict:
    m = moments(series)
    er, dr = ratios(series, m)
    return {
        "q": series.q, "r": series.r, "gamma": series.gamma,
        "E": f"{float(m.E):.2f}", "E2": f"{float(m.E2):.2f}",
        "Var": f"{float(m.Var):.2f}", "D": f"{m.D:.2f}",
        "E_ratio": f"{float(er):.3f}", "D_ratio": f"{dr:.3f}",
        "exact": {"E": str(m.E), "E2": str(m.E2), "Var": str(m.Var)},
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
