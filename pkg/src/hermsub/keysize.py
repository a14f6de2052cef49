"""McEliece public-key size of subfield subcodes and its extreme value estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distfit import DistModel, gumbel_cdf_pdf, gumbel_moment_fit, mle_fit
from .rate_stats import RateSeries, empirical_sample, extended_rate, moments


def key_bits(r: int, n: int, k: int) -> float:
    """log2(r) k (n - k): a standard-form generator or parity-check matrix."""
    if r < 2:
        raise ValueError("field order must be at least 2")
    if not 0 <= k <= n:
        raise ValueError(f"dimension {k} outside [0, {n}]")
    return math.log2(r) * k * (n - k)


def key_symbols(n: int, k: int) -> int:
    return k * (n - k)


@dataclass(frozen=True)
class KeySizeProfile:
    series: RateSeries
    model: DistModel
    s: tuple[int, ...]
    rate: tuple[Fraction, ...]
    exact_bits: tuple[float, ...]
    F: tuple[float, ...]
    estimated_bits: tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["s,R,exact_bits,F,estimated_bits"]
        for row in zip(self.s, self.rate, self.exact_bits, self.F, self.estimated_bits):
            s, R, eb, F, est = row
            lines.append(f"{s},{float(R):.6f},{eb:.6f},{F:.6f},{est:.6f}")
        return "\n".join(lines) + "\n"

    def argmax_exact(self) -> int:
        return self.s[int(np.argmax(self.exact_bits))]

    def argmax_estimated(self) -> int:
        return self.s[int(np.argmax(self.estimated_bits))]


def default_model(series: RateSeries, method: str = "moment") -> DistModel:
    """Extreme value model for a series: moment fit (default) or MLE on the jumps sample.

    The moment fit places the minimum-type F at the series' own mean.
    """
    if method == "moment":
        m = moments(series)
        return DistModel("extreme_value", gumbel_moment_fit(float(m.E), m.D, "min"))
    if method == "mle":
        return mle_fit("extreme_value", empirical_sample(series, "jumps")).model
    raise ValueError(f"unknown method {method!r}")


def keysize_profile(series: RateSeries, fitted: DistModel | None = None) -> KeySizeProfile:
    """Exact log2(r) n^2 R(1-R) and its estimate log2(r) n^2 F(1-F) over s = 0..alpha."""
    fitted = fitted or default_model(series)
    if fitted.family != "extreme_value":
        raise ValueError("key-size estimate needs an extreme value model")
    n, lr = series.n, math.log2(series.r)
    s = tuple(range(series.alpha + 1))
    R = tuple(extended_rate(series, x) for x in s)
    exact = tuple(lr * n * n * float(x * (1 - x)) for x in R)
    F = gumbel_cdf_pdf(np.array(s, dtype=float), *fitted.params)[0]
    est = tuple(float(v) for v in lr * n * n * F * (1 - F))
    return KeySizeProfile(series, fitted, s, R, exact, tuple(float(v) for v in F), est)


def estimated_peak(model: DistModel) -> float:
    """x with F(x) = 1/2, where F(1-F) peaks."""
    loc, scale = model.params
    return loc + scale * math.log(math.log(2.0))
