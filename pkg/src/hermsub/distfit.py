"""Two-parameter distribution fitting: extreme value first, plus the usual rivals.

The extreme value family is the minimum-type form

    F(x; loc, scale) = 1 - exp(-exp((x - loc)/scale)),

and every sample is a weighted multiset (value -> multiplicity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.special import digamma, gammaln, polygamma

EULER_GAMMA = 0.57721566490153286061
SQRT6_PI = math.sqrt(6.0) / math.pi

FAMILIES = ("extreme_value", "normal", "gamma", "logistic", "weibull",
            "exponential", "lognormal", "rayleigh", "uniform")
N_PARAMS = {f: 2 for f in FAMILIES} | {"exponential": 1, "rayleigh": 1}
PARAM_NAMES = {
    "extreme_value": ("loc", "scale"),
    "normal": ("mu", "sigma"),
    "gamma": ("shape", "scale"),
    "logistic": ("loc", "scale"),
    "weibull": ("scale", "shape"),
    "exponential": ("rate",),
    "lognormal": ("mu", "sigma"),
    "rayleigh": ("sigma",),
    "uniform": ("lower", "upper"),
}
POSITIVE_SUPPORT = {"gamma", "weibull", "lognormal", "rayleigh"}
MAX_ITER = 200
GRAD_TOL = 1e-9


# ---------------------------------------------------------------------------
# extreme value helpers


def gumbel_cdf_pdf(x, loc: float, scale: float):
    """(F, f) of the minimum-type extreme value distribution."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    z = (np.asarray(x, dtype=float) - loc) / scale
    with np.errstate(over="ignore"):
        ez = np.exp(z)
        F = -np.expm1(-ez)
        f = np.exp(z - ez) / scale
    return F, f


def gumbel_moment_fit(mean: float, sd: float, convention: str = "max") -> tuple[float, float]:
    """(loc, scale) from a mean and standard deviation.

    ``max``: loc = mean - sqrt(6) gamma sd / pi, i.e. mean = loc + gamma scale
    (the maximum-type relation).
    ``min``: loc = mean + sqrt(6) gamma sd / pi, the relation that holds for the
    minimum-type F above.
    """
    if not sd > 0:
        raise ValueError("standard deviation must be positive")
    scale = SQRT6_PI * sd
    shift = SQRT6_PI * EULER_GAMMA * sd
    if convention == "max":
        return mean - shift, scale
    if convention == "min":
        return mean + shift, scale
    raise ValueError(f"unknown convention {convention!r}")


def gumbel_mean_var(loc: float, scale: float, convention: str = "max") -> tuple[float, float]:
    sign = {"max": 1.0, "min": -1.0}[convention]
    return loc + sign * EULER_GAMMA * scale, math.pi**2 * scale**2 / 6.0


# ---------------------------------------------------------------------------
# samples


def as_weighted(sample) -> tuple[np.ndarray, np.ndarray]:
    """Normalize a Mapping {value: count} or a sequence of values."""
    if isinstance(sample, Mapping):
        items = sorted((float(k), float(v)) for k, v in sample.items() if v)
        x = np.array([k for k, _ in items])
        w = np.array([v for _, v in items])
    else:
        x, counts = np.unique(np.asarray(sample, dtype=float), return_counts=True)
        w = counts.astype(float)
    if x.size == 0:
        raise ValueError("sample is empty")
    return x, w


# ---------------------------------------------------------------------------
# log-likelihoods and gradients, (x, w) weighted


def _ll_ev(p, x, w):
    loc, b = p
    z = (x - loc) / b
    return float(np.sum(w * (z - np.exp(z) - math.log(b))))


def _gr_ev(p, x, w):
    loc, b = p
    z = (x - loc) / b
    ez = np.exp(z)
    N = w.sum()
    return np.array([(np.sum(w * ez) - N) / b,
                     (-N - np.sum(w * z) + np.sum(w * z * ez)) / b])


def _ll_normal(p, x, w):
    mu, s = p
    return float(np.sum(w * (-0.5 * ((x - mu) / s) ** 2 - math.log(s) - 0.5 * math.log(2 * math.pi))))


def _gr_normal(p, x, w):
    mu, s = p
    d = x - mu
    return np.array([np.sum(w * d) / s**2, np.sum(w * (d**2 / s**3 - 1 / s))])


def _ll_gamma(p, x, w):
    k, th = p
    return float(np.sum(w * ((k - 1) * np.log(x) - x / th - gammaln(k) - k * math.log(th))))


def _gr_gamma(p, x, w):
    k, th = p
    N = w.sum()
    return np.array([np.sum(w * np.log(x)) - N * (digamma(k) + math.log(th)),
                     np.sum(w * x) / th**2 - N * k / th])


def _ll_logistic(p, x, w):
    m, s = p
    z = (x - m) / s
    return float(np.sum(w * (-z - 2 * np.logaddexp(0, -z) - math.log(s))))


def _gr_logistic(p, x, w):
    m, s = p
    z = (x - m) / s
    t = np.tanh(z / 2)  # 1 - 2/(1+e^z)
    return np.array([np.sum(w * t) / s, np.sum(w * (z * t - 1)) / s])


def _ll_weibull(p, x, w):
    lam, k = p
    y = x / lam
    return float(np.sum(w * (math.log(k / lam) + (k - 1) * np.log(y) - y**k)))


def _gr_weibull(p, x, w):
    lam, k = p
    y = x / lam
    yk = y**k
    N = w.sum()
    return np.array([k / lam * (np.sum(w * yk) - N),
                     N / k + np.sum(w * np.log(y) * (1 - yk))])


def _ll_exponential(p, x, w):
    (lam,) = p
    return float(np.sum(w * (math.log(lam) - lam * x)))


def _gr_exponential(p, x, w):
    (lam,) = p
    return np.array([w.sum() / lam - np.sum(w * x)])


def _ll_lognormal(p, x, w):
    mu, s = p
    lx = np.log(x)
    return float(np.sum(w * (-0.5 * ((lx - mu) / s) ** 2 - math.log(s) - lx - 0.5 * math.log(2 * math.pi))))


def _gr_lognormal(p, x, w):
    mu, s = p
    d = np.log(x) - mu
    return np.array([np.sum(w * d) / s**2, np.sum(w * (d**2 / s**3 - 1 / s))])


def _ll_rayleigh(p, x, w):
    (s,) = p
    return float(np.sum(w * (np.log(x) - 2 * math.log(s) - x**2 / (2 * s**2))))


def _gr_rayleigh(p, x, w):
    (s,) = p
    return np.array([np.sum(w * (-2 / s + x**2 / s**3))])


def _ll_uniform(p, x, w):
    a, b = p
    if b <= a or x.min() < a or x.max() > b:
        return -math.inf
    return float(-w.sum() * math.log(b - a))


def _gr_uniform(p, x, w):
    # boundary maximum; the one-sided derivatives do not vanish
    a, b = p
    N = w.sum()
    return np.array([N / (b - a), -N / (b - a)])


LOGLIK: dict[str, Callable] = {
    "extreme_value": _ll_ev, "normal": _ll_normal, "gamma": _ll_gamma,
    "logistic": _ll_logistic, "weibull": _ll_weibull, "exponential": _ll_exponential,
    "lognormal": _ll_lognormal, "rayleigh": _ll_rayleigh, "uniform": _ll_uniform,
}
GRADIENT: dict[str, Callable] = {
    "extreme_value": _gr_ev, "normal": _gr_normal, "gamma": _gr_gamma,
    "logistic": _gr_logistic, "weibull": _gr_weibull, "exponential": _gr_exponential,
    "lognormal": _gr_lognormal, "rayleigh": _gr_rayleigh, "uniform": _gr_uniform,
}


def pdf(family: str, params: Sequence[float], x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        out[i] = math.exp(LOGLIK[family](params, np.array([xi]), np.array([1.0])))
    return out


def cdf(family: str, params: Sequence[float], x) -> np.ndarray:
    from scipy import stats
    x = np.asarray(x, dtype=float)
    a, b = (list(params) + [None])[:2]
    if family == "extreme_value":
        return gumbel_cdf_pdf(x, a, b)[0]
    dist = {
        "normal": lambda: stats.norm(a, b),
        "gamma": lambda: stats.gamma(a, scale=b),
        "logistic": lambda: stats.logistic(a, b),
        "weibull": lambda: stats.weibull_min(b, scale=a),
        "exponential": lambda: stats.expon(scale=1 / a),
        "lognormal": lambda: stats.lognorm(b, scale=math.exp(a)),
        "rayleigh": lambda: stats.rayleigh(scale=a),
        "uniform": lambda: stats.uniform(a, b - a),
    }[family]()
    return dist.cdf(x)


# ---------------------------------------------------------------------------
# optimizers


def _root_1d(g: Callable[[float], float], dg: Callable[[float], float],
             lo: float, hi: float, x0: float) -> tuple[float, int]:
    """Newton's method kept inside a sign-change bracket, bisecting on bad steps."""
    glo = g(lo)
    x = min(max(x0, lo), hi)
    for it in range(1, MAX_ITER + 1):
        gx = g(x)
        if gx == 0:
            return x, it
        if (gx > 0) == (glo > 0):
            lo, glo = x, gx
        else:
            hi = x
        d = dg(x)
        step = x - gx / d if d != 0 else None
        x_new = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-15 * max(1.0, abs(x)):
            return x_new, it
        x = x_new
    return x, MAX_ITER


def _bracket_up(g: Callable[[float], float], lo: float, start: float) -> float:
    """Grow ``start`` until g changes sign relative to g(lo)."""
    hi = start
    s0 = g(lo) > 0
    for _ in range(200):
        if (g(hi) > 0) != s0:
            return hi
        hi *= 2
    raise ArithmeticError("could not bracket a root")


def _newton_2d(family: str, p0: np.ndarray, x, w, positive: Sequence[int]) -> tuple[np.ndarray, int]:
    """Damped Newton ascent with a central finite-difference Hessian."""
    ll, gr = LOGLIK[family], GRADIENT[family]
    p = np.array(p0, dtype=float)
    f = ll(p, x, w)
    for it in range(1, MAX_ITER + 1):
        g = gr(p, x, w)
        if np.linalg.norm(g) < GRAD_TOL:
            return p, it
        Hm = np.empty((len(p), len(p)))
        for j in range(len(p)):
            hj = 1e-5 * max(1.0, abs(p[j]))
            e = np.zeros(len(p))
            e[j] = hj
            Hm[:, j] = (gr(p + e, x, w) - gr(p - e, x, w)) / (2 * hj)
        Hm = 0.5 * (Hm + Hm.T)
        try:
            step = -np.linalg.solve(Hm, g)
        except np.linalg.LinAlgError:
            step = g
        if g @ step <= 0:  # not an ascent direction: fall back to gradient
            step = g / max(1.0, np.linalg.norm(g))
        t = 1.0
        for _ in range(60):
            cand = p + t * step
            if all(cand[i] > 0 for i in positive):
                fc = ll(cand, x, w)
                if fc >= f - 1e-12 * abs(f):
                    break
            t *= 0.5
        else:
            return p, it
        p, f = cand, fc
    return p, MAX_ITER


# ---------------------------------------------------------------------------
# fitting


@dataclass
class DistModel:
    family: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        self.params = tuple(float(v) for v in self.params)
        if len(self.params) != N_PARAMS[self.family]:
            raise ValueError("wrong parameter count")
        if self.family == "uniform":
            if not self.params[0] < self.params[1]:
                raise ValueError("uniform needs lower < upper")
        else:
            scale_idx = {"extreme_value": [1], "normal": [1], "gamma": [0, 1], "logistic": [1],
                         "weibull": [0, 1], "exponential": [0], "lognormal": [1],
                         "rayleigh": [0]}[self.family]
            if any(not self.params[i] > 0 for i in scale_idx):
                raise ValueError("scale-type parameters must be positive")

    def cdf(self, x):
        return cdf(self.family, self.params, x)


@dataclass
class FitResult:
    model: DistModel | None
    family: str
    applicable: bool
    loglik: float | None = None
    n_params: int = 0
    converged: bool = True
    iterations: int = 0
    note: str = ""

    @property
    def aic(self) -> float | None:
        if not self.applicable or self.loglik is None:
            return None
        return 2 * self.n_params - 2 * self.loglik

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": dict(zip(PARAM_NAMES[self.family], self.model.params)) if self.model else None,
            "loglik": self.loglik, "aic": self.aic, "applicable": self.applicable,
            "converged": self.converged, "iterations": self.iterations,
        }


def _wmean(x, w):
    return float(np.sum(w * x) / w.sum())


def _fit_params(family: str, x: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, int]:
    N = w.sum()
    m = _wmean(x, w)
    var = float(np.sum(w * (x - m) ** 2) / N)
    if family == "normal":
        return np.array([m, math.sqrt(var)]), 0
    if family == "exponential":
        return np.array([1.0 / m]), 0
    if family == "uniform":
        return np.array([x.min(), x.max()]), 0
    if family == "rayleigh":
        return np.array([math.sqrt(np.sum(w * x**2) / (2 * N))]), 0
    if family == "lognormal":
        lx = np.log(x)
        lm = _wmean(lx, w)
        return np.array([lm, math.sqrt(np.sum(w * (lx - lm) ** 2) / N)]), 0
    if family == "extreme_value":
        # profile: scale = weighted mean of x under weights exp(x/scale) minus mean
        xs = x - x.max()

        def g(b):
            e = w * np.exp(xs / b)
            return float(np.sum(e * xs) / np.sum(e)) - (m - x.max()) - b

        def dg(b):
            e = w * np.exp(xs / b)
            S = np.sum(e)
            mx = np.sum(e * xs) / S
            vx = np.sum(e * xs**2) / S - mx**2
            return float(-vx / b**2) - 1.0

        b0 = SQRT6_PI * math.sqrt(var)
        lo = 1e-8 * b0
        hi = _bracket_up(g, lo, b0)
        b, it = _root_1d(g, dg, lo, hi, b0)
        loc = x.max() + b * math.log(np.sum(w * np.exp(xs / b)) / N)
        return np.array([loc, b]), it
    if family == "gamma":
        sbar = math.log(m) - _wmean(np.log(x), w)
        k0 = (3 - sbar + math.sqrt((sbar - 3) ** 2 + 24 * sbar)) / (12 * sbar)

        def g(k):
            return math.log(k) - float(digamma(k)) - sbar

        def dg(k):
            return 1.0 / k - float(polygamma(1, k))

        lo = 1e-8 * k0
        hi = _bracket_up(g, lo, k0)
        k, it = _root_1d(g, dg, lo, hi, k0)
        return np.array([k, m / k]), it
    if family == "weibull":
        lx = np.log(x)
        lxs = lx - lx.max()
        lbar = _wmean(lx, w)

        def g(k):
            e = w * np.exp(k * lxs)
            return 1.0 / k + lbar - float(np.sum(e * lx) / np.sum(e))

        def dg(k):
            e = w * np.exp(k * lxs)
            S = np.sum(e)
            mx = np.sum(e * lx) / S
            return -1.0 / k**2 - float(np.sum(e * lx**2) / S - mx**2)

        sd_log = math.sqrt(max(float(np.sum(w * (lx - lbar) ** 2) / N), 1e-300))
        k0 = 1.2 / sd_log
        lo = 1e-8 * k0
        hi = _bracket_up(g, lo, k0)
        k, it = _root_1d(g, dg, lo, hi, k0)
        lam = math.exp(lx.max()) * (np.sum(w * np.exp(k * lxs)) / N) ** (1.0 / k)
        return np.array([lam, k]), it
    if family == "logistic":
        p0 = np.array([m, math.sqrt(3 * var) / math.pi])
        return _newton_2d("logistic", p0, x, w, positive=[1])
    raise ValueError(f"unknown family {family!r}")


def mle_fit(family: str, sample) -> FitResult:
    """Maximum-likelihood fit of one family to a weighted sample."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    x, w = as_weighted(sample)
    if family in POSITIVE_SUPPORT and x.min() <= 0:
        return FitResult(None, family, applicable=False, note="sample outside support (0, inf)")
    if family == "exponential" and x.min() < 0:
        return FitResult(None, family, applicable=False, note="sample outside support [0, inf)")
    if x.size == 1 or x.min() == x.max():
        return FitResult(None, family, applicable=False, note="degenerate sample")
    params, iters = _fit_params(family, x, w)
    ll = LOGLIK[family](params, x, w)
    if family == "uniform":
        converged = True
    else:
        g = GRADIENT[family](params, x, w)
        converged = bool(np.linalg.norm(g) < GRAD_TOL * max(1.0, w.sum()))
        if not converged and N_PARAMS[family] == 2:
            positive = [i for i, nm in enumerate(PARAM_NAMES[family])
                        if nm in ("scale", "sigma", "shape")]
            params, more = _newton_2d(family, params, x, w, positive)
            iters += more
            ll = LOGLIK[family](params, x, w)
            g = GRADIENT[family](params, x, w)
            converged = bool(np.linalg.norm(g) < GRAD_TOL * max(1.0, w.sum()))
    return FitResult(DistModel(family, tuple(params)), family, applicable=True, loglik=ll,
                     n_params=N_PARAMS[family], converged=converged, iterations=iters)


def rank_by_aic(sample, families: Sequence[str] = FAMILIES) -> list[FitResult]:
    """Fit every family; applicable fits sorted by AIC (ties: higher loglik), then the rest."""
    fits = [mle_fit(f, sample) for f in families]
    ok = [f for f in fits if f.applicable]
    ok.sort(key=lambda f: (f.aic, -f.loglik))
    return ok + [f for f in fits if not f.applicable]


def finite_difference_gradient(family: str, params: Sequence[float], sample, rel_step: float = 1e-6) -> np.ndarray:
    x, w = as_weighted(sample)
    p = np.array(params, dtype=float)
    out = np.empty(len(p))
    for j in range(len(p)):
        h = rel_step * (abs(p[j]) or 1.0)
        e = np.zeros(len(p))
        e[j] = h
        out[j] = (LOGLIK[family](p + e, x, w) - LOGLIK[family](p - e, x, w)) / (2 * h)
    return out
