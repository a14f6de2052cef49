"""Invariant suite run by ``hermsub verify`` and the acceptance tests."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .agcodes import CodeSpec, brute_force_subcode_dim, dim_records, family, verify_delsarte
from .rate_stats import RateSeries, deg_of


@dataclass
class SuiteReport:
    q: int
    r: int
    gamma: str
    failures: list[str] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def tally(self, name: str, passed: bool, detail: str = "") -> None:
        self.checked[name] = self.checked.get(name, 0) + 1
        if not passed:
            self.failures.append(f"{name}: {detail}")

    def to_json(self) -> dict:
        return {"q": self.q, "r": self.r, "gamma": self.gamma, "ok": self.ok,
                "checked": self.checked, "failures": self.failures}


def delsarte_s_values(q: int, alpha: int, n_random: int = 10, seed: int = 0) -> list[int]:
    """Every s for q <= 3, otherwise ``n_random`` seeded picks."""
    s_all = list(range(alpha + 1))
    if q <= 3:
        return s_all
    rng = random.Random(f"{seed}-{q}-{alpha}")
    return sorted(rng.sample(s_all, min(n_random, len(s_all))))


def run_suite(q: int, r: int, gamma: str, *, records: dict | None = None,
              delsarte: bool = True, n_random: int = 10) -> SuiteReport:
    fam = family(q, r)
    n, g, h = fam.n, fam.g, fam.tower.h
    degG = deg_of(gamma)
    records = records or dim_records(q, r, gamma)
    rep = SuiteReport(q, r, gamma)
    series = RateSeries(q, r, gamma, tuple(records[s][1] for s in sorted(records)))
    alpha = series.alpha
    dims = series.dims
    rep.tally("complete", series.complete, f"{len(dims)} values for alpha={alpha}")
    for s in range(1, len(dims)):
        rep.tally("monotone", dims[s] >= dims[s - 1], f"s={s}")
    for s in range(len(dims)):
        if s * r * degG < n:
            rep.tally("plateau", dims[s] == 1, f"s={s} dim={dims[s]}")
    rep.tally("full_at_alpha", dims[-1] == n, f"dims[alpha]={dims[-1]}")
    for s, (k, d) in sorted(records.items()):
        rep.tally("trace_bound", d >= max(0, n - h * (n - k)) and 1 <= d <= k <= n,
                  f"s={s} k={k} d={d}")
        deg = s * degG
        if 2 * g - 2 < deg < n:
            rep.tally("riemann_roch", k == deg - g + 1, f"s={s} k={k}")
    if delsarte:
        for s in delsarte_s_values(q, alpha, n_random):
            rep.tally("delsarte", verify_delsarte(CodeSpec(q, r, gamma, s), fam), f"s={s}")
    if q == 2:
        for s, (k, d) in sorted(records.items()):
            if k <= 10:
                bf = brute_force_subcode_dim(CodeSpec(q, r, gamma, s), fam)
                rep.tally("brute_force", bf == d, f"s={s} parity={d} enum={bf}")
    return rep
