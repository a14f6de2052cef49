"""On-disk cache of rate series: ``<root>/v1/{q}_{r}_{gamma}.csv`` plus a fingerprint sidecar.

One process owns a cache directory; concurrent writers are not supported.
"""

from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .agcodes import dim_series, family
from .rate_stats import RateSeries

SCHEMA = "v1"
ENV_VAR = "HERMSUB_CACHE"
log = logging.getLogger(__name__)


class CacheCorruption(RuntimeError):
    pass


@dataclass(frozen=True)
class CacheEntry:
    key: tuple[int, int, str]
    schema: str
    payload: str
    fingerprint: str


def default_root() -> Path:
    return Path(os.environ.get(ENV_VAR, "cache"))


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


class SeriesCache:
    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else default_root()

    def paths(self, q: int, r: int, gamma: str) -> tuple[Path, Path]:
        base = self.root / SCHEMA / f"{q}_{r}_{gamma}"
        return base.with_suffix(".csv"), base.with_suffix(".fp")

    def fingerprint(self, q: int, r: int, gamma: str) -> str:
        return family(q, r).fingerprint(gamma)

    def read(self, q: int, r: int, gamma: str) -> CacheEntry | None:
        csv, fp = self.paths(q, r, gamma)
        if not csv.exists():
            return None
        payload = csv.read_text()
        stamp = fp.read_text().strip() if fp.exists() else ""
        return CacheEntry((q, r, gamma), SCHEMA, payload, stamp)

    def load(self, q: int, r: int, gamma: str, *, verify_fingerprint: bool = True) -> RateSeries | None:
        """Cached series, or None when absent or stale.

        Raises:
            CacheCorruption: the payload cannot be parsed or fails the series checks.
        """
        entry = self.read(q, r, gamma)
        if entry is None:
            return None
        try:
            series = RateSeries.from_csv(entry.payload)
            series.check()
        except ValueError as exc:
            raise CacheCorruption(f"{self.paths(q, r, gamma)[0]}: {exc}") from exc
        if (series.q, series.r, series.gamma) != (q, r, gamma):
            raise CacheCorruption(f"{self.paths(q, r, gamma)[0]}: key mismatch")
        if verify_fingerprint and entry.fingerprint != self.fingerprint(q, r, gamma):
            log.warning("fingerprint mismatch for %s; recomputing", entry.key)
            return None
        return series

    def save(self, series: RateSeries) -> None:
        csv, fp = self.paths(series.q, series.r, series.gamma)
        _atomic_write(csv, series.to_csv())
        _atomic_write(fp, self.fingerprint(series.q, series.r, series.gamma) + "\n")

    def get(self, q: int, r: int, gamma: str, *, workers: int = 1) -> RateSeries:
        series = self.load(q, r, gamma)
        if series is None:
            series = dim_series(q, r, gamma, workers=workers)
            self.save(series)
        return series
