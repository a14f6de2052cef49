"""Experiment configuration shared by the scripts in ``scripts/``."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .rate_stats import GAMMAS, SAMPLE_MODES

# (q, r) pairs reproducible on a desktop in minutes
DESK_TARGETS: tuple[tuple[int, int], ...] = (
    (2, 2), (3, 3), (4, 4), (5, 5), (7, 7), (4, 2), (8, 2),
)
EXTENDED_TARGETS: tuple[tuple[int, int], ...] = ((8, 8), (9, 9), (11, 11), (13, 13), (16, 2))


@dataclass(frozen=True)
class ExperimentConfig:
    targets: tuple[tuple[int, int], ...] = DESK_TARGETS
    gammas: tuple[str, ...] = GAMMAS
    cache_root: Path = Path("cache")
    outdir: Path = Path("report")
    workers: int = 1
    sample_mode: str = "jumps"
    extended: bool = False

    def __post_init__(self):
        if self.sample_mode not in SAMPLE_MODES:
            raise ValueError(f"unknown sample mode {self.sample_mode!r}")
        if any(g not in GAMMAS for g in self.gammas):
            raise ValueError("unknown divisor type")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    def keys(self) -> list[tuple[int, int, str]]:
        pairs = self.targets + (EXTENDED_TARGETS if self.extended else ())
        return [(q, r, g) for q, r in pairs for g in self.gammas]


def add_arguments(parser) -> None:
    parser.add_argument("--cache", type=Path, default=Path("cache"))
    parser.add_argument("--outdir", type=Path, default=Path("report"))
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--sample", choices=SAMPLE_MODES, default="jumps")
    parser.add_argument("--extended", action="store_true")
    parser.add_argument("--only", nargs="+", metavar="Q,R", default=None,
                        help="restrict to these (q, r) pairs, e.g. 3,3 4,2")


def from_args(args) -> ExperimentConfig:
    kw = {}
    if args.only:
        kw["targets"] = tuple(tuple(int(v) for v in item.split(",")) for item in args.only)
    return ExperimentConfig(cache_root=args.cache, outdir=args.outdir, workers=args.workers,
                            sample_mode=args.sample, extended=args.extended, **kw)
