"""Write exact and extreme-value-estimated key-size profiles for every cached series."""

import argparse

from hermsub.config import add_arguments, from_args
from hermsub.keysize import default_model, keysize_profile
from hermsub.store import SeriesCache


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    add_arguments(ap)
    ap.add_argument("--model", choices=("moment", "mle"), default="moment")
    args = ap.parse_args()
    cfg = from_args(args)
    cache = SeriesCache(cfg.cache_root)
    outdir = cfg.outdir / "keysize"
    outdir.mkdir(parents=True, exist_ok=True)
    for q, r, gamma in cfg.keys():
        s = cache.get(q, r, gamma, workers=cfg.workers)
        prof = keysize_profile(s, default_model(s, args.model))
        path = outdir / f"{q}_{r}_{gamma}.csv"
        path.write_text(prof.to_csv())
        print(f"{path}: peak exact s={prof.argmax_exact()} estimated s={prof.argmax_estimated()}"
              f" max bits={max(prof.exact_bits):.0f}")


if __name__ == "__main__":
    main()
