import pytest

from hermsub.store import SeriesCache


@pytest.fixture(scope="session")
def series_cache(tmp_path_factory):
    """One cache per test session so heavy series are computed once."""
    return SeriesCache(tmp_path_factory.mktemp("cache"))
