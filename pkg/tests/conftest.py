"""Session fixtures for the shared, disk-cached full-scale runs."""

import pytest

import _cache


@pytest.fixture(scope="session")
def cached_run():
    """Run-registry name -> artifact directory, materialized at most once."""
    runs = _cache.acceptance_runs()
    paths = {}

    def get(name: str):
        if name not in paths:
            cfg, kind = runs[name]
            paths[name] = _cache.materialize(cfg, kind)
        return paths[name]

    return get
