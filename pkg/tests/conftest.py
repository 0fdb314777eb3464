import os

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--long",
        action="store_true",
        default=False,
        help="run long-running checks (also enabled by LIFTFORGE_LONG=1)",
    )


def long_enabled(config) -> bool:
    return config.getoption("--long") or os.environ.get("LIFTFORGE_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if long_enabled(config):
        return
    skip = pytest.mark.skip(reason="long check; pass --long or set LIFTFORGE_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def catalog_entries():
    from liftforge.catalog import load_catalog

    return load_catalog()


@pytest.fixture(scope="session")
def search6_pooled():
    from liftforge.search6 import search_all

    return search_all()


@pytest.fixture(scope="session")
def conserved_pool_k6():
    """Compiled rules of every conserved landscape with diameter <= 6."""
    from liftforge.landscape import compile_landscape, enumerate_conserved

    pool = []
    for k in (4, 5, 6):
        res = enumerate_conserved(k, include_list=True)
        pool.extend((l, compile_landscape(l)) for l in res.landscapes)
    return pool
