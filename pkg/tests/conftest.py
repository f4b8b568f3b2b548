import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gowallach.catalog import catalog  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"

CATALOG_INSTANCES = [
    ("su2_trivial",), ("stiefel_n", 4), ("stiefel_n", 5), ("stiefel_n", 6),
    ("so_klm", 2, 2, 1), ("so_klm", 2, 2, 2), ("so_klm", 1, 2, 3),
    ("product_s2_cubed",), ("quad_diag_su2",),
]


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session", params=CATALOG_INSTANCES, ids=lambda p: ":".join(map(str, p)))
def any_space(request):
    return catalog(request.param[0], *request.param[1:])


@pytest.fixture(scope="session")
def stiefel4():
    return catalog("stiefel_n", 4)


@pytest.fixture(scope="session")
def su2():
    return catalog("su2_trivial")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
