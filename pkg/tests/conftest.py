from pathlib import Path

import pytest

from wsn3d import data_io

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return data_io.bundled_nodes_path()


@pytest.fixture(scope="session")
def deployment():
    return data_io.load_bundled_deployment()
