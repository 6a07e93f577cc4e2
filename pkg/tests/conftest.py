from pathlib import Path

import pytest

from gridcat import tables

REPO = Path(__file__).resolve().parents[1]
DATA = REPO / "data"


@pytest.fixture(scope="session")
def fig2a_path() -> Path:
    return DATA / "fig2a.table"


@pytest.fixture(scope="session")
def fig2b_path() -> Path:
    return DATA / "fig2b.table"


@pytest.fixture(scope="session")
def fig2a(fig2a_path) -> tables.DegreeTable:
    return tables.read_table_file(fig2a_path)


@pytest.fixture(scope="session")
def fig2b(fig2b_path) -> tables.DegreeTable:
    return tables.read_table_file(fig2b_path)
