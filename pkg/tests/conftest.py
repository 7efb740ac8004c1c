import json
import pathlib

import pytest

from poswkit import hgraph
from poswkit.oracle import OracleConfig

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
TESTDATA = pathlib.Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def example_db() -> hgraph.Database:
    """The running 8-entry example database (lambda = 3)."""
    return hgraph.Database.from_json((FIXTURES / "example_hseq_db.json").read_text())


@pytest.fixture(scope="session")
def toy_cfg() -> OracleConfig:
    return OracleConfig.from_json((FIXTURES / "toy_oracle.json").read_text())


@pytest.fixture(scope="session")
def colsubtree_db() -> hgraph.Database:
    return hgraph.Database.from_json((FIXTURES / "colsubtree_db.json").read_text())


@pytest.fixture(scope="session")
def colmt_db() -> hgraph.Database:
    return hgraph.Database.from_json((FIXTURES / "colmt_db.json").read_text())


@pytest.fixture(scope="session")
def golden_labels() -> dict:
    return json.loads((TESTDATA / "golden_labels_n2.json").read_text())


@pytest.fixture(scope="session")
def golden_proof_bytes() -> bytes:
    return (TESTDATA / "golden_proof_n2.bin").read_bytes()


COLOR_CHI = "10100101"
COLOR_ROOT = "00000001"
