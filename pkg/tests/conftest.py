from pathlib import Path

import pytest

from datr_reverse import compile_theory, parse_theory

THEORY_DIR = Path(__file__).resolve().parents[1] / "theories"
NOUNS_PATH = THEORY_DIR / "nouns.datr"

CONSTRAINT_SOURCE = "N: <> == 0 <a> == 1 <a b> == 2."

CYCLE_SOURCES = {
    "same": "N:<a> == <a>.",
    "lengthening": "N:<a> == <a a>.",
    "shortening": "N:<a a> == <a>.",
}


@pytest.fixture(scope="session")
def nouns_source() -> str:
    return NOUNS_PATH.read_text()


@pytest.fixture(scope="session")
def nouns(nouns_source):
    return parse_theory(nouns_source)


@pytest.fixture(scope="session")
def nouns_rules(nouns):
    return compile_theory(nouns)


@pytest.fixture
def theory_file(tmp_path):
    """Write theory text to a temporary file and return its path."""
    def write(source: str, name: str = "theory.datr") -> str:
        path = tmp_path / name
        path.write_text(source)
        return str(path)
    return write
