import json
from pathlib import Path

import pytest

from totokit.corpus import golden_corpus
from totokit.lexicon import golden_lexicon

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def lex():
    return golden_lexicon()


@pytest.fixture(scope="session")
def golden():
    return golden_corpus()


@pytest.fixture(scope="session")
def expected_glosses():
    with open(DATA / "golden_gloss.json", encoding="utf-8") as fh:
        return json.load(fh)
