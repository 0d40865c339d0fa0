import importlib.resources as ir
from pathlib import Path

import pytest

from accenthmm import (
    evaluation_lexicon,
    init_naive_params,
    load_paragraph_lexicon,
    load_symbols,
)
from accenthmm.phonology import FeatureSpace


@pytest.fixture(scope="session")
def symbols():
    return load_symbols()


@pytest.fixture(scope="session")
def space():
    return FeatureSpace()


@pytest.fixture(scope="session")
def paragraph_lexicon(symbols):
    return load_paragraph_lexicon(symbols)


@pytest.fixture(scope="session")
def eval_lexicon(symbols):
    return evaluation_lexicon(symbols)


@pytest.fixture(scope="session")
def naive_params(eval_lexicon):
    return init_naive_params(eval_lexicon.inventory)


@pytest.fixture(scope="session")
def data_dir():
    """The bundled data directory (a real path for this source layout)."""
    return Path(str(ir.files("accenthmm").joinpath("data")))
