from __future__ import annotations

from pathlib import Path

import pytest

import euaia_assurance as ea
from euaia_assurance.exemplar import (
    TOY_ADVERSARIAL,
    TOY_BENIGN,
    dynamic_filter_links,
    exemplar_links,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def registry():
    return ea.load_registry()


@pytest.fixture(scope="session")
def argument():
    return ea.exemplar_argument()


@pytest.fixture(scope="session")
def base_store(registry, argument):
    # registry + argument + static filter links, the smallest store with a
    # complete evidence chain for duty 9
    store = ea.Store().assert_all(ea.registry_to_triples(registry))
    store = store.assert_all(ea.argument_to_triples(argument))
    return store.assert_all(exemplar_links())


@pytest.fixture(scope="session")
def full_store(base_store):
    return base_store.assert_all(dynamic_filter_links())


@pytest.fixture(scope="session")
def toy_model():
    return ea.train_dynamic(
        TOY_ADVERSARIAL, TOY_BENIGN, corpus_ids=("toy-adversarial", "toy-benign")
    )
