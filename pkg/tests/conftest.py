from __future__ import annotations

import pytest

from veronese_braid.action import ActionTable
from veronese_braid.pipeline import Config, run_pipeline
from veronese_braid.series import Model, derive_lemma_5_6, assemble_delta, load_json
from veronese_braid.tsystem import load_tsystem, realize_in_B9, solve_assignment


@pytest.fixture(scope="session")
def tsys():
    return load_tsystem()


@pytest.fixture(scope="session")
def assignment(tsys):
    return solve_assignment(tsys)


@pytest.fixture(scope="session")
def realization(tsys, assignment):
    return realize_in_B9(tsys, assignment)


@pytest.fixture(scope="session")
def table(tsys):
    return ActionTable(tsys)


@pytest.fixture(scope="session")
def model(tsys, table, realization, assignment):
    return Model(tsys, table, realization, assignment)


@pytest.fixture(scope="session")
def axioms():
    return load_json("axioms.json")


@pytest.fixture(scope="session")
def reference():
    return load_json("reference.json")


@pytest.fixture(scope="session")
def lemma(model, axioms, reference):
    return derive_lemma_5_6(model, axioms, reference)


@pytest.fixture(scope="session")
def delta_result(model, lemma, axioms, reference):
    return assemble_delta(model, lemma.rules, axioms, reference)


@pytest.fixture(scope="session")
def full_run():
    return run_pipeline(Config.load())
