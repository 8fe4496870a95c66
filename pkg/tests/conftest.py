import pytest

from camsa.scoring import score_run
from camsa.synth import RunScript, generate_run


@pytest.fixture(scope="session")
def clean_run():
    """One clean seed-1 bundle with its ground truth, shared across tests."""
    bundle, truth = generate_run(RunScript(seed=1))
    return bundle, truth


@pytest.fixture(scope="session")
def clean_report(clean_run):
    bundle, _ = clean_run
    return score_run(bundle)
