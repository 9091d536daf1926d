import pytest

from charrig import corpus

CORPUS = list(corpus.CORPUS_NAMES)
SURFACES = ["s2", "t2", "rp2", "klein"]


@pytest.fixture(scope="session")
def cx():
    """Loader fixture: complexes cached for the whole session so the
    Smith-normal-form caches are shared across tests."""
    return corpus.load


@pytest.fixture(scope="session", params=CORPUS)
def corpus_complex(request):
    return corpus.load(request.param)
