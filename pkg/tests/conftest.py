import pytest

from src.core.sources.factory import WordSourceFactory
from src.models.returns import StabilizationPolicy

FIBONACCI = 'cf:1'
THUE_MORSE = 'morphic:0>01,1>10:seed=0'
PERIOD_24 = 'periodic:001101001011001100110011'
CHOICE_TM = 'choice:110010|110100:selector=morphic:0>01,1>10:seed=0'


@pytest.fixture(scope='session')
def fibonacci():
    return WordSourceFactory.create(FIBONACCI)


@pytest.fixture(scope='session')
def thue_morse():
    return WordSourceFactory.create(THUE_MORSE)


@pytest.fixture(scope='session')
def period24():
    return WordSourceFactory.create(PERIOD_24)


@pytest.fixture(scope='session')
def choice_tm():
    return WordSourceFactory.create(CHOICE_TM)


@pytest.fixture(scope='session')
def small_policy():
    """Enough for every class of length <= 12 on the fixture sources."""
    return StabilizationPolicy(1024, 2, 2 ** 14)
