import tracemalloc

import pytest

from src.core.errors import DescriptorParseError, SourceError
from src.core.sources.choice_source import ChoiceSource
from src.core.sources.factory import WordSourceFactory, WordSourceType
from src.core.sources.morphic_source import MorphicSource
from src.core.sources.periodic_source import PeriodicSource
from src.core.sources.sturmian_source import SturmianSource
from src.models.word import FiniteWord, Morphism

from .conftest import CHOICE_TM, FIBONACCI, PERIOD_24, THUE_MORSE


@pytest.mark.parametrize('descriptor, n, expected', [
    (THUE_MORSE, 16, '0110100110010110'),
    ('periodic:01', 4, '0101'),
    ('cf:1,1,1,1,1,1,1,1', 13, '0100101001001'),
    (FIBONACCI, 13, '0100101001001'),
    ('cf:2,1,1', 11, '00100010010'),
    (CHOICE_TM, 12, '110010110100'),
    ('periodic:012', 7, '0120120'),
])
def test_prefix(descriptor, n, expected):
    assert WordSourceFactory.create(descriptor).prefix(n).letters == expected


@pytest.mark.parametrize('descriptor', [
    'periodic:01',
    'periodic:0001:alphabet=3',
    THUE_MORSE,
    'cf:1,1',
    'cf:2,1',
    CHOICE_TM,
    PERIOD_24,
])
def test_descriptor_round_trip(descriptor):
    assert str(WordSourceFactory.create(descriptor)) == descriptor


def test_continued_fraction_ellipsis():
    assert WordSourceFactory.create('cf:1,1,…').descriptor() == 'cf:1,1'
    assert WordSourceFactory.create('cf:2,1,...').descriptor() == 'cf:2,1'
    assert WordSourceFactory.create('cf:2,1...').descriptor() == 'cf:2,1'


def test_source_types():
    assert WordSourceFactory.source_type(FIBONACCI) == WordSourceType.STURMIAN_CF
    assert WordSourceFactory.source_type(CHOICE_TM) == WordSourceType.CHOICE
    assert isinstance(WordSourceFactory.create(THUE_MORSE), MorphicSource)
    assert isinstance(WordSourceFactory.create(CHOICE_TM).selector, MorphicSource)


@pytest.mark.parametrize('descriptor, offset', [
    ('foo:01', 0),
    ('periodic01', 0),
    ('periodic:', 9),
    ('periodic:01x', 11),
    ('periodic:01:size=3', 12),
    ('morphic:0>01,1>10', 17),
    ('morphic:0>10,1>01:seed=0', 8),
    ('morphic:0>01,2>10:seed=0', 8),
    ('cf:1,0', 5),
    ('cf:1,…,2', 5),
    ('choice:0|1|01:selector=periodic:01', 7),
    ('choice:0|1:selector=periodic:0z', 30),
])
def test_descriptor_errors_carry_offsets(descriptor, offset):
    with pytest.raises(DescriptorParseError) as error:
        WordSourceFactory.create(descriptor)
    assert error.value.offset == offset
    assert f"at byte {offset}" in str(error.value)


def test_offsets_count_bytes():
    with pytest.raises(DescriptorParseError) as error:
        WordSourceFactory.create('cf:1…,x')
    assert error.value.offset == len('cf:1…,'.encode('utf-8'))


def test_source_invariants():
    with pytest.raises(SourceError):
        PeriodicSource(FiniteWord.empty())
    with pytest.raises(SourceError):
        SturmianSource([])
    with pytest.raises(SourceError):
        SturmianSource([1, 0])
    with pytest.raises(SourceError):
        MorphicSource(Morphism.from_texts(['0', '10']), 0)
    with pytest.raises(SourceError):
        MorphicSource(Morphism.from_texts(['012', '10']), 0)
    with pytest.raises(SourceError):
        ChoiceSource([FiniteWord.parse('0')], PeriodicSource(FiniteWord.parse('01')))


def test_sturmian_quotients_repeat():
    source = SturmianSource([2, 1])
    assert source.quotient(1) == 2
    assert source.quotient(2) == 1
    assert source.quotient(7) == 1


def test_prefix_lengths_are_exact(fibonacci, thue_morse, choice_tm):
    for source in (fibonacci, thue_morse, choice_tm):
        for n in range(0, 60):
            assert len(source.prefix(n)) == n
        with pytest.raises(ValueError):
            source.prefix(-1)


@pytest.mark.parametrize('n', [0, 1, 3, 4, 5, 13, 100])
def test_huge_partial_quotient_prefix_is_exact(n):
    # t(1) = 0001, and t(2) starts with fifty million copies of it
    source = WordSourceFactory.create('cf:3,50000000')
    assert source.prefix(n).letters == ('0001' * (n // 4 + 1))[:n]


def test_huge_partial_quotient_prefix_stays_small():
    source = SturmianSource([50_000_000])
    tracemalloc.start()
    try:
        assert source.prefix(5).letters == '00000'
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert peak < 10 * 1024 * 1024
