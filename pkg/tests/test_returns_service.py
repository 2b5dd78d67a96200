import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config.settings import MAX_PREFIX_LENGTH
from src.core.errors import ClassNeverRecursError, FactorLengthError, InsufficientOccurrencesError, PrefixBudgetError
from src.core.factor_service import factors
from src.core.returns_service import (
    LetterCounts,
    MatchMode,
    ReturnSide,
    abelian_returns,
    abelian_trace,
    census,
    classical_census,
    occurrences,
    return_words,
    right_abelian_returns,
    stabilized_abelian_returns,
)
from src.core.sources.factory import WordSourceFactory
from src.models.returns import StabilizationPolicy
from src.models.word import FiniteWord

from .conftest import FIBONACCI, THUE_MORSE


def word(text: str) -> FiniteWord:
    return FiniteWord.parse(text)


def representatives(return_set):
    return [r.letters for r in return_set.representatives]


def test_letter_counts():
    counts = LetterCounts(word('0110'))
    assert counts.vector(0, 4) == (2, 2)
    assert counts.vector(1, 3) == (0, 2)
    assert counts.window_vectors(2) == [(1, 1), (0, 2), (1, 1)]


def test_occurrences():
    prefix = word('0110100110010110')
    assert [o.position for o in occurrences(prefix, word('01'))] == [0, 3, 6, 10, 12]
    abelian = [o.position for o in occurrences(prefix, word('01'), MatchMode.ABELIAN)]
    assert abelian == [0, 2, 3, 4, 6, 8, 10, 11, 12, 14]
    with pytest.raises(FactorLengthError):
        occurrences(prefix, FiniteWord.empty())


def test_thue_morse_return_words(thue_morse):
    expected = {word(t) for t in ('01', '010', '011', '0110')}
    assert return_words(thue_morse.prefix(16), word('01')) == expected
    assert return_words(thue_morse.prefix(1024), word('01')) == expected


def test_fibonacci_return_words(fibonacci):
    assert return_words(fibonacci.prefix(1024), word('0')) == {word('0'), word('01')}


def test_return_words_need_two_occurrences():
    with pytest.raises(InsufficientOccurrencesError):
        return_words(word('0100'), word('1'))
    with pytest.raises(InsufficientOccurrencesError):
        abelian_returns(word('0100'), word('11'))


def test_thue_morse_abelian_returns_of_01(thue_morse):
    return_set, report = stabilized_abelian_returns(thue_morse, word('01'))
    assert representatives(return_set) == ['0', '1', '01']
    assert report.stable
    assert report.history[0] == (4096, 3)
    assert return_set.to_dict()['classes'][2] == {'vector': {'0': 1, '1': 1}, 'representative': '01'}


def test_periodic_abelian_returns():
    source = WordSourceFactory.create('periodic:01')
    return_set, report = stabilized_abelian_returns(source, word('0'))
    assert representatives(return_set) == ['01']
    assert report.stable
    return_set, _ = stabilized_abelian_returns(source, word('01'))
    assert representatives(return_set) == ['0', '1']


def test_orbit_returns_of_001():
    source = WordSourceFactory.create('periodic:0010101')
    return_set, _ = stabilized_abelian_returns(source, word('001'))
    assert representatives(return_set) == ['0', '1', '01']


def test_fibonacci_class_of_00_has_two_returns(fibonacci):
    return_set = abelian_returns(fibonacci.prefix(4096), word('00'))
    assert representatives(return_set) == ['001', '00101']


def test_class_that_never_recurs():
    source = WordSourceFactory.create('periodic:01')
    with pytest.raises(ClassNeverRecursError):
        stabilized_abelian_returns(source, word('00'), StabilizationPolicy(16, 2, 64))


def test_unstable_returns_are_reported():
    # the longer return 10000 only shows up after the first 8 letters
    source = WordSourceFactory.create('cf:3')
    return_set, report = stabilized_abelian_returns(source, word('1'), StabilizationPolicy(8, 4, 32))
    assert not report.stable
    assert report.history == ((8, 1), (32, 2))
    assert report.prefix_used == 32
    assert representatives(return_set) == ['1000', '10000']


def test_policy_schedule():
    policy = StabilizationPolicy()
    assert policy.schedule(1) == [2 ** k for k in range(12, 21)]
    assert policy.initial_for(100) == 6400
    assert StabilizationPolicy(1000, 3, 5000).schedule(4) == [1000, 3000, 5000]
    assert StabilizationPolicy.parse('auto,2,65536') == StabilizationPolicy(None, 2, 65536)
    assert StabilizationPolicy.parse('512,4,4096').describe() == '512,4,4096'
    with pytest.raises(ValueError):
        StabilizationPolicy.parse('1,2')
    with pytest.raises(ValueError):
        StabilizationPolicy(100, 2, 50)
    with pytest.raises(ValueError):
        StabilizationPolicy(100, 1, 500)


def test_policy_cap_is_bounded_by_the_prefix_budget():
    assert StabilizationPolicy(100, 2, MAX_PREFIX_LENGTH).cap == MAX_PREFIX_LENGTH
    with pytest.raises(PrefixBudgetError):
        StabilizationPolicy(100, 2, MAX_PREFIX_LENGTH + 1)
    with pytest.raises(ValueError):
        StabilizationPolicy.parse('100,2,1099511627776')


def test_letter_counts_of_long_prefixes(fibonacci):
    prefix = fibonacci.prefix(5000)
    counts = LetterCounts(prefix)
    assert counts.sums.shape == (2, 5001)
    assert counts.vector(0, 5000) == (prefix.letters.count('0'), prefix.letters.count('1'))
    windows = counts.window_vectors(7)
    assert len(windows) == 4994
    assert windows[123] == (prefix.letters[123:130].count('0'), prefix.letters[123:130].count('1'))
    assert all(isinstance(x, int) for x in windows[0])
    assert LetterCounts(word('01')).window_vectors(3) == []


def test_census_beyond_the_cap_is_unreached(fibonacci):
    length_census = census(fibonacci, 20, StabilizationPolicy(8, 2, 16))
    assert not length_census.reached
    assert length_census.classes == ()
    assert census(fibonacci, 16, StabilizationPolicy(8, 2, 16)).reached


def test_failures_are_logged(caplog):
    source = WordSourceFactory.create('periodic:01')
    with caplog.at_level(logging.ERROR, logger='src.core.returns_service'):
        with pytest.raises(ClassNeverRecursError):
            stabilized_abelian_returns(source, word('00'), StabilizationPolicy(16, 2, 64))
    assert 'Error computing the returns to the class of 00' in caplog.text


def test_abelian_trace(thue_morse):
    trace = abelian_trace(thue_morse.prefix(1024), 2)
    assert len(trace) == 1023
    ids = trace.distinct()
    assert [i.vector.counts for i in ids] == [(0, 2), (1, 1), (2, 0)]
    isolated = {i.vector.counts for i in trace.isolated_ids()}
    assert isolated == {(2, 0), (0, 2)}
    with pytest.raises(FactorLengthError):
        abelian_trace(word('01'), 3)


def test_census_fibonacci_length_two(fibonacci):
    length_census = census(fibonacci, 2)
    by_factor = {entry.example.letters: entry for entry in length_census.classes}
    assert set(by_factor) == {'00', '01'}
    assert by_factor['00'].singular and by_factor['00'].return_count == 2
    assert by_factor['01'].factor_count == 2 and by_factor['01'].return_count == 3
    assert all(entry.stable for entry in length_census.classes)


def test_census_matches_single_class_queries(thue_morse, small_policy):
    for n in (1, 3, 5):
        for entry in census(thue_morse, n, small_policy).classes:
            single, _ = stabilized_abelian_returns(thue_morse, entry.example, small_policy)
            assert single.class_ids == entry.return_set.class_ids


@pytest.mark.parametrize('n', range(2, 26))
def test_fibonacci_has_a_class_with_three_returns(fibonacci, n):
    assert max(entry.return_count for entry in census(fibonacci, n).classes) >= 3


@pytest.mark.parametrize('n', range(1, 26))
def test_thue_morse_has_a_class_with_three_returns(thue_morse, n):
    assert max(entry.return_count for entry in census(thue_morse, n).classes) >= 3


def test_classical_census(fibonacci, small_policy):
    for n in range(1, 9):
        rows = classical_census(fibonacci, n, small_policy)
        assert len(rows) == n + 1
        assert all(len(returns) == 2 and stable for _, returns, stable in rows)


def test_singular_class_returns_are_classical_returns(fibonacci):
    prefix = fibonacci.prefix(4096)
    for v in ('00', '101', '00100'):
        grouped = {(len(r), r.count(1)) for r in return_words(prefix, word(v))}
        abelian = {(c.class_id.length, c.class_id.vector[1]) for c in abelian_returns(prefix, word(v)).classes}
        assert grouped == abelian


def _corpus(small_policy):
    sources = [FIBONACCI, THUE_MORSE, 'periodic:001101001011001100110011', 'periodic:0010101',
               'choice:110010|110100:selector=morphic:0>01,1>10:seed=0']
    for descriptor in sources:
        source = WordSourceFactory.create(descriptor)
        prefix = source.prefix(small_policy.initial)
        for n in range(1, 11):
            for v in factors(prefix, n).sorted_members():
                yield source, v


def test_left_and_right_returns_agree(small_policy):
    pairs = 0
    for source, v in _corpus(small_policy):
        left, left_report = stabilized_abelian_returns(source, v, small_policy, ReturnSide.LEFT)
        right, right_report = stabilized_abelian_returns(source, v, small_policy, ReturnSide.RIGHT)
        if left_report.stable and right_report.stable:
            assert left.class_ids == right.class_ids, f"{source} {v}"
            pairs += 1
    assert pairs >= 200


@settings(max_examples=60, deadline=None)
@given(text=st.text(alphabet='01', min_size=4, max_size=60), n=st.integers(1, 4))
def test_left_and_right_returns_agree_on_any_prefix(text, n):
    prefix = FiniteWord(text, 2)
    if n > len(prefix):
        return
    v = prefix[:n]
    try:
        left = abelian_returns(prefix, v)
    except InsufficientOccurrencesError:
        return
    assert left.class_ids == right_abelian_returns(prefix, v).class_ids


@settings(max_examples=60, deadline=None)
@given(text=st.text(alphabet='012', min_size=2, max_size=60), n=st.integers(1, 3))
def test_return_segments_tile_the_prefix(text, n):
    prefix = FiniteWord(text, 3)
    if n > len(prefix):
        return
    v = prefix[:n]
    positions = [o.position for o in occurrences(prefix, v, MatchMode.ABELIAN)]
    if len(positions) < 2:
        return
    return_set = abelian_returns(prefix, v)
    assert return_set.occurrence_count == len(positions)
    for a, b in zip(positions, positions[1:]):
        vector = tuple(prefix[a:b].count(letter) for letter in range(3))
        assert vector in {c.class_id.vector.counts for c in return_set.classes}
