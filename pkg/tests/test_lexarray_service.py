from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import AlphabetError, OrbitDegenerateError
from src.core.lexarray_service import (
    balanced_orbit_array,
    balanced_orbits,
    column_shift_check,
    conjugates,
    cyclic_abelian_returns,
    is_balanced_jz,
    is_balanced_oracle,
    is_k_balanced,
    lex_array,
)
from src.core.word_service import mechanical_word
from src.models.word import FiniteWord

PRINTED_ARRAY = [
    '0010101',
    '0100101',
    '0101001',
    '0101010',
    '1001010',
    '1010010',
    '1010100',
]


def word(text: str) -> FiniteWord:
    return FiniteWord.parse(text, 2)


def coprime_pairs(max_q: int):
    return [(p, q) for q in range(2, max_q + 1) for p in range(1, q) if gcd(p, q) == 1]


def test_printed_array():
    assert lex_array(word('0101001')).to_lines() == PRINTED_ARRAY
    assert balanced_orbit_array(3, 7).to_lines() == PRINTED_ARRAY
    assert column_shift_check(lex_array(word('0101001')))
    assert column_shift_check(balanced_orbit_array(3, 7))


def test_array_accessors():
    array = balanced_orbit_array(3, 7)
    assert array.cell(0, 2) == 1
    assert array.row_prefix(2, 1) == word('01')
    assert array.column(0) == word('0000111')
    assert array.grid().splitlines() == PRINTED_ARRAY


def test_small_arrays():
    assert balanced_orbit_array(1, 2).to_lines() == ['01', '10']
    assert balanced_orbit_array(2, 7).rows[0] == '0001001'


def test_unbalanced_orbit():
    array = lex_array(word('0011010'))
    assert not column_shift_check(array)
    assert not is_balanced_jz(word('0011010'))


def test_conjugates():
    orbit = conjugates(word('0101001'))
    assert len(orbit) == 7
    assert orbit.least == word('0010101')
    assert word('1010010') in orbit
    with pytest.raises(OrbitDegenerateError):
        conjugates(word('0011'))
    with pytest.raises(OrbitDegenerateError):
        conjugates(word('000'))
    with pytest.raises(OrbitDegenerateError):
        balanced_orbit_array(2, 4)
    with pytest.raises(AlphabetError):
        conjugates(FiniteWord.parse('0120'))


@pytest.mark.parametrize('text, expected', [
    ('0101001', True),
    ('0011', False),
    ('0010101', True),
    ('0011010', False),
    ('01', True),
])
def test_is_balanced_jz(text, expected):
    assert is_balanced_jz(word(text)) is expected


def test_balance_checkers_agree_exhaustively():
    for q in range(2, 15):
        for letters in product('01', repeat=q):
            w = word(''.join(letters))
            p = w.letters.count('1')
            if not 1 <= p < q or gcd(p, q) != 1:
                continue
            assert is_balanced_jz(w) == is_balanced_oracle(w, cyclic=True), w


@pytest.mark.parametrize('p, q', coprime_pairs(30))
def test_mechanical_word_is_the_balanced_orbit(p, q):
    w = mechanical_word(p, q)
    assert is_balanced_oracle(w, cyclic=True)
    assert conjugates(w).least == w
    array = lex_array(w)
    assert array.rows == balanced_orbit_array(p, q).rows
    assert column_shift_check(array)


@pytest.mark.parametrize('p, q', coprime_pairs(14) + [(8, 21), (7, 30), (13, 30)])
def test_balanced_orbit_is_unique(p, q):
    orbits = balanced_orbits(p, q)
    assert len(orbits) == 1
    assert orbits[0].least == mechanical_word(p, q)


def test_linear_and_cyclic_oracles():
    # 0110 is balanced as a word but 00 and 11 meet around the circle
    assert is_balanced_oracle(word('0110'), cyclic=False)
    assert not is_balanced_oracle(word('0110'), cyclic=True)
    assert is_balanced_oracle(FiniteWord.empty())


def test_k_balance(fibonacci, thue_morse):
    assert is_k_balanced(fibonacci.prefix(2 ** 14), 1)
    tm = thue_morse.prefix(2 ** 12)
    assert is_k_balanced(tm, 2)
    assert not is_k_balanced(tm, 1)
    with pytest.raises(ValueError):
        is_k_balanced(tm, 0)


@settings(max_examples=50, deadline=None)
@given(text=st.text(alphabet='01', min_size=1, max_size=64), k=st.integers(1, 3))
def test_k_balance_matches_the_pairwise_definition(text, k):
    n = len(text)
    expected = all(
        abs(text[i:i + length].count('1') - text[j:j + length].count('1')) <= k
        for length in range(1, n + 1)
        for i in range(n - length + 1)
        for j in range(n - length + 1)
    )
    assert is_k_balanced(word(text), k) == expected


def test_cyclic_abelian_returns():
    return_set = cyclic_abelian_returns(word('0010101'), word('001'))
    assert [r.letters for r in return_set.representatives] == ['0', '1', '01']
    with pytest.raises(ValueError):
        cyclic_abelian_returns(FiniteWord.empty(), word('0'))
