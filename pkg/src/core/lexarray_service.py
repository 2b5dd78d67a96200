from itertools import accumulate
from math import gcd
from typing import List, Tuple
import logging

import numpy as np

from src.config.settings import ORACLE_CROSSCHECK_LIMIT
from src.core.errors import AlphabetError, OrbitDegenerateError
from src.core.returns_service import abelian_returns
from src.models.lexarray import LexArray, Orbit
from src.models.returns import ReturnSet
from src.models.word import FiniteWord

logger = logging.getLogger(__name__)


def _require_binary(w: FiniteWord):
    if w.letters.strip('01'):
        raise AlphabetError(f"Expected a binary word, got {w}")


def _slope(w: FiniteWord) -> Tuple[int, int]:
    """(p, q) = (|w|_1, |w|) when the orbit machinery applies, else OrbitDegenerateError."""
    _require_binary(w)
    p, q = w.letters.count('1'), len(w)
    if not 1 <= p < q:
        raise OrbitDegenerateError(f"{w} needs 1 <= |w|_1 < |w|, got |w|_1 = {p}, |w| = {q}")
    if gcd(p, q) != 1:
        raise OrbitDegenerateError(f"{w} has gcd(|w|_1, |w|) = gcd({p}, {q}) = {gcd(p, q)}")
    return p, q


def conjugates(w: FiniteWord) -> Orbit:
    p, q = _slope(w)
    shifts = sorted({w.letters[k:] + w.letters[:k] for k in range(q)})
    return Orbit(p, q, tuple(FiniteWord(s, 2) for s in shifts))


def lex_array(w: FiniteWord) -> LexArray:
    orbit = conjugates(w)
    return LexArray(orbit.p, orbit.q, tuple(e.letters for e in orbit.elements))


def balanced_orbit_array(p: int, q: int) -> LexArray:
    """Lexicographic array of the balanced orbit, built column by column: column j is sigma^(jp) u, u = 0^(q-p) 1^p."""
    if not 1 <= p < q or gcd(p, q) != 1:
        raise OrbitDegenerateError(f"Balanced orbit needs 1 <= p < q and gcd(p, q) = 1, got ({p}, {q})")
    u = '0' * (q - p) + '1' * p
    rows = tuple(''.join(u[(i + j * p) % q] for j in range(q)) for i in range(q))
    return LexArray(p, q, rows)


def is_balanced_jz(w: FiniteWord) -> bool:
    """Balance of the orbit of w, read off the lexicographic array: prefix 1-counts must not decrease down each column."""
    try:
        array = lex_array(w)
    except OrbitDegenerateError:
        logger.debug(f"{w} is outside the coprime orbit machinery; using the pairwise oracle")
        return is_balanced_oracle(w, cyclic=True)
    previous = None
    for row in array.rows:
        ones = list(accumulate(ch == "1" for ch in row))
        if previous is not None and any(here < above for here, above in zip(ones, previous)):
            return False
        previous = ones
    return True


def is_balanced_oracle(w: FiniteWord, cyclic: bool = True) -> bool:
    """Pairwise-factor definition: equal-length factors differ by at most one 1.

    With cyclic=True the factors are those of the circular word (the whole orbit).
    """
    _require_binary(w)
    q = len(w)
    if q == 0:
        return True
    text = w.letters + w.letters if cyclic else w.letters
    for length in range(1, q + 1):
        last = q if cyclic else q - length + 1
        counts = {text[k:k + length].count('1') for k in range(last)}
        if max(counts) - min(counts) > 1:
            return False
    return True


def is_k_balanced(u: FiniteWord, k: int) -> bool:
    """True iff any two factors of u of the same length differ by at most k in their number of 1s."""
    _require_binary(u)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    ones = np.frombuffer(u.letters.encode('ascii'), dtype=np.uint8) - ord('0')
    sums = np.concatenate(([0], np.cumsum(ones, dtype=np.int64)))
    result = True
    for length in range(1, len(u) + 1):
        windows = sums[length:] - sums[:-length]
        if windows.max() - windows.min() > k:
            result = False
            break
    if len(u) <= ORACLE_CROSSCHECK_LIMIT and result != _k_balanced_oracle(u, k):
        logger.error(f"Window-extrema scan and pairwise oracle disagree on {u} for k={k}")
        raise RuntimeError(f"Balance scan disagrees with the pairwise oracle on {u}")
    return result


def _k_balanced_oracle(u: FiniteWord, k: int) -> bool:
    n = len(u)
    for length in range(1, n + 1):
        factors = [u.letters[i:i + length].count("1") for i in range(n - length + 1)]
        if any(abs(x - y) > k for x in factors for y in factors):
            return False
    return True


def column_shift_check(a: LexArray) -> bool:
    """A[i][m] == A[i + q - p][m + 1] for every cell, indices modulo q."""
    shift = a.q - a.p
    return all(
        a.rows[i][m] == a.rows[(i + shift) % a.q][(m + 1) % a.q]
        for i in range(a.q) for m in range(a.q)
    )


def cyclic_abelian_returns(w: FiniteWord, v: FiniteWord) -> ReturnSet:
    """Abelian returns to the class of v inside the circular word w, i.e. along the rows of its orbit."""
    if len(w) == 0:
        raise ValueError("Circular word must be non-empty")
    repeats = 3 + len(v) // len(w)
    return abelian_returns(FiniteWord(w.letters * repeats, w.alphabet_size), v)


def balanced_orbits(p: int, q: int) -> List[Orbit]:
    """All balanced orbits of binary words of length q with p ones, found by pruned backtracking."""
    if not 1 <= p < q or gcd(p, q) != 1:
        raise OrbitDegenerateError(f"Orbits need 1 <= p < q and gcd(p, q) = 1, got ({p}, {q})")
    found = set()

    def extend(word: str, sums: List[int], lows: List[int], highs: List[int]):
        ones = sums[-1]
        if ones > p or ones + (q - len(word)) < p:
            return
        if len(word) == q:
            candidate = FiniteWord(word, 2)
            if is_balanced_oracle(candidate, cyclic=True):
                found.add(conjugates(candidate).least)
            return
        for letter in '01':
            new_sums = sums + [ones + (letter == '1')]
            n = len(word) + 1
            new_lows, new_highs = lows[:], highs[:]
            ok = True
            for length in range(1, n + 1):
                window = new_sums[n] - new_sums[n - length]
                if length > len(new_lows) - 1:
                    new_lows.append(window)
                    new_highs.append(window)
                else:
                    new_lows[length] = min(new_lows[length], window)
                    new_highs[length] = max(new_highs[length], window)
                if new_highs[length] - new_lows[length] > 1:
                    ok = False
                    break
            if ok:
                extend(word + letter, new_sums, new_lows, new_highs)

    extend('', [0], [0], [0])
    return [conjugates(least) for least in sorted(found)]
