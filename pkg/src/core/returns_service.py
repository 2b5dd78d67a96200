from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple
import logging

import numpy as np

from src.config.settings import LETTER_SYMBOLS
from src.core.errors import ClassNeverRecursError, FactorLengthError, InsufficientOccurrencesError
from src.core.sources.base_source import BaseWordSource
from src.core.word_service import parikh
from src.models.analysis import ClassCensus, LengthCensus
from src.models.returns import (
    AbelianClassId,
    AbelianTrace,
    Occurrence,
    ReturnClass,
    ReturnSet,
    StabilizationPolicy,
    StabilizationReport,
)
from src.models.word import FiniteWord, ParikhVector

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


class MatchMode(Enum):
    EXACT = "exact"
    ABELIAN = "abelian"


class ReturnSide(Enum):
    """Left returns run from one occurrence to the next; right returns are shifted past the window."""
    LEFT = "left"
    RIGHT = "right"


class LetterCounts:
    """Prefix sums of every letter of a word, for O(1) Parikh vectors of any factor."""

    def __init__(self, word: FiniteWord):
        self.word = word
        codes = np.frombuffer(word.letters.encode('ascii'), dtype=np.uint8)
        symbols = np.frombuffer(LETTER_SYMBOLS[:word.alphabet_size].encode('ascii'), dtype=np.uint8)
        # row a, column k: occurrences of letter a in word[:k]
        self.sums = np.zeros((len(symbols), len(codes) + 1), dtype=np.int64)
        self.sums[:, 1:] = np.cumsum(codes[np.newaxis, :] == symbols[:, np.newaxis], axis=1, dtype=np.int64)

    def vector(self, start: int, end: int) -> Vector:
        return tuple((self.sums[:, end] - self.sums[:, start]).tolist())

    def vectors(self, starts: np.ndarray, ends: np.ndarray) -> List[Vector]:
        """Parikh vectors of word[starts[i]:ends[i]] for every i."""
        return [tuple(row) for row in (self.sums[:, ends] - self.sums[:, starts]).T.tolist()]

    def window_vectors(self, n: int) -> List[Vector]:
        """Parikh vector of the window starting at every position k <= |word| - n."""
        width = self.sums.shape[1] - n
        if width <= 0:
            return []
        return self.vectors(np.arange(width), np.arange(n, n + width))


def occurrences(prefix: FiniteWord, target: FiniteWord, mode: MatchMode = MatchMode.EXACT) -> List[Occurrence]:
    n = len(target)
    if n == 0:
        raise FactorLengthError("Cannot scan for the empty word")
    if n > len(prefix):
        raise FactorLengthError(f"Target of length {n} is longer than the prefix ({len(prefix)})")
    return [Occurrence(k, n) for k in _positions(prefix, target, mode)]


def _positions(prefix: FiniteWord, target: FiniteWord, mode: MatchMode, counts: Optional[LetterCounts] = None) -> List[int]:
    if mode == MatchMode.EXACT:
        positions = []
        k = prefix.letters.find(target.letters)
        while k >= 0:
            positions.append(k)
            k = prefix.letters.find(target.letters, k + 1)
        return positions
    counts = counts or LetterCounts(prefix)
    wanted = _vector_of(target, prefix.alphabet_size)
    return [k for k, vector in enumerate(counts.window_vectors(len(target))) if vector == wanted]


def _vector_of(word: FiniteWord, alphabet_size: int) -> Vector:
    counts = parikh(word).counts
    return counts + (0,) * (alphabet_size - len(counts))


def class_id(vector: Sequence[int]) -> AbelianClassId:
    return AbelianClassId(sum(vector), ParikhVector(tuple(vector)))


def return_words(prefix: FiniteWord, v: FiniteWord) -> FrozenSet[FiniteWord]:
    """Classical return words of v: the segments between consecutive exact occurrences."""
    positions = _positions(prefix, v, MatchMode.EXACT) if len(v) else []
    if len(positions) < 2:
        raise InsufficientOccurrencesError(
            f"{v} occurs {len(positions)} time(s) in a prefix of length {len(prefix)}; need at least 2"
        )
    return frozenset(prefix[a:b] for a, b in zip(positions, positions[1:]))


def abelian_returns(prefix: FiniteWord, v: FiniteWord) -> ReturnSet:
    return _abelian_returns(prefix, v, ReturnSide.LEFT)


def right_abelian_returns(prefix: FiniteWord, v: FiniteWord) -> ReturnSet:
    return _abelian_returns(prefix, v, ReturnSide.RIGHT)


def _abelian_returns(prefix: FiniteWord, v: FiniteWord, side: ReturnSide) -> ReturnSet:
    if len(v) == 0:
        raise FactorLengthError("Cannot compute returns to the empty word")
    if len(v) > len(prefix):
        raise InsufficientOccurrencesError(f"{v} is longer than the prefix ({len(prefix)})")
    counts = LetterCounts(prefix)
    positions = _positions(prefix, v, MatchMode.ABELIAN, counts)
    return _group_returns(counts, positions, len(v), _vector_of(v, prefix.alphabet_size), side)


def _group_returns(counts: LetterCounts, positions: List[int], n: int, target: Vector, side: ReturnSide) -> ReturnSet:
    """Group the returns between consecutive occurrences by abelian class; the trailing partial return is dropped."""
    if len(positions) < 2:
        raise InsufficientOccurrencesError(
            f"Class {class_id(target)} occurs {len(positions)} time(s) in a prefix of "
            f"length {len(counts.word)}; need at least 2"
        )
    shift = n if side == ReturnSide.RIGHT else 0
    starts = np.asarray(positions[:-1], dtype=np.int64) + shift
    ends = np.asarray(positions[1:], dtype=np.int64) + shift
    letters = counts.word.letters
    found: Dict[Vector, str] = {}
    for start, end, vector in zip(starts.tolist(), ends.tolist(), counts.vectors(starts, ends)):
        text = letters[start:end]
        if vector not in found or text < found[vector]:
            found[vector] = text
    alphabet_size = counts.word.alphabet_size
    classes = sorted(
        (ReturnClass(class_id(vector), FiniteWord(text, alphabet_size)) for vector, text in found.items()),
        key=lambda c: (c.class_id.length, c.representative.letters),
    )
    return ReturnSet(class_id(target), tuple(classes), len(positions), len(counts.word))


def stabilized_abelian_returns(
    source: BaseWordSource,
    v: FiniteWord,
    policy: StabilizationPolicy = StabilizationPolicy(),
    side: ReturnSide = ReturnSide.LEFT,
) -> Tuple[ReturnSet, StabilizationReport]:
    """Abelian returns on growing prefixes until the class set repeats on two consecutive steps."""
    try:
        return _stabilized_abelian_returns(source, v, policy, side)
    except Exception as e:
        logger.error(f"Error computing the returns to the class of {v} in {source}: {str(e)}")
        raise


def _stabilized_abelian_returns(
    source: BaseWordSource, v: FiniteWord, policy: StabilizationPolicy, side: ReturnSide
) -> Tuple[ReturnSet, StabilizationReport]:
    history: List[Tuple[int, int]] = []
    previous: Optional[ReturnSet] = None
    for length in policy.schedule(len(v)):
        prefix = source.prefix(length)
        try:
            current = _abelian_returns(prefix, v, side)
        except InsufficientOccurrencesError:
            history.append((length, 0))
            logger.debug(f"Class of {v} does not recur within {length} letters of {source}")
            continue
        history.append((length, len(current)))
        logger.debug(f"Class of {v}: {len(current)} return classes at prefix {length}")
        if previous is not None and previous.class_ids == current.class_ids:
            logger.info(f"Returns to the class of {v} stabilized at prefix {length}: {len(current)} classes")
            return current, StabilizationReport(length, True, tuple(history))
        previous = current
    if previous is None:
        raise ClassNeverRecursError(f"Class of {v} never recurs within {policy.cap} letters of {source}")
    logger.warning(f"Returns to the class of {v} did not stabilize within {policy.cap} letters of {source}")
    return previous, StabilizationReport(history[-1][0], False, tuple(history))


def abelian_trace(prefix: FiniteWord, n: int) -> AbelianTrace:
    if not 1 <= n <= len(prefix):
        raise FactorLengthError(f"Window length {n} is out of range for a prefix of length {len(prefix)}")
    ids: Dict[Vector, AbelianClassId] = {}
    trace = []
    for vector in LetterCounts(prefix).window_vectors(n):
        if vector not in ids:
            ids[vector] = class_id(vector)
        trace.append(ids[vector])
    return AbelianTrace(n, tuple(trace))


def census(source: BaseWordSource, n: int, policy: StabilizationPolicy = StabilizationPolicy()) -> LengthCensus:
    """Stabilized abelian returns of every abelian class of length-n factors, from one trace per prefix."""
    if policy.cap < n:
        logger.warning(f"Census n={n} of {source}: the prefix cap {policy.cap} is shorter than the factors")
        return LengthCensus(n, (), reached=False)
    try:
        return _census(source, n, policy)
    except Exception as e:
        logger.error(f"Error during census n={n} of {source}: {str(e)}")
        raise


def _census(source: BaseWordSource, n: int, policy: StabilizationPolicy) -> LengthCensus:
    history: Dict[Vector, List[Tuple[int, int]]] = {}
    latest: Dict[Vector, ReturnSet] = {}
    settled: Dict[Vector, int] = {}
    prefix = None
    for length in policy.schedule(n):
        prefix = source.prefix(length)
        if length < n:
            continue
        counts = LetterCounts(prefix)
        positions: Dict[Vector, List[int]] = {}
        for k, vector in enumerate(counts.window_vectors(n)):
            positions.setdefault(vector, []).append(k)
        for vector, where in positions.items():
            if vector in settled:
                continue
            if len(where) < 2:
                history.setdefault(vector, []).append((length, 0))
                continue
            current = _group_returns(counts, where, n, vector, ReturnSide.LEFT)
            history.setdefault(vector, []).append((length, len(current)))
            previous = latest.get(vector)
            if previous is not None and previous.class_ids == current.class_ids:
                settled[vector] = length
            latest[vector] = current
        logger.debug(f"Census n={n} at prefix {length}: {len(settled)}/{len(positions)} classes stable")
        if len(settled) == len(positions):
            break
    factor_classes = _factor_classes(prefix, n) if prefix is not None and len(prefix) >= n else {}
    entries = []
    for vector in sorted(history, key=lambda vec: class_id(vec).sort_key):
        steps = tuple(history[vector])
        if vector not in latest:
            count, example = factor_classes.get(vector, (0, None))
            entries.append(ClassCensus(class_id(vector), count, example,
                                       failure=f"class never recurs within {policy.cap} letters"))
            continue
        stable = vector in settled
        used = settled[vector] if stable else steps[-1][0]
        count, example = factor_classes.get(vector, (0, None))
        entries.append(ClassCensus(class_id(vector), count, example, latest[vector],
                                   StabilizationReport(used, stable, steps)))
    unstable = [str(e.target) for e in entries if not e.stable]
    if unstable:
        logger.warning(f"Census n={n} of {source}: unstable or non-recurring classes {unstable}")
    return LengthCensus(n, tuple(entries))


def _factor_classes(prefix: FiniteWord, n: int) -> Dict[Vector, Tuple[int, FiniteWord]]:
    """Number of distinct length-n factors in each abelian class, with the least of them."""
    symbols = LETTER_SYMBOLS[:prefix.alphabet_size]
    distinct = {prefix.letters[k:k + n] for k in range(len(prefix) - n + 1)}
    grouped: Dict[Vector, List[str]] = {}
    for factor in distinct:
        grouped.setdefault(tuple(factor.count(symbol) for symbol in symbols), []).append(factor)
    return {
        vector: (len(members), FiniteWord(min(members), prefix.alphabet_size))
        for vector, members in grouped.items()
    }


def classical_census(
    source: BaseWordSource, n: int, policy: StabilizationPolicy = StabilizationPolicy()
) -> List[Tuple[FiniteWord, FrozenSet[FiniteWord], bool]]:
    """Classical return words of every length-n factor as (factor, returns, stable), sorted by factor."""
    latest: Dict[str, FrozenSet[str]] = {}
    settled: Set[str] = set()
    prefix = None
    for length in policy.schedule(n):
        prefix = source.prefix(length)
        if length < n:
            continue
        letters = prefix.letters
        positions: Dict[str, List[int]] = {}
        for k in range(len(letters) - n + 1):
            positions.setdefault(letters[k:k + n], []).append(k)
        for factor, where in positions.items():
            if factor in settled or len(where) < 2:
                continue
            current = frozenset(letters[a:b] for a, b in zip(where, where[1:]))
            if latest.get(factor) == current:
                settled.add(factor)
            latest[factor] = current
        if len(settled) == len(positions):
            break
    size = source.alphabet_size
    return [
        (FiniteWord(factor, size), frozenset(FiniteWord(r, size) for r in returns), factor in settled)
        for factor, returns in sorted(latest.items())
    ]
