from typing import Dict, Iterable, Optional, Set
import logging

from src.config.settings import LETTER_SYMBOLS
from src.core.errors import FactorLengthError
from src.core.word_service import run_spectrum
from src.models.analysis import (
    AbaDecomposition,
    FactorSet,
    ReturnShape,
    RunClassification,
    ShapeKind,
    SpecialFactors,
)
from src.models.word import FiniteWord

logger = logging.getLogger(__name__)


def _check_length(prefix: FiniteWord, n: int, lowest: int = 1, extra: int = 0):
    if not lowest <= n or n + extra > len(prefix):
        raise FactorLengthError(f"Factor length {n} is out of range for a prefix of length {len(prefix)}")


def _windows(prefix: FiniteWord, n: int) -> Set[str]:
    return {prefix.letters[k:k + n] for k in range(len(prefix) - n + 1)}


def _factor_set(texts: Iterable[str], n: int, alphabet_size: int) -> FactorSet:
    return FactorSet(n, frozenset(FiniteWord(t, alphabet_size) for t in texts))


def factors(prefix: FiniteWord, n: int) -> FactorSet:
    _check_length(prefix, n)
    return _factor_set(_windows(prefix, n), n, prefix.alphabet_size)


def subword_complexity(prefix: FiniteWord, n: int) -> int:
    _check_length(prefix, n)
    return len(_windows(prefix, n))


def _vector(text: str, alphabet_size: int):
    return tuple(text.count(symbol) for symbol in LETTER_SYMBOLS[:alphabet_size])


def abelian_complexity(prefix: FiniteWord, n: int) -> int:
    _check_length(prefix, n)
    return len({_vector(t, prefix.alphabet_size) for t in _windows(prefix, n)})


def special_factors(prefix: FiniteWord, n: int) -> SpecialFactors:
    """Right, left and bispecial factors of length n, judged on in-prefix extensions only.

    The last window has no known successor and the first none known predecessor; they
    contribute no extension. n = 0 is allowed: the empty word is special when two letters occur.
    """
    _check_length(prefix, n, lowest=0, extra=1)
    letters = prefix.letters
    right: Dict[str, Set[str]] = {}
    left: Dict[str, Set[str]] = {}
    for k in range(len(letters) - n):
        right.setdefault(letters[k:k + n], set()).add(letters[k + n])
    for k in range(1, len(letters) - n + 1):
        left.setdefault(letters[k:k + n], set()).add(letters[k - 1])
    right_special = {u for u, successors in right.items() if len(successors) >= 2}
    left_special = {u for u, predecessors in left.items() if len(predecessors) >= 2}
    size = prefix.alphabet_size
    return SpecialFactors(
        _factor_set(right_special, n, size),
        _factor_set(left_special, n, size),
        _factor_set(right_special & left_special, n, size),
    )


def singular_factors(prefix: FiniteWord, n: int) -> FactorSet:
    """Factors that are alone in their abelian class, annotated with their aBa shape when they have one."""
    _check_length(prefix, n)
    by_vector: Dict[tuple, list] = {}
    for text in _windows(prefix, n):
        by_vector.setdefault(_vector(text, prefix.alphabet_size), []).append(text)
    singular = sorted(texts[0] for texts in by_vector.values() if len(texts) == 1)
    annotations = {}
    for text in singular:
        if n >= 2 and text[0] == text[-1]:
            word = FiniteWord(text, prefix.alphabet_size)
            annotations[word] = AbaDecomposition(word[0], word[1:-1])
    members = frozenset(FiniteWord(t, prefix.alphabet_size) for t in singular)
    return FactorSet(n, members, annotations)


def classify_return_shape(r: FiniteWord, prefix: FiniteWord, bispecials: Optional[FactorSet] = None) -> ReturnShape:
    """letter, aBb with a != b and B bispecial in the prefix, or other."""
    if len(r) == 0:
        raise ValueError("Cannot classify the empty word")
    if len(r) == 1:
        return ReturnShape(ShapeKind.LETTER, a=r[0])
    a, b, core = r[0], r[-1], r[1:-1]
    if a == b:
        return ReturnShape(ShapeKind.OTHER)
    if bispecials is None:
        if len(core) + 1 > len(prefix):
            return ReturnShape(ShapeKind.OTHER)
        bispecials = special_factors(prefix, len(core)).bispecial
    if core in bispecials:
        return ReturnShape(ShapeKind.ABB, a=a, b=b, core=core)
    return ReturnShape(ShapeKind.OTHER)


def detect_period(prefix: FiniteWord) -> Optional[int]:
    """Least period T of the prefix when it repeats at least three times (3T <= |prefix|), else None.

    Least period = |prefix| - longest proper border (prefix function); any period up to a third of
    the length is a multiple of it.
    """
    text = prefix.letters
    n = len(text)
    if n == 0:
        return None
    border = [0] * n
    for i in range(1, n):
        k = border[i - 1]
        while k and text[i] != text[k]:
            k = border[k - 1]
        if text[i] == text[k]:
            k += 1
        border[i] = k
    period = n - border[-1]
    return period if 3 * period <= n else None


def classify_runs(prefix: FiniteWord) -> RunClassification:
    """Run spectrum plus the isolated letter: one whose interior runs all have length 1 (1 is preferred)."""
    spectrum = run_spectrum(prefix)
    isolated = [a for a, lengths in spectrum.items() if lengths and lengths <= {1}]
    return RunClassification(spectrum, max(isolated) if isolated else None)
