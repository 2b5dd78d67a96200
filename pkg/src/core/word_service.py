from itertools import groupby
from math import gcd
from typing import Dict, FrozenSet, Union
import logging

from src.config.settings import MAX_PREFIX_LENGTH
from src.core.errors import AlphabetError, PrefixBudgetError
from src.core.sources.base_source import BaseWordSource
from src.core.sources.factory import WordSourceFactory
from src.models.word import FiniteWord, Letter, Morphism, ParikhVector, letter_symbol

logger = logging.getLogger(__name__)


def source_prefix(source: Union[BaseWordSource, str], n: int) -> FiniteWord:
    """First n letters of the infinite word described by a source or a source descriptor."""
    if n < 0:
        raise ValueError(f"Prefix length must be non-negative, got {n}")
    try:
        if n > MAX_PREFIX_LENGTH:
            raise PrefixBudgetError(f"Prefix length {n} exceeds the budget of {MAX_PREFIX_LENGTH} letters")
        if isinstance(source, str):
            source = WordSourceFactory.create(source)
        return source.prefix(n)
    except Exception as e:
        logger.error(f"Error generating a prefix of length {n} of {source}: {str(e)}")
        raise


def parikh(u: FiniteWord) -> ParikhVector:
    return ParikhVector(tuple(u.letters.count(letter_symbol(a)) for a in range(u.alphabet_size)))


def abelian_equiv(u: FiniteWord, v: FiniteWord) -> bool:
    if u.alphabet_size != v.alphabet_size:
        raise AlphabetError("Abelian equivalence compares words over the same alphabet")
    return len(u) == len(v) and parikh(u) == parikh(v)


def mechanical_word(p: int, q: int) -> FiniteWord:
    """Lower mechanical (Christoffel) word of slope p/q: letter i is floor((i+1)p/q) - floor(ip/q)."""
    if not 1 <= p < q:
        raise ValueError(f"Slope p/q needs 1 <= p < q, got {p}/{q}")
    if gcd(p, q) != 1:
        raise ValueError(f"Slope p/q needs gcd(p, q) = 1, got gcd({p}, {q}) = {gcd(p, q)}")
    return FiniteWord(''.join(str((i + 1) * p // q - i * p // q) for i in range(q)), 2)


def apply_morphism(m: Morphism, u: FiniteWord) -> FiniteWord:
    if any(a >= m.domain_size for a in u):
        raise AlphabetError(f"Word {u} uses letters outside the morphism domain")
    images = {letter_symbol(a): image.letters for a, image in enumerate(m.images)}
    return FiniteWord(''.join(images[ch] for ch in u.letters), m.codomain_size)


def run_spectrum(u: FiniteWord) -> Dict[Letter, FrozenSet[int]]:
    """Lengths k such that b a^k c occurs in u with b, c != a, for every letter a.

    Runs touching either end of u are left out: their length in the infinite word is unknown.
    """
    if len(u) == 0:
        raise ValueError("Run spectrum needs a non-empty word")
    runs = [(ch, sum(1 for _ in group)) for ch, group in groupby(u.letters)]
    spectrum: Dict[Letter, set] = {a: set() for a in range(u.alphabet_size)}
    for ch, length in runs[1:-1]:
        spectrum[int(ch, 16)].add(length)
    return {a: frozenset(lengths) for a, lengths in spectrum.items()}
