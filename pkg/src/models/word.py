from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from src.config.settings import LETTER_SYMBOLS, MAX_ALPHABET_SIZE
from src.core.errors import AlphabetError

Letter = int


def letter_symbol(letter: Letter) -> str:
    return LETTER_SYMBOLS[letter]


def symbol_letter(symbol: str) -> Letter:
    index = LETTER_SYMBOLS.find(symbol.lower())
    if index < 0:
        raise AlphabetError(f"Not a letter symbol: {symbol!r}")
    return index


@dataclass(frozen=True, order=True)
class FiniteWord:
    """A finite word over the alphabet {0, ..., alphabet_size - 1}.

    Letters are kept as their hex-digit symbols so that slicing, hashing and
    substring search run on plain strings. Ordering is lexicographic.
    """
    letters: str
    alphabet_size: int = 2

    def __post_init__(self):
        if not 1 <= self.alphabet_size <= MAX_ALPHABET_SIZE:
            raise AlphabetError(
                f"Alphabet size must be between 1 and {MAX_ALPHABET_SIZE}, got {self.alphabet_size}"
            )
        allowed = LETTER_SYMBOLS[:self.alphabet_size]
        if self.letters.strip(allowed):
            bad = next(ch for ch in self.letters if ch not in allowed)
            raise AlphabetError(f"Letter {bad!r} is outside an alphabet of size {self.alphabet_size}")

    @classmethod
    def parse(cls, text: str, alphabet_size: Optional[int] = None) -> 'FiniteWord':
        """Build a word from its textual form; the alphabet defaults to the smallest one (at least binary)."""
        letters = text.strip().lower()
        if alphabet_size is None:
            alphabet_size = max([2] + [symbol_letter(ch) + 1 for ch in set(letters)])
        return cls(letters, alphabet_size)

    @classmethod
    def empty(cls, alphabet_size: int = 2) -> 'FiniteWord':
        return cls('', alphabet_size)

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, index: Union[int, slice]) -> Union[Letter, 'FiniteWord']:
        if isinstance(index, slice):
            return FiniteWord(self.letters[index], self.alphabet_size)
        return symbol_letter(self.letters[index])

    def __iter__(self):
        return (symbol_letter(ch) for ch in self.letters)

    def __add__(self, other: 'FiniteWord') -> 'FiniteWord':
        return FiniteWord(self.letters + other.letters, max(self.alphabet_size, other.alphabet_size))

    def __str__(self) -> str:
        return self.letters if self.letters else 'ε'

    def count(self, letter: Letter) -> int:
        return self.letters.count(letter_symbol(letter))

    def is_prefix_of(self, other: 'FiniteWord') -> bool:
        return other.letters.startswith(self.letters)


@dataclass(frozen=True)
class ParikhVector:
    """Per-letter occurrence counts of a word."""
    counts: Tuple[int, ...]

    @property
    def length(self) -> int:
        return sum(self.counts)

    @property
    def alphabet_size(self) -> int:
        return len(self.counts)

    def __add__(self, other: 'ParikhVector') -> 'ParikhVector':
        size = max(len(self.counts), len(other.counts))
        left = self.counts + (0,) * (size - len(self.counts))
        right = other.counts + (0,) * (size - len(other.counts))
        return ParikhVector(tuple(a + b for a, b in zip(left, right)))

    def __getitem__(self, letter: Letter) -> int:
        return self.counts[letter]

    def __str__(self) -> str:
        return '(' + ', '.join(f"{letter_symbol(a)}:{c}" for a, c in enumerate(self.counts)) + ')'

    def to_dict(self) -> dict:
        return {letter_symbol(a): c for a, c in enumerate(self.counts)}


@dataclass(frozen=True)
class Morphism:
    """A morphism given by one non-empty image per letter of its domain."""
    images: Tuple[FiniteWord, ...]

    def __post_init__(self):
        if not self.images:
            raise AlphabetError("A morphism needs at least one image")
        if len(self.images) > MAX_ALPHABET_SIZE:
            raise AlphabetError(f"A morphism domain cannot exceed {MAX_ALPHABET_SIZE} letters")
        sizes = {image.alphabet_size for image in self.images}
        if len(sizes) != 1:
            raise AlphabetError("All morphism images must be over the same alphabet")
        if any(len(image) == 0 for image in self.images):
            raise AlphabetError("Morphism images must be non-empty")

    @classmethod
    def from_texts(cls, texts: Sequence[str]) -> 'Morphism':
        size = max(len(texts), max(FiniteWord.parse(t).alphabet_size for t in texts))
        return cls(tuple(FiniteWord.parse(t, size) for t in texts))

    @property
    def domain_size(self) -> int:
        return len(self.images)

    @property
    def codomain_size(self) -> int:
        return self.images[0].alphabet_size

    def is_prolongable(self, seed: Letter) -> bool:
        if not 0 <= seed < self.domain_size:
            return False
        image = self.images[seed]
        return len(image) >= 2 and image[0] == seed

    def __str__(self) -> str:
        return ','.join(f"{letter_symbol(a)}>{image.letters}" for a, image in enumerate(self.images))
