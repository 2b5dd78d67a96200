"""Exceptions raised by the word analysis services."""


class WordsError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(WordsError, ValueError):
    """A letter falls outside its alphabet, or the alphabet is too large."""


class SourceError(WordsError, ValueError):
    """A word source description is unusable (empty period, non-prolongable morphism, ...)."""


class DescriptorParseError(SourceError):
    """A textual source descriptor could not be parsed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class InsufficientOccurrencesError(WordsError):
    """The queried word or class occurs fewer than two times in the scanned prefix."""


class ClassNeverRecursError(InsufficientOccurrencesError):
    """The class did not occur twice before the prefix budget ran out."""


class OrbitDegenerateError(WordsError, ValueError):
    """The orbit machinery needs a binary word with gcd(|w|_1, |w|) = 1."""


class FactorLengthError(WordsError, ValueError):
    """A factor length is out of range for the scanned prefix."""


class PrefixBudgetError(WordsError, ValueError):
    """A requested prefix is longer than MAX_PREFIX_LENGTH."""
