from src.core.errors import SourceError
from src.models.word import FiniteWord
from .base_source import BaseWordSource


class PeriodicSource(BaseWordSource):
    """The purely periodic word u u u ..."""

    def __init__(self, period: FiniteWord):
        if len(period) == 0:
            raise SourceError("A periodic source needs a non-empty period")
        self.period = period

    @property
    def alphabet_size(self) -> int:
        return self.period.alphabet_size

    def prefix(self, n: int) -> FiniteWord:
        if n < 0:
            raise ValueError(f"Prefix length must be non-negative, got {n}")
        repeats = -(-n // len(self.period))
        return FiniteWord((self.period.letters * repeats)[:n], self.alphabet_size)

    def descriptor(self) -> str:
        text = f"periodic:{self.period.letters}"
        if self.alphabet_size != FiniteWord.parse(self.period.letters).alphabet_size:
            text += f":alphabet={self.alphabet_size}"
        return text
