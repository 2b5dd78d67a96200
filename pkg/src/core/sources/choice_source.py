from typing import Sequence

from src.core.errors import SourceError
from src.models.word import FiniteWord
from .base_source import BaseWordSource


class ChoiceSource(BaseWordSource):
    """A word of {piece_0, piece_1, ...}^omega whose i-th block is chosen by the i-th selector letter."""

    def __init__(self, pieces: Sequence[FiniteWord], selector: BaseWordSource):
        pieces = tuple(pieces)
        if not pieces:
            raise SourceError("A choice source needs at least one piece")
        if any(len(piece) == 0 for piece in pieces):
            raise SourceError("Choice pieces must be non-empty")
        if selector.alphabet_size != len(pieces):
            raise SourceError(
                f"Selector alphabet has {selector.alphabet_size} letters but there are {len(pieces)} pieces"
            )
        self.pieces = pieces
        self.selector = selector

    @property
    def alphabet_size(self) -> int:
        return max(piece.alphabet_size for piece in self.pieces)

    def prefix(self, n: int) -> FiniteWord:
        if n < 0:
            raise ValueError(f"Prefix length must be non-negative, got {n}")
        blocks = n // min(len(piece) for piece in self.pieces) + 1
        choices = self.selector.prefix(blocks)
        text = ''.join(self.pieces[letter].letters for letter in choices)
        return FiniteWord(text[:n], self.alphabet_size)

    def descriptor(self) -> str:
        pieces = '|'.join(piece.letters for piece in self.pieces)
        return f"choice:{pieces}:selector={self.selector.descriptor()}"
