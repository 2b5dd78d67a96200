from dataclasses import dataclass
from typing import List, Tuple

from src.models.word import FiniteWord


@dataclass(frozen=True)
class Orbit:
    """The cyclic shifts of a binary word with p ones and length q, sorted lexicographically."""
    p: int
    q: int
    elements: Tuple[FiniteWord, ...]

    @property
    def least(self) -> FiniteWord:
        return self.elements[0]

    def __contains__(self, word: FiniteWord) -> bool:
        return word in self.elements

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class LexArray:
    """The q x q matrix whose i-th row is the i-th smallest element of an orbit."""
    p: int
    q: int
    rows: Tuple[str, ...]

    def cell(self, i: int, j: int) -> int:
        return int(self.rows[i % self.q][j % self.q])

    def row(self, i: int) -> FiniteWord:
        return FiniteWord(self.rows[i % self.q])

    def row_prefix(self, i: int, j: int) -> FiniteWord:
        """w_(i)[j]: the prefix of length j + 1 of row i."""
        return FiniteWord(self.rows[i % self.q][:j + 1])

    def column(self, j: int) -> FiniteWord:
        return FiniteWord(''.join(row[j % self.q] for row in self.rows))

    def grid(self) -> str:
        return '\n'.join(self.rows)

    def to_lines(self) -> List[str]:
        return list(self.rows)
