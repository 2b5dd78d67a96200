from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

from src.config.settings import (
    MAX_PREFIX_LENGTH,
    POLICY_GROWTH_FACTOR,
    POLICY_INITIAL_LENGTH,
    POLICY_INITIAL_PER_LETTER,
    POLICY_MAX_LENGTH,
)
from src.core.errors import PrefixBudgetError
from src.models.word import FiniteWord, ParikhVector


@dataclass(frozen=True)
class Occurrence:
    position: int
    length: int


@dataclass(frozen=True)
class AbelianClassId:
    """An abelian class of words: a length and the Parikh vector shared by its members."""
    length: int
    vector: ParikhVector

    def __post_init__(self):
        if self.vector.length != self.length:
            raise ValueError(f"Parikh vector {self.vector} does not sum to {self.length}")

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (self.length, self.vector.counts)

    def __lt__(self, other: 'AbelianClassId') -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.length}{self.vector}"

    def to_dict(self) -> dict:
        return {'length': self.length, 'vector': self.vector.to_dict()}


@dataclass(frozen=True)
class ReturnClass:
    """One abelian class of return words with its lexicographically least observed member."""
    class_id: AbelianClassId
    representative: FiniteWord

    def to_dict(self) -> dict:
        return {
            'vector': self.class_id.vector.to_dict(),
            'representative': self.representative.letters,
        }


@dataclass(frozen=True)
class ReturnSet:
    """Abelian classes of the returns to one target class, ordered by (length, representative)."""
    target: AbelianClassId
    classes: Tuple[ReturnClass, ...]
    occurrence_count: int
    prefix_length: int = 0

    @property
    def class_ids(self) -> FrozenSet[AbelianClassId]:
        return frozenset(c.class_id for c in self.classes)

    @property
    def representatives(self) -> List[FiniteWord]:
        return [c.representative for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        return {
            'target': self.target.to_dict(),
            'classes': [c.to_dict() for c in self.classes],
            'occurrences': self.occurrence_count,
        }


@dataclass(frozen=True)
class StabilizationPolicy:
    """Doubling schedule for approximating an infinite-word notion on prefixes."""
    initial: Optional[int] = None
    growth: int = POLICY_GROWTH_FACTOR
    cap: int = POLICY_MAX_LENGTH

    def __post_init__(self):
        if self.initial is not None and self.initial <= 0:
            raise ValueError("Initial prefix length must be positive")
        if self.growth < 2:
            raise ValueError("Growth factor must be at least 2")
        if self.cap <= 0:
            raise ValueError("Maximum prefix length must be positive")
        if self.cap > MAX_PREFIX_LENGTH:
            raise PrefixBudgetError(f"Maximum prefix length {self.cap} exceeds the budget of {MAX_PREFIX_LENGTH} letters")
        if self.initial is not None and self.cap < self.initial:
            raise ValueError("Maximum prefix length must not be below the initial length")

    @classmethod
    def parse(cls, text: str) -> 'StabilizationPolicy':
        """Parse 'initial,growth,cap'; an empty or 'auto' initial keeps the length-dependent default."""
        parts = [p.strip() for p in text.split(',')]
        if len(parts) != 3:
            raise ValueError(f"Policy must be 'initial,growth,cap', got {text!r}")
        initial = None if parts[0] in ('', 'auto') else int(parts[0])
        return cls(initial, int(parts[1]), int(parts[2]))

    def initial_for(self, factor_length: int) -> int:
        if self.initial is not None:
            return self.initial
        return min(self.cap, max(POLICY_INITIAL_LENGTH, POLICY_INITIAL_PER_LETTER * factor_length))

    def schedule(self, factor_length: int) -> List[int]:
        """Prefix lengths to try, strictly increasing and ending at the cap at the latest."""
        lengths = [self.initial_for(factor_length)]
        while lengths[-1] < self.cap:
            lengths.append(min(self.cap, lengths[-1] * self.growth))
        return lengths

    def describe(self) -> str:
        return f"{self.initial or 'auto'},{self.growth},{self.cap}"


@dataclass(frozen=True)
class StabilizationReport:
    prefix_used: int
    stable: bool
    history: Tuple[Tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            'prefixUsed': self.prefix_used,
            'stable': self.stable,
            'history': [list(step) for step in self.history],
        }


@dataclass(frozen=True)
class AbelianTrace:
    """The abelian class of every length-n window of a word, in order."""
    n: int
    ids: Tuple[AbelianClassId, ...]

    def distinct(self) -> List[AbelianClassId]:
        return sorted(set(self.ids))

    def isolated_ids(self) -> List[AbelianClassId]:
        """Classes that occur but never twice in a row."""
        repeated = {a for a, b in zip(self.ids, self.ids[1:]) if a == b}
        return [c for c in self.distinct() if c not in repeated]

    def __len__(self) -> int:
        return len(self.ids)
