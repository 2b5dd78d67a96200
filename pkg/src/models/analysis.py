from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from src.models.returns import AbelianClassId, ReturnSet, StabilizationReport
from src.models.word import FiniteWord, Letter


@dataclass(frozen=True)
class AbaDecomposition:
    """u = a B a, the shape of a singular factor."""
    letter: Letter
    core: FiniteWord


@dataclass(frozen=True)
class FactorSet:
    n: int
    members: FrozenSet[FiniteWord]
    annotations: Mapping[FiniteWord, AbaDecomposition] = field(default_factory=dict, compare=False)

    def sorted_members(self) -> List[FiniteWord]:
        return sorted(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, word: FiniteWord) -> bool:
        return word in self.members


@dataclass(frozen=True)
class SpecialFactors:
    right: FactorSet
    left: FactorSet
    bispecial: FactorSet


class ShapeKind(Enum):
    LETTER = "letter"
    ABB = "aBb"
    OTHER = "other"


@dataclass(frozen=True)
class ReturnShape:
    kind: ShapeKind
    a: Optional[Letter] = None
    b: Optional[Letter] = None
    core: Optional[FiniteWord] = None

    def __post_init__(self):
        if self.kind is ShapeKind.ABB and self.a == self.b:
            raise ValueError("An aBb shape needs two distinct outer letters")


@dataclass(frozen=True)
class RunClassification:
    per_letter: Dict[Letter, FrozenSet[int]]
    isolated_letter: Optional[Letter] = None


@dataclass(frozen=True)
class ClassCensus:
    """Stabilized abelian returns of one abelian class of factors."""
    target: AbelianClassId
    factor_count: int
    example: Optional[FiniteWord] = None
    return_set: Optional[ReturnSet] = None
    report: Optional[StabilizationReport] = None
    failure: Optional[str] = None

    @property
    def singular(self) -> bool:
        return self.factor_count == 1

    @property
    def stable(self) -> bool:
        return self.report is not None and self.report.stable

    @property
    def return_count(self) -> Optional[int]:
        return len(self.return_set) if self.return_set is not None else None


@dataclass(frozen=True)
class LengthCensus:
    """Census of one factor length; unreached when the prefix cap is shorter than the factors."""
    n: int
    classes: Tuple[ClassCensus, ...]
    reached: bool = True


@dataclass(frozen=True)
class Witness:
    length: int
    subject: str
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'length': self.length, 'subject': self.subject, 'detail': self.detail}


@dataclass
class Verdict:
    theorem: str
    checked_lengths: Tuple[int, int]
    witnesses: List[Witness] = field(default_factory=list)
    caveats: List[Witness] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.witnesses

    @property
    def witness_length(self) -> Optional[int]:
        """Smallest factor length with a violation."""
        return min((w.length for w in self.witnesses), default=None)

    def to_dict(self) -> dict:
        return {
            'theorem': self.theorem,
            'holds': self.holds,
            'checkedLengths': list(self.checked_lengths),
            'witnessLength': self.witness_length,
            'witnesses': [w.to_dict() for w in sorted(self.witnesses, key=_witness_key)],
            'caveats': [c.to_dict() for c in sorted(self.caveats, key=_witness_key)],
            'details': self.details,
        }


def _witness_key(witness: Witness):
    return (witness.length, witness.subject)
