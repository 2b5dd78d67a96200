from typing import Sequence

from src.core.errors import SourceError
from src.models.word import FiniteWord
from .base_source import BaseWordSource


class SturmianSource(BaseWordSource):
    """Characteristic Sturmian word of a slope given by its continued-fraction partial quotients.

    Built with the standard words t(-1) = 1, t(0) = 0, t(k) = t(k-1)^d(k) t(k-2),
    so every prefix is exact. Quotients past the listed ones repeat the last one.
    """

    def __init__(self, partial_quotients: Sequence[int]):
        quotients = tuple(int(d) for d in partial_quotients)
        if not quotients:
            raise SourceError("A continued-fraction source needs at least one partial quotient")
        if any(d < 1 for d in quotients):
            raise SourceError(f"Partial quotients must be positive, got {list(quotients)}")
        self.partial_quotients = quotients

    @property
    def alphabet_size(self) -> int:
        return 2

    def quotient(self, k: int) -> int:
        """The k-th partial quotient, k >= 1."""
        return self.partial_quotients[min(k, len(self.partial_quotients)) - 1]

    def prefix(self, n: int) -> FiniteWord:
        if n < 0:
            raise ValueError(f"Prefix length must be non-negative, got {n}")
        older, current = '1', '0'
        k = 1
        while len(current) < n:
            d = self.quotient(k)
            needed = n // len(current) + 1
            if needed < d:
                # t(k) starts with t(k-1)^needed, which already covers n letters
                current = current * needed
                break
            older, current = current, current * d + older
            k += 1
        return FiniteWord(current[:n], 2)

    def descriptor(self) -> str:
        return 'cf:' + ','.join(str(d) for d in self.partial_quotients)
