from abc import ABC, abstractmethod

from src.models.word import FiniteWord


class BaseWordSource(ABC):
    """Base interface for finite descriptions of infinite words."""

    @property
    @abstractmethod
    def alphabet_size(self) -> int:
        """Size of the alphabet the emitted letters belong to."""
        pass

    @abstractmethod
    def prefix(self, n: int) -> FiniteWord:
        """Return exactly the first n letters of the infinite word."""
        pass

    @abstractmethod
    def descriptor(self) -> str:
        """Canonical textual form, accepted back by WordSourceFactory.create."""
        pass

    def __str__(self) -> str:
        return self.descriptor()
