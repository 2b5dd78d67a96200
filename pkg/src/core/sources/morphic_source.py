from src.core.errors import SourceError
from src.models.word import FiniteWord, Letter, Morphism, letter_symbol
from .base_source import BaseWordSource


class MorphicSource(BaseWordSource):
    """The fixed point of a morphism prolongable on its seed letter."""

    def __init__(self, morphism: Morphism, seed: Letter):
        if morphism.codomain_size != morphism.domain_size:
            raise SourceError("A fixed point needs a morphism from an alphabet to itself")
        if not morphism.is_prolongable(seed):
            raise SourceError(
                f"Morphism {morphism} is not prolongable on {letter_symbol(seed)}: "
                f"the image must start with the seed and have length at least 2"
            )
        self.morphism = morphism
        self.seed = seed

    @property
    def alphabet_size(self) -> int:
        return self.morphism.domain_size

    def prefix(self, n: int) -> FiniteWord:
        if n < 0:
            raise ValueError(f"Prefix length must be non-negative, got {n}")
        images = {letter_symbol(a): image.letters for a, image in enumerate(self.morphism.images)}
        # mu^k(seed) is a prefix of mu^(k+1)(seed): extend by imaging letters already emitted
        out = list(images[letter_symbol(self.seed)])
        position = 1
        while len(out) < n:
            out.extend(images[out[position]])
            position += 1
        return FiniteWord(''.join(out[:n]), self.alphabet_size)

    def descriptor(self) -> str:
        return f"morphic:{self.morphism}:seed={letter_symbol(self.seed)}"
