from enum import Enum
from typing import List, Tuple
import logging

from src.core.errors import AlphabetError, DescriptorParseError, SourceError
from src.models.word import FiniteWord, Morphism, symbol_letter
from .base_source import BaseWordSource
from .choice_source import ChoiceSource
from .morphic_source import MorphicSource
from .periodic_source import PeriodicSource
from .sturmian_source import SturmianSource

logger = logging.getLogger(__name__)

ELLIPSES = ('...', '…')


class WordSourceType(Enum):
    PERIODIC = "periodic"
    MORPHIC = "morphic"
    STURMIAN_CF = "cf"
    CHOICE = "choice"


class WordSourceFactory:
    """Builds word sources from their textual descriptors.

    Grammar (letters are hex digits):
        periodic:<word>[:alphabet=<k>]
        morphic:<a>><image>,<b>><image>,...:seed=<a>
        cf:<d1>,<d2>,...[,...]
        choice:<piece>|<piece>|...:selector=<descriptor>
    Parse errors carry the byte offset of the offending token.
    """

    @classmethod
    def create(cls, descriptor: str) -> BaseWordSource:
        source = _DescriptorParser(descriptor).parse(0, len(descriptor))
        logger.debug(f"Parsed source descriptor {descriptor!r} as {source.descriptor()!r}")
        return source

    @staticmethod
    def source_type(descriptor: str) -> WordSourceType:
        kind = descriptor.split(':', 1)[0].strip().lower()
        try:
            return WordSourceType(kind)
        except ValueError as e:
            raise DescriptorParseError(f"Unsupported source kind {kind!r}", 0) from e


class _DescriptorParser:
    def __init__(self, text: str):
        self.text = text

    def fail(self, message: str, index: int):
        raise DescriptorParseError(message, len(self.text[:index].encode('utf-8')))

    def parse(self, start: int, end: int) -> BaseWordSource:
        colon = self.text.find(':', start, end)
        if colon < 0:
            self.fail("Expected '<kind>:' at the start of a source descriptor", start)
        kind = self.text[start:colon].strip().lower()
        try:
            source_type = WordSourceType(kind)
        except ValueError:
            self.fail(f"Unsupported source kind {kind!r}", start)
        body = colon + 1
        try:
            if source_type == WordSourceType.PERIODIC:
                return self._periodic(body, end)
            if source_type == WordSourceType.MORPHIC:
                return self._morphic(body, end)
            if source_type == WordSourceType.STURMIAN_CF:
                return self._continued_fraction(body, end)
            return self._choice(body, end)
        except (AlphabetError, SourceError) as e:
            if isinstance(e, DescriptorParseError):
                raise
            self.fail(str(e), body)

    def _word(self, start: int, end: int, alphabet_size: int = None) -> FiniteWord:
        token = self.text[start:end].strip()
        if not token:
            self.fail("Expected a non-empty word", start)
        for offset, ch in enumerate(token):
            try:
                symbol_letter(ch)
            except AlphabetError:
                self.fail(f"Invalid letter {ch!r}", start + offset)
        return FiniteWord.parse(token, alphabet_size)

    def _periodic(self, start: int, end: int) -> BaseWordSource:
        options = self.text.find(':', start, end)
        word_end = end if options < 0 else options
        period = self._word(start, word_end)
        if options >= 0:
            key, _, value = self.text[options + 1:end].partition('=')
            if key.strip() != 'alphabet' or not value.strip().isdigit():
                self.fail("Expected ':alphabet=<k>'", options + 1)
            period = FiniteWord.parse(period.letters, int(value))
        return PeriodicSource(period)

    def _morphic(self, start: int, end: int) -> BaseWordSource:
        marker = self.text.rfind(':seed=', start, end)
        if marker < 0:
            self.fail("Expected ':seed=<letter>' after the morphism rules", end)
        seed_text = self.text[marker + len(':seed='):end].strip()
        if len(seed_text) != 1:
            self.fail("The seed must be a single letter", marker + len(':seed='))
        rules: List[Tuple[int, str]] = []
        for rule_start, rule_end in self._split(start, marker, ','):
            rule = self.text[rule_start:rule_end]
            letter, arrow, image = rule.partition('>')
            if not arrow or len(letter.strip()) != 1:
                self.fail("Expected a rule '<letter>><image>'", rule_start)
            image_start = rule_start + len(letter) + 1
            self._word(image_start, rule_end)
            rules.append((symbol_letter(letter.strip()), image.strip()))
        letters = sorted(letter for letter, _ in rules)
        if letters != list(range(len(rules))):
            self.fail("Morphism rules must cover the letters 0.. exactly once", start)
        images = [image for _, image in sorted(rules)]
        return MorphicSource(Morphism.from_texts(images), symbol_letter(seed_text))

    def _continued_fraction(self, start: int, end: int) -> BaseWordSource:
        quotients = []
        for token_start, token_end in self._split(start, end, ','):
            token = self.text[token_start:token_end].strip()
            if token in ELLIPSES:
                if token_end != end:
                    self.fail("An ellipsis may only end the quotient list", token_start)
                continue
            if token.endswith(ELLIPSES):
                token = token.rstrip('.…')
            if not token.isdigit() or int(token) < 1:
                self.fail(f"Partial quotients must be positive integers, got {token!r}", token_start)
            quotients.append(int(token))
        if not quotients:
            self.fail("Expected at least one partial quotient", start)
        return SturmianSource(quotients)

    def _choice(self, start: int, end: int) -> BaseWordSource:
        marker = self.text.find(':selector=', start, end)
        if marker < 0:
            self.fail("Expected ':selector=<descriptor>' after the pieces", end)
        spans = self._split(start, marker, '|')
        alphabet_size = max(self._word(s, e).alphabet_size for s, e in spans)
        pieces = [self._word(s, e, alphabet_size) for s, e in spans]
        selector = self.parse(marker + len(':selector='), end)
        return ChoiceSource(pieces, selector)

    def _split(self, start: int, end: int, separator: str) -> List[Tuple[int, int]]:
        spans = []
        position = start
        while True:
            cut = self.text.find(separator, position, end)
            if cut < 0:
                spans.append((position, end))
                return spans
            spans.append((position, cut))
            position = cut + 1
