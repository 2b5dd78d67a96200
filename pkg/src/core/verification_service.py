from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional
import asyncio
import logging
import time

from tqdm import tqdm

from src.config.settings import (
    DEFAULT_MAX_FACTOR_LENGTH,
    PERIODICITY_BAND_WIDTH,
    VERIFY_WORKERS,
    WORD_CHECK_PREFIX_LENGTH,
)
from src.core.factor_service import classify_return_shape, classify_runs, detect_period, special_factors
from src.core.lexarray_service import is_k_balanced
from src.core.returns_service import abelian_trace, census, classical_census
from src.core.sources.base_source import BaseWordSource
from src.core.word_service import source_prefix
from src.models.analysis import ClassCensus, FactorSet, LengthCensus, ShapeKind, Verdict, Witness
from src.models.returns import StabilizationPolicy
from src.models.word import FiniteWord

logger = logging.getLogger(__name__)

THEOREMS = ('main', 'singular', 'structure', 'periodicity', 'corollary-w', 'returns', 'balance')


def _subject(entry: ClassCensus) -> str:
    return str(entry.example) if entry.example is not None else str(entry.target)


def _returns_detail(entry: ClassCensus) -> dict:
    return {
        'class': entry.target.to_dict(),
        'returns': [r.letters for r in entry.return_set.representatives],
        'count': entry.return_count,
    }


class VerificationService:
    """Checks the abelian-return theorems on one source, sharing the per-length census between them."""

    def __init__(self, source: BaseWordSource, max_factor_length: int = DEFAULT_MAX_FACTOR_LENGTH,
                 policy: StabilizationPolicy = StabilizationPolicy(), progress: bool = False):
        if max_factor_length < 1:
            raise ValueError(f"Maximum factor length must be at least 1, got {max_factor_length}")
        self.source = source
        self.max_factor_length = max_factor_length
        self.policy = policy
        self.progress = progress
        self._censuses: Optional[List[LengthCensus]] = None
        self._long_prefix: Optional[FiniteWord] = None

    @property
    def lengths(self) -> range:
        return range(1, self.max_factor_length + 1)

    @property
    def checked_lengths(self):
        return (1, self.max_factor_length)

    @property
    def long_prefix(self) -> FiniteWord:
        """A long prefix for word-level checks (period, balance, runs)."""
        if self._long_prefix is None:
            self._long_prefix = source_prefix(self.source, max(WORD_CHECK_PREFIX_LENGTH, 3 * self.max_factor_length))
        return self._long_prefix

    async def _census_async(self) -> List[LengthCensus]:
        """Run the per-length censuses concurrently; results are re-sorted by length."""
        tasks = [asyncio.create_task(asyncio.to_thread(census, self.source, n, self.policy)) for n in self.lengths]
        results = []
        for future in tqdm(asyncio.as_completed(tasks), total=len(tasks),
                           desc=f"Census {self.source}", disable=not self.progress):
            results.append(await future)
        return sorted(results, key=lambda c: c.n)

    def censuses(self) -> List[LengthCensus]:
        if self._censuses is not None:
            return self._censuses
        start_time = time.time()
        loop = asyncio.new_event_loop()
        asyncio.set_event_loop(loop)
        loop.set_default_executor(ThreadPoolExecutor(max_workers=VERIFY_WORKERS))
        try:
            self._censuses = loop.run_until_complete(self._census_async())
        finally:
            loop.close()
        classes = sum(len(c.classes) for c in self._censuses)
        logger.info(
            f"Census of {self.source} up to length {self.max_factor_length}: "
            f"{classes} classes in {time.time() - start_time:.2f} seconds"
        )
        return self._censuses

    def _stable_entries(self, verdict: Verdict):
        """Yield (n, entry) for stable classes; record the others as caveats."""
        for length_census in self.censuses():
            if not length_census.reached:
                verdict.caveats.append(Witness(length_census.n, f'length {length_census.n}', {
                    'reason': f'the prefix cap {self.policy.cap} is shorter than the factors',
                }))
                continue
            for entry in length_census.classes:
                if entry.failure is not None:
                    verdict.caveats.append(Witness(length_census.n, _subject(entry), {'reason': entry.failure}))
                elif not entry.stable:
                    verdict.caveats.append(Witness(length_census.n, _subject(entry), {
                        'reason': 'returns did not stabilize',
                        'history': [list(step) for step in entry.report.history],
                    }))
                else:
                    yield length_census.n, entry

    def _finish(self, verdict: Verdict) -> Verdict:
        if verdict.holds:
            logger.info(f"{verdict.theorem} holds on {self.source} for lengths {verdict.checked_lengths}"
                        f" ({len(verdict.caveats)} caveats)")
        else:
            logger.info(f"{verdict.theorem} fails on {self.source}: {len(verdict.witnesses)} witnesses,"
                        f" smallest at length {verdict.witness_length}")
        return verdict

    def verify_main(self) -> Verdict:
        """Every abelian class has two or three abelian returns."""
        verdict = Verdict('main', self.checked_lengths)
        counts: Dict[int, int] = {}
        for n, entry in self._stable_entries(verdict):
            counts[entry.return_count] = counts.get(entry.return_count, 0) + 1
            if entry.return_count not in (2, 3):
                verdict.witnesses.append(Witness(n, _subject(entry), _returns_detail(entry)))
        verdict.details['returnCountHistogram'] = {str(k): v for k, v in sorted(counts.items())}
        return self._finish(verdict)

    def verify_singular(self) -> Verdict:
        """A class has exactly two abelian returns iff it holds a single factor."""
        verdict = Verdict('singular', self.checked_lengths)
        for n, entry in self._stable_entries(verdict):
            if (entry.return_count == 2) != entry.singular:
                detail = _returns_detail(entry)
                detail['factorsInClass'] = entry.factor_count
                verdict.witnesses.append(Witness(n, _subject(entry), detail))
        return self._finish(verdict)

    def verify_structure(self) -> Verdict:
        """At most one return class per length >= 2, and every return is a letter or aBb with B bispecial."""
        verdict = Verdict('structure', self.checked_lengths)
        bispecials: Dict[int, FactorSet] = {}
        long_prefix = self.long_prefix
        for n, entry in self._stable_entries(verdict):
            lengths = [c.class_id.length for c in entry.return_set.classes if c.class_id.length >= 2]
            repeated = sorted({length for length in lengths if lengths.count(length) > 1})
            if repeated:
                detail = _returns_detail(entry)
                detail['repeatedLengths'] = repeated
                verdict.witnesses.append(Witness(n, _subject(entry), detail))
            for representative in entry.return_set.representatives:
                core_length = len(representative) - 2
                if core_length >= 0 and core_length not in bispecials:
                    bispecials[core_length] = special_factors(long_prefix, core_length).bispecial
                shape = classify_return_shape(representative, long_prefix, bispecials.get(core_length))
                if shape.kind is ShapeKind.OTHER:
                    detail = _returns_detail(entry)
                    detail['badReturn'] = representative.letters
                    verdict.witnesses.append(Witness(n, _subject(entry), detail))
        return self._finish(verdict)

    def verify_periodicity(self) -> Verdict:
        """At most k returns everywhere forces periodicity; aperiodic words reach k + 1 returns in every band of lengths."""
        verdict = Verdict('periodicity', self.checked_lengths)
        k = self.source.alphabet_size
        period = detect_period(self.long_prefix)
        most: Dict[int, int] = {n: 0 for n in self.lengths}
        single_return = []
        least_count = None
        for n, entry in self._stable_entries(verdict):
            most[n] = max(most[n], entry.return_count)
            least_count = entry.return_count if least_count is None else min(least_count, entry.return_count)
            if entry.return_count == 1:
                single_return.append({'length': n, 'factor': _subject(entry),
                                      'returns': [r.letters for r in entry.return_set.representatives]})
        at_most_k = all(count <= k for count in most.values())
        if at_most_k and not verdict.caveats and period is None:
            verdict.witnesses.append(Witness(self.max_factor_length, 'word', {
                'reason': f'every class has at most {k} abelian returns but no period was detected',
                'prefixLength': len(self.long_prefix),
            }))
        unreached = {c.n for c in self.censuses() if not c.reached}
        if period is None:
            for start in range(1, self.max_factor_length + 1, PERIODICITY_BAND_WIDTH):
                band = range(start, min(start + PERIODICITY_BAND_WIDTH, self.max_factor_length + 1))
                if unreached.isdisjoint(band) and all(most[n] <= k for n in band):
                    verdict.witnesses.append(Witness(start, f'lengths {band.start}..{band.stop - 1}', {
                        'reason': f'aperiodic word without a class of more than {k} abelian returns',
                        'maxReturns': {str(n): most[n] for n in band},
                    }))
        verdict.details.update({
            'alphabetSize': k,
            'period': period,
            'prefixLength': len(self.long_prefix),
            'minReturns': least_count,
            'maxReturnsPerLength': {str(n): most[n] for n in self.lengths},
            'singleReturnClasses': single_return,
        })
        return self._finish(verdict)

    def verify_corollary_w(self) -> Verdict:
        verdict = corollary_w_form_check(self.long_prefix)
        verdict.checked_lengths = self.checked_lengths
        return self._finish(verdict)

    def verify_classical_returns(self) -> Verdict:
        """Every factor has exactly two classical return words."""
        verdict = Verdict('returns', self.checked_lengths)
        single = []
        for n in self.lengths:
            if n > self.policy.cap:
                verdict.caveats.append(Witness(n, f'length {n}', {
                    'reason': f'the prefix cap {self.policy.cap} is shorter than the factors',
                }))
                continue
            for factor, returns, stable in classical_census(self.source, n, self.policy):
                if not stable:
                    verdict.caveats.append(Witness(n, factor.letters, {'reason': 'return words did not stabilize'}))
                    continue
                if len(returns) == 1:
                    single.append(factor.letters)
                if len(returns) != 2:
                    verdict.witnesses.append(Witness(n, factor.letters, {
                        'returns': sorted(r.letters for r in returns),
                        'count': len(returns),
                    }))
        verdict.details['singleReturnFactors'] = single
        return self._finish(verdict)

    def verify_balance(self) -> Verdict:
        """At most three abelian returns everywhere implies 2-balance, and with three classes the extreme ones are isolated."""
        verdict = Verdict('balance', self.checked_lengths)
        entries = list(self._stable_entries(verdict))
        premise = all(entry.return_count <= 3 for _, entry in entries)
        verdict.details['premise'] = premise
        if self.source.alphabet_size != 2:
            verdict.caveats.append(Witness(0, 'word', {'reason': 'balance checks need a binary word'}))
            return self._finish(verdict)
        two_balanced = is_k_balanced(self.long_prefix, 2)
        verdict.details['twoBalanced'] = two_balanced
        verdict.details['oneBalanced'] = is_k_balanced(self.long_prefix, 1)
        if not premise:
            return self._finish(verdict)
        if not two_balanced:
            verdict.witnesses.append(Witness(self.max_factor_length, 'word', {
                'reason': 'at most three abelian returns everywhere but the word is not 2-balanced',
            }))
        for n in self.lengths:
            trace = abelian_trace(self.long_prefix, n)
            classes = trace.distinct()
            if len(classes) != 3:
                continue
            by_ones = sorted(classes, key=lambda c: c.vector[1])
            isolated = set(trace.isolated_ids())
            for extreme in (by_ones[0], by_ones[-1]):
                if extreme not in isolated:
                    verdict.witnesses.append(Witness(n, str(extreme), {
                        'reason': 'extreme abelian class is not isolated in the trace',
                    }))
        return self._finish(verdict)

    def verify(self, theorem: str) -> Verdict:
        handlers = {
            'main': self.verify_main,
            'singular': self.verify_singular,
            'structure': self.verify_structure,
            'periodicity': self.verify_periodicity,
            'corollary-w': self.verify_corollary_w,
            'returns': self.verify_classical_returns,
            'balance': self.verify_balance,
        }
        if theorem not in handlers:
            raise ValueError(f"Unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
        try:
            return handlers[theorem]()
        except Exception as e:
            logger.error(f"Error verifying {theorem} on {self.source}: {str(e)}")
            raise


def corollary_w_form_check(prefix: FiniteWord) -> Verdict:
    """After naming letters so that 1 is isolated, interior runs of 0 have lengths {l1} or {l1, l1 + 1}."""
    verdict = Verdict('corollary-w', (1, len(prefix)))
    if prefix.alphabet_size != 2 or prefix.letters.strip('01'):
        verdict.witnesses.append(Witness(0, 'word', {'reason': 'the check needs a binary word'}))
        return verdict
    runs = classify_runs(prefix)
    spectrum = {str(a): sorted(lengths) for a, lengths in runs.per_letter.items()}
    verdict.details['runSpectrum'] = spectrum
    verdict.details['isolated'] = runs.isolated_letter
    if runs.isolated_letter is None:
        verdict.witnesses.append(Witness(0, 'word', {
            'reason': 'no isolated letter',
            'runSpectrum': spectrum,
            'prefixLength': len(prefix),
        }))
        return verdict
    other = sorted(runs.per_letter[1 - runs.isolated_letter])
    l1 = other[0] if other else None
    verdict.details['l1'] = l1
    if not other or other not in ([l1], [l1, l1 + 1]):
        verdict.witnesses.append(Witness(0, 'word', {
            'reason': 'runs of the non-isolated letter are not {l1} or {l1, l1+1}',
            'runSpectrum': spectrum,
            'prefixLength': len(prefix),
        }))
    return verdict


def verify_sturmian_characterization(source: BaseWordSource, max_factor_length: int,
                                     policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_main()


def verify_singular_theorem(source: BaseWordSource, max_factor_length: int,
                            policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_singular()


def verify_return_structure(source: BaseWordSource, max_factor_length: int,
                            policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_structure()


def verify_periodicity_lemma(source: BaseWordSource, max_factor_length: int,
                             policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_periodicity()


def verify_classical_returns(source: BaseWordSource, max_factor_length: int,
                             policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_classical_returns()


def verify_balance_lemma(source: BaseWordSource, max_factor_length: int,
                         policy: StabilizationPolicy = StabilizationPolicy()) -> Verdict:
    return VerificationService(source, max_factor_length, policy).verify_balance()
