import sys
import time
from contextlib import nullcontext
from pathlib import Path
from typing import Optional
import logging

import click
from colorama import init, Fore, Style
from pydantic import ValidationError

from src import __version__
from src.config import settings
from src.config.settings import DEFAULT_MAX_FACTOR_LENGTH, DEFAULT_OUTPUT_FORMAT, LOG_LEVEL
from src.core import report_service
from src.core.errors import ClassNeverRecursError, WordsError
from src.core.lexarray_service import balanced_orbit_array, column_shift_check, is_balanced_jz, lex_array
from src.core.profiling.memory_profiler import AnalysisProfiler
from src.core.returns_service import ReturnSide, stabilized_abelian_returns
from src.core.sources.factory import WordSourceFactory
from src.core.verification_service import THEOREMS, VerificationService
from src.core.word_service import source_prefix
from src.models.report import PolicyConfig, Report, RunConfig
from src.models.returns import StabilizationPolicy
from src.models.word import FiniteWord

# Initialize colorama for cross-platform colored output
init()

# Logs go to stderr so stdout carries only the report
logging.basicConfig(
    level=LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler()
    ]
)

logger = logging.getLogger(__name__)


class WordsGroup(click.Group):
    """Maps every kind of invalid input to exit code 3; click's own usage errors would otherwise exit 2."""

    def main(self, *args, **kwargs):
        kwargs['standalone_mode'] = False
        try:
            code = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            code = report_service.EXIT_INVALID_INPUT
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            code = report_service.EXIT_INVALID_INPUT
        sys.exit(code or 0)


class Session:
    """Global options shared by every subcommand."""

    def __init__(self, source: Optional[str], max_factor_length: int, policy: StabilizationPolicy,
                 output_format: str, out: Optional[str], profile: bool, timing: bool):
        self.source_text = source
        self.max_factor_length = max_factor_length
        self.policy = policy
        self.output_format = output_format
        self.out = out
        self.profile = profile
        self.timing = timing

    def source(self):
        if not self.source_text:
            raise click.UsageError("This command needs --source")
        return WordSourceFactory.create(self.source_text)

    def config(self, command: str, **arguments) -> RunConfig:
        return RunConfig(
            source=self.source_text,
            command=command,
            maxFactorLength=self.max_factor_length,
            policy=PolicyConfig.from_policy(self.policy),
            format=self.output_format,
            out=self.out,
            arguments=arguments,
        )

    def emit(self, config: RunConfig, payload: dict, duration: float) -> int:
        report = Report(config=config, version=__version__, payload=payload, duration=duration)
        text = report_service.render(report, self.output_format, include_timing=self.timing)
        if self.out:
            Path(self.out).write_text(text, encoding='utf-8')
            logger.info(f"Report written to {self.out}")
        else:
            click.echo(text, nl=False)
        return report_service.exit_code(config.command, payload)

    def profiler(self, label: str):
        return AnalysisProfiler(label) if self.profile else nullcontext()


def _parse_policy(ctx, param, value):
    if value is None:
        return StabilizationPolicy()
    try:
        return StabilizationPolicy.parse(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def run_command(ctx: click.Context, command: str, build, **arguments) -> int:
    """Shared command boundary: config, profiling, timing, rendering and the error-to-exit-code mapping."""
    session: Session = ctx.obj
    try:
        config = session.config(command, **arguments)
        with session.profiler(command):
            start_time = time.time()
            payload = build(session)
            duration = time.time() - start_time
        logger.info(f"{command} finished in {duration:.2f} seconds")
        return session.emit(config, payload, duration)
    except (WordsError, ValidationError) as e:
        logger.error(f"Invalid input for {command}: {str(e)}")
        click.echo(f"{Fore.RED}Error: {str(e)}{Style.RESET_ALL}", err=True)
        return report_service.EXIT_INVALID_INPUT


@click.group(cls=WordsGroup)
@click.version_option(__version__, prog_name='words')
@click.option('--source', help="Source descriptor, e.g. cf:1 or morphic:0>01,1>10:seed=0")
@click.option('--max', 'max_factor_length', type=int, default=DEFAULT_MAX_FACTOR_LENGTH, show_default=True,
              help="Largest factor length for --all-lengths and verify")
@click.option('--policy', callback=_parse_policy, help="Stabilization schedule initial,growth,cap (initial may be 'auto')")
@click.option('--format', 'output_format', type=click.Choice(['json', 'csv', 'text']),
              default=DEFAULT_OUTPUT_FORMAT, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), help="Write the report here instead of stdout")
@click.option('--profile', is_flag=True, help="Log memory and CPU usage of the command")
@click.option('--timing', is_flag=True, help="Add wall-clock duration to the report")
@click.pass_context
def cli(ctx, source, max_factor_length, policy, output_format, out, profile, timing):
    """Return words and abelian returns of infinite words."""
    ctx.obj = Session(source, max_factor_length, policy, output_format, out, profile, timing)


@cli.command()
@click.option('--length', type=click.IntRange(min=0), required=True)
@click.pass_context
def generate(ctx, length):
    """Print a prefix of the source."""
    def build(session: Session) -> dict:
        source = session.source()
        return {'source': source.descriptor(), 'length': length, 'prefix': source_prefix(source, length).letters}

    return run_command(ctx, 'generate', build, length=length)


@cli.command()
@click.option('--target', help="Factor whose abelian class is queried")
@click.option('--all-lengths', is_flag=True, help="Every abelian class of every length 1..--max")
@click.option('--right', is_flag=True, help="Right abelian returns (segments shifted past the window)")
@click.pass_context
def returns(ctx, target, all_lengths, right):
    """Stabilized abelian returns of one class, or of every class up to --max."""
    if bool(target) == all_lengths:
        raise click.UsageError("Give exactly one of --target and --all-lengths")
    side = ReturnSide.RIGHT if right else ReturnSide.LEFT

    def build(session: Session) -> dict:
        source = session.source()
        if all_lengths:
            if right:
                raise click.UsageError("--right applies to --target queries only")
            service = VerificationService(source, session.max_factor_length, session.policy,
                                          progress=sys.stderr.isatty())
            return {'entries': report_service.census_entries(service.censuses())}
        word = FiniteWord.parse(target, source.alphabet_size)
        try:
            return_set, report = stabilized_abelian_returns(source, word, session.policy, side)
        except ClassNeverRecursError as e:
            logger.warning(str(e))
            entry = report_service.return_entry(len(word), None, None, factor=word.letters, failure=str(e))
            return {'entries': [entry]}
        return {'entries': [report_service.return_entry(len(word), return_set, report, factor=word.letters)]}

    return run_command(ctx, 'returns', build, target=target, allLengths=all_lengths, side=side.value)


@cli.command()
@click.option('--p', 'p', type=int, help="Number of ones")
@click.option('--q', 'q', type=int, help="Word length")
@click.option('--word', help="Explicit binary word whose orbit is sorted")
@click.pass_context
def lexarray(ctx, p, q, word):
    """Lexicographic array of an orbit, with its balance and column-shift checks."""
    if word is None and (p is None or q is None):
        raise click.UsageError("Give --word, or both --p and --q")
    if word is not None and (p is not None or q is not None):
        raise click.UsageError("--word cannot be combined with --p/--q")

    def build(session: Session) -> dict:
        if word is not None:
            w = FiniteWord.parse(word, 2)
            array = lex_array(w)
        else:
            array = balanced_orbit_array(p, q)
            w = array.row(0)
        return report_service.lexarray_payload(array, is_balanced_jz(w), column_shift_check(array))

    return run_command(ctx, 'lexarray', build, p=p, q=q, word=word)


@cli.command()
@click.option('--theorem', type=click.Choice(list(THEOREMS) + ['all']), default='all', show_default=True)
@click.pass_context
def verify(ctx, theorem):
    """Check the abelian-return theorems on the source up to --max."""
    selected = THEOREMS if theorem == 'all' else (theorem,)

    def build(session: Session) -> dict:
        service = VerificationService(session.source(), session.max_factor_length, session.policy,
                                      progress=sys.stderr.isatty())
        return {'verdicts': [service.verify(name).to_dict() for name in selected]}

    return run_command(ctx, 'verify', build, theorem=theorem)


@cli.command('settings')
def show_settings():
    """Display current configuration settings dynamically."""
    click.echo(f"\n{Fore.CYAN}Current Configuration:{Style.RESET_ALL}")

    # Uppercase names of the settings module, minus the private ones and the list itself
    config_items = {
        name: value for name, value in vars(settings).items()
        if name.isupper()
        and not name.startswith('PRIVATE_')
        and name not in getattr(settings, 'PRIVATE_SETTINGS', set())
    }

    # Group settings by common prefixes
    groups = {}
    for name, value in config_items.items():
        prefix = name.split('_')[0] if '_' in name else 'MISC'
        groups.setdefault(prefix, []).append((name, value))

    for group_name, items in sorted(groups.items()):
        click.echo(f"\n{Fore.CYAN}{group_name} Settings:{Style.RESET_ALL}")
        for name, value in sorted(items):
            setting_name = name.replace(f"{group_name}_", "").replace("_", " ").title()
            click.echo(f"  {setting_name}: {value}")

    click.echo()
    return report_service.EXIT_CLEAN


def main():
    """Entry point for the application."""
    cli(prog_name='words')


if __name__ == "__main__":
    main()
