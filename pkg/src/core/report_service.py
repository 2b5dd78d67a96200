from typing import Any, Dict, Iterable, List, Optional
import csv
import io
import json
import logging

from colorama import Fore, Style

from src.models.analysis import ClassCensus, LengthCensus
from src.models.lexarray import LexArray
from src.models.report import Report
from src.models.returns import ReturnSet, StabilizationReport

logger = logging.getLogger(__name__)

EXIT_CLEAN = 0
EXIT_VIOLATIONS = 1
EXIT_CAVEATS = 2
EXIT_INVALID_INPUT = 3

CSV_COLUMNS = ('command', 'length', 'class', 'factor', 'returnClass', 'returnRepresentative', 'status', 'detail')


def return_entry(length: int, return_set: Optional[ReturnSet], report: Optional[StabilizationReport],
                 factor: Optional[str] = None, failure: Optional[str] = None,
                 target: Optional[dict] = None, caveat: Optional[str] = None) -> Dict[str, Any]:
    """One queried class in a returns payload; a caveat marks data that could not be computed."""
    entry = {
        'length': length,
        'factor': factor,
        'target': return_set.target.to_dict() if return_set is not None else target,
        'returns': return_set.to_dict()['classes'] if return_set is not None else [],
        'count': len(return_set) if return_set is not None else None,
        'stabilization': report.to_dict() if report is not None else None,
        'failure': failure,
        'caveat': caveat,
    }
    return entry


def census_entries(censuses: Iterable[LengthCensus]) -> List[Dict[str, Any]]:
    entries = []
    for length_census in censuses:
        if not length_census.reached:
            entries.append(return_entry(length_census.n, None, None,
                                        caveat='the prefix cap is shorter than the factors'))
        for entry in length_census.classes:
            entries.append(_census_entry(length_census.n, entry))
    return entries


def _census_entry(n: int, entry: ClassCensus) -> Dict[str, Any]:
    data = return_entry(
        n,
        entry.return_set,
        entry.report,
        factor=entry.example.letters if entry.example is not None else None,
        failure=entry.failure,
        target=entry.target.to_dict(),
    )
    data['factorsInClass'] = entry.factor_count
    return data


def lexarray_payload(array: LexArray, balanced: bool, column_shift: bool) -> Dict[str, Any]:
    return {
        'p': array.p,
        'q': array.q,
        'grid': array.to_lines(),
        'balanced': balanced,
        'columnShift': column_shift,
    }


def exit_code(command: str, payload: Dict[str, Any]) -> int:
    """0 clean, 1 violations, 2 only caveats (unstable or unreached data)."""
    if command == 'verify':
        verdicts = payload['verdicts']
        if any(not v['holds'] for v in verdicts):
            return EXIT_VIOLATIONS
        if any(v['caveats'] for v in verdicts):
            return EXIT_CAVEATS
        return EXIT_CLEAN
    if command == 'returns':
        entries = payload['entries']
        if any(e['failure'] for e in entries):
            return EXIT_VIOLATIONS
        if any(e['caveat'] or (e['stabilization'] and not e['stabilization']['stable']) for e in entries):
            return EXIT_CAVEATS
    return EXIT_CLEAN


def render(report: Report, output_format: str, include_timing: bool = False) -> str:
    if output_format == 'json':
        return render_json(report, include_timing)
    if output_format == 'csv':
        return render_csv(report)
    if output_format == 'text':
        return render_text(report)
    raise ValueError(f"Unknown output format {output_format!r}")


def render_json(report: Report, include_timing: bool = False) -> str:
    return json.dumps(report.to_dict(include_timing), sort_keys=True, indent=2) + '\n'


def render_csv(report: Report) -> str:
    """One row per (factor length, class, return class); other commands reuse the same columns."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    command, payload = report.config.command, report.payload
    for row in _csv_rows(command, payload):
        writer.writerow({'command': command, **row})
    return buffer.getvalue()


def _csv_rows(command: str, payload: Dict[str, Any]) -> Iterable[Dict[str, Any]]:
    if command == 'generate':
        yield {'length': payload['length'], 'factor': payload['prefix'], 'status': 'ok'}
    elif command == 'returns':
        for entry in payload['entries']:
            klass = _vector_text(entry['target']['vector']) if entry['target'] else ''
            status = _entry_status(entry)
            if not entry['returns']:
                yield {'length': entry['length'], 'class': klass, 'factor': entry['factor'],
                       'status': status, 'detail': entry['failure'] or entry['caveat'] or ''}
            for returned in entry['returns']:
                yield {
                    'length': entry['length'],
                    'class': klass,
                    'factor': entry['factor'],
                    'returnClass': _vector_text(returned['vector']),
                    'returnRepresentative': returned['representative'],
                    'status': status,
                }
    elif command == 'lexarray':
        status = 'balanced' if payload['balanced'] else 'unbalanced'
        for index, row in enumerate(payload['grid']):
            yield {'length': payload['q'], 'class': index, 'factor': row, 'status': status}
    elif command == 'verify':
        for verdict in payload['verdicts']:
            yield {'class': verdict['theorem'], 'status': 'holds' if verdict['holds'] else 'fails',
                   'length': verdict['witnessLength'] or ''}
            for kind in ('witnesses', 'caveats'):
                for item in verdict[kind]:
                    yield {'length': item['length'], 'class': verdict['theorem'], 'factor': item['subject'],
                           'status': 'witness' if kind == 'witnesses' else 'caveat',
                           'detail': json.dumps(item['detail'], sort_keys=True)}


def _entry_status(entry: Dict[str, Any]) -> str:
    if entry['failure']:
        return 'never-recurs'
    if entry['stabilization'] is None:
        return 'unreached'
    return 'stable' if entry['stabilization']['stable'] else 'unstable'


def _vector_text(vector: Dict[str, int]) -> str:
    return '(' + ', '.join(f"{letter}:{count}" for letter, count in sorted(vector.items())) + ')'


def render_text(report: Report) -> str:
    command, payload = report.config.command, report.payload
    lines = [f"{Fore.CYAN}{command} {report.config.source or ''}".rstrip() + Style.RESET_ALL]
    if command == 'generate':
        lines.append(payload['prefix'])
    elif command == 'returns':
        for entry in payload['entries']:
            lines.append(_text_entry(entry))
    elif command == 'lexarray':
        lines.extend(payload['grid'])
        lines.append(_flag('balanced', payload['balanced']))
        lines.append(_flag('column shift', payload['columnShift']))
    elif command == 'verify':
        for verdict in payload['verdicts']:
            lines.extend(_text_verdict(verdict))
    return '\n'.join(lines) + '\n'


def _flag(name: str, value: bool) -> str:
    colour = Fore.GREEN if value else Fore.RED
    return f"{name}: {colour}{'yes' if value else 'no'}{Style.RESET_ALL}"


def _text_entry(entry: Dict[str, Any]) -> str:
    head = f"n={entry['length']} {entry['factor'] or ''}".rstrip()
    if entry['target']:
        head += f" {_vector_text(entry['target']['vector'])}"
    if entry['failure']:
        return f"{head}: {Fore.RED}{entry['failure']}{Style.RESET_ALL}"
    if entry['stabilization'] is None:
        return f"{head}: {Fore.YELLOW}{entry['caveat']}{Style.RESET_ALL}"
    # ~ab marks abelian equivalence: each representative stands for its whole class
    returns = ', '.join(f"~ab {r['representative']}" for r in entry['returns'])
    colour = Fore.GREEN if entry['stabilization']['stable'] else Fore.YELLOW
    return f"{head}: {colour}{entry['count']}{Style.RESET_ALL} returns [{returns}]"


def _text_verdict(verdict: Dict[str, Any]) -> List[str]:
    low, high = verdict['checkedLengths']
    if verdict['holds']:
        status = f"{Fore.GREEN}holds{Style.RESET_ALL}"
    else:
        status = f"{Fore.RED}fails{Style.RESET_ALL} (smallest witness at length {verdict['witnessLength']})"
    lines = [f"{verdict['theorem']} [{low}..{high}]: {status}"]
    for witness in verdict['witnesses']:
        lines.append(f"  {Fore.RED}witness{Style.RESET_ALL} n={witness['length']} {witness['subject']}")
    for caveat in verdict['caveats']:
        lines.append(f"  {Fore.YELLOW}caveat{Style.RESET_ALL} n={caveat['length']} {caveat['subject']}: "
                     f"{caveat['detail'].get('reason', '')}")
    return lines
