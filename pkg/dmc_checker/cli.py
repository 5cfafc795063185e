"""Command-line interface for dmc-checker."""

import argparse
import json
import logging
import sys
import traceback
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .config import RunConfig, load_config
from .core import mc_locus_report, selftest, validate_structure, verify
from .errors import DmcError
from .lie import list_fixtures
from .mc_locus import FRAMES

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="dmc-checker",
        description="Verify the Maurer-Cartan comparison theorem on finite truncations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Validate a bundled fixture
  dmc-checker validate fixture:odd-square

  # Full pipeline with a JSON report
  dmc-checker verify fixture:heis --format json

  # Only the comparison map, with a larger weight window
  dmc-checker verify my-algebra.json --checks phi,quasi-iso --weight 4

  # Structural self-tests on four worker processes
  dmc-checker selftest --jobs 4
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, help='YAML file with run settings')
    common.add_argument('--verbose', '-v', action='store_true',
                        help='Enable debug logging and tracebacks')
    common.add_argument('--levels', type=int, help='Simplicial levels 0..N')
    common.add_argument('--weight', type=int, help='Keep weights below W')
    common.add_argument('--depth', type=int, help='Cohomological depth of the CE model')
    common.add_argument('--checks', help='Comma-separated check names')
    common.add_argument('--format', choices=['text', 'json'], help='Report format')
    common.add_argument('--jobs', type=int, help='Worker processes for independent checks')
    common.add_argument('--seed', type=int, help='Seed for randomized self-tests')
    common.add_argument('--frame', choices=list(FRAMES),
                        help='Coordinate frame for MC^n (default: difference)')

    commands = parser.add_subparsers(dest='command', required=True)
    for name, help_text in (('validate', 'Check the L-infinity axioms of a spec'),
                            ('verify', 'Run the selected checks on a spec'),
                            ('mc-locus', 'Print coordinates and structure maps of MC^*(L)')):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument('file', help='Spec path or fixture:NAME')
    commands.add_parser('selftest', parents=[common],
                        help='Structural identities that need no input algebra')
    commands.add_parser('fixtures', parents=[common], help='List bundled fixtures')
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format=LOG_FORMAT, stream=sys.stderr, force=True)


def _overrides(parsed: argparse.Namespace) -> Dict[str, Any]:
    return {name: getattr(parsed, name, None)
            for name in ('levels', 'weight', 'depth', 'checks', 'format', 'jobs', 'seed',
                         'frame')}


def _emit(payload: Dict[str, Any], text: str, cfg: RunConfig) -> None:
    if cfg.format == 'json':
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _mc_locus_text(data: Dict[str, Any]) -> str:
    lines = [f"MC^* of {data['fixture']} ({data['frame']} frame)"]
    for level in data['coordinates']:
        names = [c for block in level['blocks'] for c in block['coordinates']]
        lines.append(f"  level {level['level']}: {level['total']} coordinates {names}")
    for entry in data['structure_maps']:
        lines.append(f"  {entry['map']}")
        for name, image in entry['images'].items():
            lines.append(f"    {name} <- {image}")
    for oracle in data['oracles']:
        status = 'agrees' if oracle['passed'] else f"differs: {oracle.get('witness')}"
        lines.append(f"  oracle {oracle['name']}: {status}")
    locus = data['classical_locus']
    lines.append(f"  classical locus: {locus['curvature']}")
    return "\n".join(lines)


def main(args: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    parsed = parser.parse_args(args)
    _configure_logging(parsed.verbose)

    try:
        cfg = load_config(parsed.config, _overrides(parsed))
        if parsed.command == 'fixtures':
            for name in list_fixtures():
                print(name)
            return 0
        if parsed.command == 'mc-locus':
            data = mc_locus_report(parsed.file, cfg)
            _emit(data, _mc_locus_text(data), cfg)
            return 0
        if parsed.command == 'validate':
            report = validate_structure(parsed.file, cfg)
        elif parsed.command == 'verify':
            report = verify(parsed.file, cfg)
        else:
            report = selftest(cfg)
        _emit(report.to_json(), report.to_text(), cfg)
        return 0 if report.passed else 1

    except DmcError as e:
        print(f'Error: {e}', file=sys.stderr)
        if parsed.verbose:
            traceback.print_exc()
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
