import argparse
import io
import json
import logging
import sys
from typing import Optional, Sequence

from core.cli.commands import COMMANDS, EXIT_FAILURES, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK
from core.utils.config import load_config

logger = logging.getLogger(__name__)


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags go before or after the subcommand without the
    # subparser defaults overwriting values given first
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='random seed (default from the INI)')
    flags.add_argument('--quad-method', choices=['exact', 'adaptive', 'fixed'], default=argparse.SUPPRESS)
    flags.add_argument('--abs-tol', type=float, default=argparse.SUPPRESS)
    flags.add_argument('--grid', type=int, default=argparse.SUPPRESS, help='grid size for fixed quadrature')
    flags.add_argument('--workers', type=int, default=argparse.SUPPRESS)
    flags.add_argument('--output', '-o', default=argparse.SUPPRESS, help='output file (default stdout)')
    flags.add_argument('--config', default=argparse.SUPPRESS, help='INI file (default configs/pdist_config.ini)')
    flags.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], default=argparse.SUPPRESS)
    return flags


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    parser = argparse.ArgumentParser(prog='pdist-geometry', parents=[flags],
                                     description='Normal-line pseudometric and total-perimeter verification.')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, text in (('pdist', 'pseudodistance between two curves'),
                       ('pper', 'generalized perimeter of SECOND relative to FIRST')):
        p = sub.add_parser(name, parents=[flags], help=text)
        p.add_argument('first', help='curve JSON')
        p.add_argument('second', help='curve JSON')
        p.add_argument('--half-range', action='store_true',
                       help='integrate over a half turn (valid against a constant-width curve)')

    p = sub.add_parser('verify', parents=[flags], help='run a suite config or check a generated scenario')
    p.add_argument('input', nargs='?', help='suite config JSON or scenario JSON (default suite when omitted)')

    p = sub.add_parser('complete', parents=[flags], help='complete a convex curve to constant width')
    p.add_argument('input', help='curve JSON')

    p = sub.add_parser('gen', parents=[flags], help='generate a seeded scenario')
    p.add_argument('kind', help='disjoint-bodies | partition-with-holes | polygon-in-cw | triangle-family')
    p.add_argument('--param', action='append', default=[], metavar='KEY=VALUE')

    p = sub.add_parser('render', parents=[flags], help='render a scene to SVG')
    p.add_argument('input', nargs='?', help='scene JSON')
    p.add_argument('--triangle', action='store_true', help='the triangle partition extended to its completion')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(getattr(args, 'config', None))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(level=getattr(args, 'log_level', None) or config.logging.level.upper(),
                        format=config.logging.format, stream=sys.stderr, force=True)
    logger.info("command %s", args.command)

    output = getattr(args, 'output', None)
    try:
        if not output:
            return COMMANDS[args.command](args, config, sys.stdout)
        # the file is written only once the command has finished
        buffer = io.StringIO()
        code = COMMANDS[args.command](args, config, buffer)
        if code in (EXIT_OK, EXIT_FAILURES):
            with open(output, 'w', encoding='utf-8', newline='\n') as out:
                out.write(buffer.getvalue())
        return code
    except ArithmeticError as exc:
        logger.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        # pydantic's ValidationError is a ValueError
        logger.error("input error: %s", exc)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
