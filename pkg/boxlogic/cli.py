"""
Handles command line option definitions and parsing.
"""


from argparse import ArgumentParser, BooleanOptionalAction
from pathlib import Path

from .config import ALL_CHECKS, DEFAULT_MAX_CLIQUES, DEFAULT_MAX_ELEMENTS, DEFAULT_MAX_SUPPORT


def _box_list(text: str) -> list[int]:
    return [int(b) for b in text.split(',') if b.strip()]


def _check_list(text: str) -> list[str]:
    checks = [c.strip() for c in text.split(',') if c.strip()]
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    return checks


def _common_parser() -> ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument('-s',
                        '--spec',
                        help="A box spec JSON. Repeat for boxes with different specs; "
                             "defaults to the binary box.",
                        type=Path,
                        action='append')

    parser.add_argument('-k',
                        help="The number of boxes (a single --spec is repeated k times).",
                        type=int,
                        default=None)

    parser.add_argument('--kind',
                        help="The structure to build: the effect algebra or the orthoposet.",
                        choices=['effect', 'omp'],
                        default='effect')

    parser.add_argument('--cache-dir',
                        help="The structure cache directory (fallback: $BOXLOGIC_CACHE_DIR, "
                             "then .boxlogic-cache).",
                        type=Path,
                        default=None)

    parser.add_argument('--structure',
                        help="A cache entry directory to use instead of --spec/-k/--kind.",
                        type=Path,
                        default=None)

    parser.add_argument('--max-elements',
                        help="Abort generation above this many elements.",
                        type=int,
                        default=DEFAULT_MAX_ELEMENTS)

    parser.add_argument('--max-cliques',
                        help="Abort clique enumeration above this many cliques.",
                        type=int,
                        default=DEFAULT_MAX_CLIQUES)

    parser.add_argument('--max-support',
                        help="Largest joint event support for exact copies checks; "
                             "undecided states above it fail with exit code 3.",
                        type=int,
                        default=DEFAULT_MAX_SUPPORT)

    parser.add_argument('--workers',
                        help="Number of worker threads.",
                        type=int,
                        default=1)

    parser.add_argument('--seed',
                        help="Seed for sampled checks.",
                        type=int,
                        default=0)

    parser.add_argument('--force',
                        help='Regenerate structures even if the cache entry is valid.',
                        action='store_true')

    parser.add_argument(
        '-v',
        '--verbose',
        help='Enables verbose logging',
        action='store_true'
    )
    return parser


def create_parser() -> ArgumentParser:
    """
    Defines the available command line options and creates a parser that handles
    them.

    Returns:
        (ArgumentParser) an argument parser configured for the available
                         options.
    """
    common = _common_parser()
    parser = ArgumentParser(prog='boxlogic')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('generate', parents=[common],
                        help="Generate a structure and store it in the cache.")

    check = commands.add_parser('check', parents=[common],
                                help="Run axiom and classification checks on a cached structure.")
    check.add_argument('--checks',
                       help=f"Comma separated checks out of {','.join(ALL_CHECKS)}.",
                       type=_check_list,
                       default=list(ALL_CHECKS))

    lo_check = commands.add_parser('lo-check', parents=[common],
                                   help="Certify LO inequalities of a cached structure.")
    lo_check.add_argument('--max-size',
                          help="Largest clique size to consider.",
                          type=int,
                          default=None)
    lo_check.add_argument('--maximal-only',
                          help="Only use maximal cliques (--no-maximal-only requires "
                               "--max-size).",
                          action=BooleanOptionalAction,
                          default=True)

    lp_max = commands.add_parser('lp-max', parents=[common],
                                 help="Maximize a linear objective over the states.")
    lp_max.add_argument('--objective',
                        help="JSON with event labels ('events') or label coefficients "
                             "('coefficients').",
                        type=Path,
                        required=True)

    localized = commands.add_parser('localized', parents=[common],
                                    help="List the elements localized at a set of boxes.")
    localized.add_argument('--boxes',
                           help="Comma separated box indices (0-based).",
                           type=_box_list,
                           required=True)

    copies = commands.add_parser('copies', parents=[common],
                                 help="Test n copies of a PR-state against LO inequalities.")
    copies.add_argument('--state',
                        help="The PR-state JSON of one copy.",
                        type=Path,
                        required=True)
    copies.add_argument('-n',
                        '--copies',
                        help="The number of copies.",
                        type=int,
                        default=2)

    return parser
