#!/usr/bin/env python

"""
Command line entry point. Builds the propositional structures of k-box
no-signaling models (effect algebras via the box product, orthoposets via
complements and disjoint unions), caches them in directories sealed with
`.checksum` files (SHA-1 over all files, as produced by `dirhash`), and runs
axiom, LP and local-orthogonality checks on cached structures. Every command
prints a single JSON report on standard output; diagnostics go to standard
error.
"""

import logging as log
import sys
from argparse import Namespace

from .cli import create_parser
from .commands import (
    LIBRARY_ERROR,
    MISSING_INPUT,
    RESOURCE_CAP,
    ResultCode,
    run_command,
)
from .config import RunConfig
from .errors import BoxLogicError, MissingInputError, ResourceError


def main(options: Namespace) -> ResultCode:
    """
    The main script entry point that assembles the run configuration from the
    parsed options and runs the selected command.

    Args:
        options (Namespace) : The parsed command line options.

    Returns:
        (int) 0 on success, 1 on a check mismatch, 2 on missing input, 3 if a
        resource cap was exceeded, 4 on any other error.
    """
    try:
        return run_command(RunConfig(options))
    except MissingInputError as e:
        log.error("%s", e)
        return MISSING_INPUT
    except ResourceError as e:
        log.error("%s", e)
        return RESOURCE_CAP
    except BoxLogicError as e:
        log.error("%s: %s", type(e).__name__, e)
        return LIBRARY_ERROR
    except OSError as e:
        log.error("I/O error: %s", e)
        return LIBRARY_ERROR


if __name__ == "__main__":
    args = create_parser().parse_args()

    # define the logger format
    LOG_LEVEL = log.DEBUG if args.verbose else log.INFO

    log.basicConfig(format="%(levelname)s: %(message)s", level=LOG_LEVEL)

    sys.exit(main(args))
