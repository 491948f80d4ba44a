"""
Defines the run configuration and the classification expected for binary
boxes.
"""

import os
from argparse import Namespace
from pathlib import Path
from typing import Optional, Sequence

from .box_model import BoxSpec, binary_spec, load_box_spec
from .errors import DomainError

CACHE_DIR_ENV = 'BOXLOGIC_CACHE_DIR'
DEFAULT_CACHE_DIR = Path('.boxlogic-cache')

DEFAULT_MAX_ELEMENTS = 10 ** 6
DEFAULT_MAX_CLIQUES = 10 ** 5
DEFAULT_MAX_SUPPORT = 512

ALL_CHECKS = ('axioms', 'coherence', 'omp', 'lattice', 'order-det')

# What `check` expects for k binary boxes. Keys are (k, kind); values map check
# names to the expected outcome. Checks without an entry are only reported.
EXPECTED_CLASSIFICATION: dict[tuple[int, str], dict[str, bool]] = {
    (1, 'effect'): {'axioms': True, 'coherence': True, 'omp': True,
                    'lattice': True, 'order-det': True},
    (1, 'omp'): {'axioms': True, 'coherence': True, 'omp': True,
                 'lattice': True, 'order-det': True},
    (2, 'effect'): {'axioms': True, 'coherence': True, 'omp': True,
                    'lattice': False, 'order-det': True},
    (2, 'omp'): {'axioms': True, 'coherence': True, 'omp': True,
                 'lattice': False, 'order-det': True},
    (3, 'effect'): {'axioms': True, 'coherence': False, 'omp': False,
                    'order-det': True},
    (3, 'omp'): {'axioms': True, 'coherence': True, 'omp': True,
                 'order-det': True},
}


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise DomainError(f"{name} must be positive (got {value})")
    return value


class RunConfig():
    """
    Run configuration assembled from the parsed command line. Box specs are
    loaded eagerly; a missing spec file raises `MissingInputError`.
    """

    # pylint: disable=too-many-instance-attributes,too-few-public-methods

    def __init__(self, options: Namespace) -> None:
        """
        Args:
            options (Namespace) : The passed CLI options.
        """
        self.options = options
        self.command: str = options.command
        self.verbose: bool = options.verbose
        self.kind: str = options.kind
        self.seed: int = options.seed
        self.workers: int = _positive('workers', options.workers)
        self.force: bool = options.force
        self.max_elements: int = _positive('max_elements', options.max_elements)
        self.max_cliques: int = _positive('max_cliques', options.max_cliques)
        self.max_support: int = _positive('max_support', options.max_support)
        self.cache_dir: Path = resolve_cache_dir(options.cache_dir)
        self.structure: Optional[Path] = options.structure

        specs = options.spec or []
        self.spec_paths: list[Path] = list(specs)
        loaded = [load_box_spec(p) for p in specs] or [binary_spec()]
        self.boxes: list[BoxSpec] = _expand_boxes(loaded, options.k)

    @property
    def k(self) -> int:
        # pylint: disable=missing-function-docstring
        return len(self.boxes)

    def expected_classification(self) -> dict[str, bool]:
        # pylint: disable=missing-function-docstring
        return expected_classification(self.boxes, self.kind)


def resolve_cache_dir(option: Optional[Path]) -> Path:
    """
    Determines the cache directory: the `--cache-dir` option, then the
    `BOXLOGIC_CACHE_DIR` environment variable, then `.boxlogic-cache`.
    """
    if option is not None:
        return option
    env = os.getenv(CACHE_DIR_ENV)
    return Path(env) if env else DEFAULT_CACHE_DIR


def _expand_boxes(specs: list[BoxSpec], k: Optional[int]) -> list[BoxSpec]:
    """
    A single spec is repeated `k` times; several specs describe the boxes one
    by one and `k` (if given) has to agree with their number.
    """
    if k is None:
        return specs
    _positive('k', k)
    if len(specs) == 1:
        return specs * k
    if len(specs) != k:
        raise DomainError(f"{len(specs)} box specs given but k = {k}")
    return specs


def expected_classification(boxes: Sequence[BoxSpec], kind: str) -> dict[str, bool]:
    """
    The expected check outcomes for a structure over the given boxes (empty if
    nothing is known about it, i.e. for non-binary boxes or large k).
    """
    binary = binary_spec()
    if not all(b == binary for b in boxes):
        return {}
    return EXPECTED_CLASSIFICATION.get((len(boxes), kind), {})
