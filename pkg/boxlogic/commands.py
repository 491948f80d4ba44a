"""
This module contains the command implementations behind the CLI. Every
command prints one JSON report on standard output and returns a result code.
"""

import json
import logging as log
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from .algebra import EffectStructure
from .axioms import (
    check_coherence_law,
    check_effect_algebra,
    check_lattice_and_boolean,
    check_orthoposet,
)
from .bitsets import to_hex
from .box_model import build_one_box_logic
from .box_product import (
    GenerationReport,
    generate_effect_algebra,
    generate_orthoposet,
    localized_elements,
)
from .cache import CacheEntry, generate_cached, load_structure
from .config import RunConfig, expected_classification
from .errors import DomainError, MissingInputError, StructuralError
from .local_orthogonality import (
    build_orthogonality_graph,
    check_lo_copies,
    check_lo_violations,
    enumerate_lo_inequalities,
)
from .log_utils import print_report, set_action_output
from .states import (
    LogicState,
    PRState,
    build_state_polytope,
    check_order_determining,
    classical_states,
    format_fraction,
    logic_state_to_pr,
)

ResultCode = int

SUCCESS: ResultCode = 0
CHECK_MISMATCH: ResultCode = 1
MISSING_INPUT: ResultCode = 2
RESOURCE_CAP: ResultCode = 3
LIBRARY_ERROR: ResultCode = 4

KIND_NAMES = {'effect': 'effect', 'omp': 'omp', 'one-box': 'effect', 'concrete': 'omp'}


def _read_json(path: Path, what: str) -> Any:
    if not path.is_file():
        raise MissingInputError(f"{what} {path} does not exist")
    with open(path, 'r', encoding='UTF-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise StructuralError(f"{what} {path} is not valid JSON: {e}") from e


def _generate(config: RunConfig) -> tuple[EffectStructure, GenerationReport]:
    factors = [build_one_box_logic(b) for b in config.boxes]
    generator = generate_effect_algebra if config.kind == 'effect' else generate_orthoposet
    return generator(factors, max_elements=config.max_elements, workers=config.workers)


def _entry(config: RunConfig) -> CacheEntry:
    if config.structure is not None:
        return CacheEntry(config.structure)
    return CacheEntry.of(config.cache_dir, config.boxes, config.kind)


def _load(config: RunConfig) -> EffectStructure:
    entry = _entry(config)
    if not entry.exists():
        raise MissingInputError(
            f"no cached structure at {entry.path}; run `boxlogic generate` first")
    return load_structure(entry.path)


def _summary(structure: EffectStructure) -> dict[str, Any]:
    return {"kind": structure.kind.value, "boxes": len(structure.boxes),
            "elements": len(structure), "atoms": len(structure.atoms)}


def element_labels(structure: EffectStructure, indices: Sequence[int]) -> list[str]:
    """
    Renders element indices as event labels (`x0x0x0`) where the element is a
    product atom and as hex masks otherwise.
    """
    by_mask = {a.mask: a.label(structure.boxes) for a in structure.box_atoms}
    return [by_mask.get(structure.elements[i], to_hex(structure.elements[i]))
            for i in indices]


def cmd_generate(config: RunConfig) -> ResultCode:
    """
    Generates the configured structure (or reuses a valid cache entry) and
    prints its generation report.
    """
    entry = CacheEntry.of(config.cache_dir, config.boxes, config.kind)
    report, cached = generate_cached(entry, lambda: _generate(config), force=config.force)
    print_report({**report, "cached": cached, "cache": str(entry.path)})
    written = set_action_output({"elements": report["elements"], "atoms": report["atoms"],
                                 "cache": str(entry.path)})
    return SUCCESS if written else LIBRARY_ERROR


def _run_check(name: str, structure: EffectStructure, seed: int) -> tuple[bool, Any]:
    if name == 'axioms':
        reports = check_effect_algebra(structure, seed=seed)
        return all(r.passed for r in reports), [r.to_json() for r in reports]
    if name == 'coherence':
        coherence = check_coherence_law(structure)
        document = coherence.to_json()
        document["labels"] = element_labels(structure, coherence.witness)
        return coherence.passed, document
    if name == 'omp':
        reports = check_orthoposet(structure, seed=seed)
        return all(r.passed for r in reports), [r.to_json() for r in reports]
    if name == 'lattice':
        lattice = check_lattice_and_boolean(structure, seed=seed)
        return lattice.is_lattice, lattice.to_json()
    if name == 'order-det':
        order = check_order_determining(structure, classical_states(structure), seed=seed)
        return order.order_determining, order.to_json()
    raise DomainError(f"unknown check {name}")


def cmd_check(config: RunConfig, checks: Sequence[str]) -> ResultCode:
    """
    Runs the requested checks on the cached structure and compares them with
    the expected classification.

    Returns:
        (int) 0 if every check with a known expectation matched, 1 otherwise.
    """
    structure = _load(config)
    expected = expected_classification(structure.boxes, KIND_NAMES[structure.kind.value])
    results: dict[str, Any] = {}
    matched = True
    for name in checks:
        passed, document = _run_check(name, structure, config.seed)
        want = expected.get(name)
        if want is not None and want != passed:
            log.error("Check %s: expected %s, got %s", name, want, passed)
            matched = False
        results[name] = {"pass": passed, "expected": want, "report": document}
    print_report({"structure": _summary(structure), "checks": results, "match": matched})
    return SUCCESS if matched else CHECK_MISMATCH


def cmd_lo(config: RunConfig, max_size: int | None, maximal_only: bool) -> ResultCode:
    """
    Enumerates LO inequalities from the cliques of the orthogonality graph and
    certifies each with its exact maximum over the state polytope.
    """
    structure = _load(config)
    graph = build_orthogonality_graph(structure)
    polytope = build_state_polytope(structure)
    inequalities = enumerate_lo_inequalities(graph, max_size, maximal_only,
                                             max_cliques=config.max_cliques)
    report = check_lo_violations(structure, polytope, inequalities,
                                 graph=graph, certify_defined=False, workers=config.workers)
    print_report({"structure": _summary(structure), **report.to_json(graph)})
    return SUCCESS


def parse_objective(document: Any, labels: Callable[[str], int]) -> dict[int, Fraction]:
    """
    Parses an objective file: `{"events": [label, ...]}` (unit coefficients)
    or `{"coefficients": {label: "num/den", ...}}`.

    Args:
        document (Any) : The parsed JSON document.
        labels (Callable[[str], int]) : Resolves an event label to its atom
                                        index.
    """
    objective: dict[int, Fraction] = {}
    try:
        if "events" in document:
            for label in document["events"]:
                i = labels(label)
                objective[i] = objective.get(i, Fraction(0)) + 1
        else:
            for label, value in document["coefficients"].items():
                i = labels(label)
                objective[i] = objective.get(i, Fraction(0)) + Fraction(value)
    except (KeyError, TypeError, ValueError) as e:
        raise StructuralError(f"malformed objective: {e}") from e
    return objective


def cmd_lp(config: RunConfig, objective_path: Path) -> ResultCode:
    """
    Maximizes a linear objective over event probabilities of the cached
    structure and prints the exact optimum with a maximizing PR-state.
    """
    document = _read_json(objective_path, "objective")
    structure = _load(config)
    graph = build_orthogonality_graph(structure)
    objective = parse_objective(document, lambda label: graph.events[graph.find(label)].index)
    polytope = build_state_polytope(structure)
    result = polytope.solve(objective)
    argmax = logic_state_to_pr(LogicState(structure, result.solution))
    print_report({
        "structure": _summary(structure),
        "lp_max": format_fraction(result.value),
        "pivots": result.pivots,
        "rank": result.rank,
        "argmax": argmax.to_json(),
    })
    return SUCCESS


def cmd_localized(config: RunConfig, boxes: Sequence[int]) -> ResultCode:
    """
    Prints the elements of the cached structure localized at the given boxes.
    """
    structure = _load(config)
    elements = localized_elements(structure, boxes)
    print_report({"structure": _summary(structure), "boxes": list(boxes),
                  "count": len(elements), "elements": [to_hex(p.mask) for p in elements]})
    return SUCCESS


def cmd_copies(config: RunConfig, state_path: Path, copies: int) -> ResultCode:
    """
    Tests `copies` copies of a PR-state on the configured boxes against the LO
    inequalities of the combined model.
    """
    state = PRState.from_json(_read_json(state_path, "state"), config.boxes)
    report = check_lo_copies(state, copies, max_support=config.max_support)
    print_report(report.to_json())
    return SUCCESS


def run_command(config: RunConfig) -> ResultCode:
    """
    Dispatches to the command selected on the command line.
    """
    options = config.options
    command = config.command
    if command == 'generate':
        return cmd_generate(config)
    if command == 'check':
        return cmd_check(config, options.checks)
    if command == 'lo-check':
        return cmd_lo(config, options.max_size, options.maximal_only)
    if command == 'lp-max':
        return cmd_lp(config, options.objective)
    if command == 'localized':
        return cmd_localized(config, options.boxes)
    if command == 'copies':
        return cmd_copies(config, options.state, options.copies)
    raise DomainError(f"unknown command {command}")
