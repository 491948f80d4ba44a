"""
The k-box structures: the effect algebra generated by product atoms through
the partially defined ⊕ and the concrete orthoposet generated by the same
atoms through complements and disjoint unions.
"""

import logging as log
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Any, Callable, Iterable, Optional, Sequence

from .algebra import CellSpace, EffectStructure, Proposition, StructureKind
from .bitsets import full_mask, product_mask
from .box_model import PhaseSpace, ProductAtom
from .errors import DomainError, ResourceError
from .exact_cover import DecompositionOracle

# default cap on the number of generated elements
MAX_ELEMENTS = 10 ** 6

# brute-force subset enumeration is only used up to this many cells
BRUTE_FORCE_CELLS = 20

# cap on the product-atom covers recorded per new atom
MAX_COVERS = 256


class ProductSpace(CellSpace):
    """
    The product `Γ_1 × ⋯ × Γ_k` of the phase spaces of the leaf boxes. Cells
    are indexed in mixed radix with box 1 slowest, which makes the re-indexing
    between `(Γ_1 × Γ_2) × Γ_3` and `Γ_1 × (Γ_2 × Γ_3)` the identity.
    """

    def __init__(self, leaves: Sequence[PhaseSpace], space_id: str) -> None:
        sizes = [s.size for s in leaves]
        total = 1
        for n in sizes:
            total *= n
        super().__init__(total, space_id)
        strides = []
        stride = 1
        for n in reversed(sizes):
            strides.append(stride)
            stride *= n
        object.__setattr__(self, "leaves", tuple(leaves))
        object.__setattr__(self, "strides", tuple(reversed(strides)))

    leaves: tuple[PhaseSpace, ...]
    strides: tuple[int, ...]

    def cell(self, index: int) -> tuple[int, ...]:
        """
        Splits a product cell index into the per-box cell indices.
        """
        return tuple((index // s) % leaf.size for s, leaf in zip(self.strides, self.leaves))

    def cell_index(self, cells: Sequence[int]) -> int:
        # pylint: disable=missing-function-docstring
        return sum(c * s for c, s in zip(cells, self.strides))


@dataclass(frozen=True)
class GenerationReport:
    """
    Summary of a closure run.
    """

    element_count: int
    atom_count: int
    closure_rounds: int
    wall_time: float
    structure_kind: str

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {
            "kind": self.structure_kind,
            "elements": self.element_count,
            "atoms": self.atom_count,
            "rounds": self.closure_rounds,
            "seconds": round(self.wall_time, 3),
        }


def leaf_factors(structure: EffectStructure) -> tuple[EffectStructure, ...]:
    """
    The 1-box logics a structure was built from (the structure itself for a
    1-box logic).
    """
    return structure.factors or (structure,)


def leaf_spaces(structure: EffectStructure) -> tuple[PhaseSpace, ...]:
    # pylint: disable=missing-function-docstring
    spaces = []
    for f in leaf_factors(structure):
        assert isinstance(f.space, PhaseSpace)
        spaces.append(f.space)
    return tuple(spaces)


def product_atoms(structures: Sequence[EffectStructure]) -> list[ProductAtom]:
    """
    All products of the generating atoms of the given factors, in canonical
    order (lexicographic in the factors' atom orders).
    """
    per_factor = []
    for s in structures:
        if not s.box_atoms:
            raise DomainError(f"{s!r} has no recorded generating atoms")
        per_factor.append(sorted(s.box_atoms, key=lambda a: a.per_box))
    atoms = []
    for combo in product(*per_factor):
        mask = 1
        per_box: tuple[tuple[int, int], ...] = ()
        for s, a in zip(structures, combo):
            mask = product_mask(mask, a.mask, s.space.size)
            per_box += a.per_box
        atoms.append(ProductAtom(per_box, mask))
    return atoms


def product_space(structures: Sequence[EffectStructure]) -> ProductSpace:
    # pylint: disable=missing-function-docstring
    leaves = [leaf for s in structures for leaf in leaf_spaces(s)]
    if len(structures) == 1:
        space_id = structures[0].space.space_id
    else:
        space_id = "(" + "*".join(s.space.space_id for s in structures) + ")"
    return ProductSpace(leaves, space_id)


def _check_cap(count: int, max_elements: int) -> None:
    if count > max_elements:
        raise ResourceError("elements", max_elements, count)


def _run_rounds(frontier: list[int],
                expand: Callable[[int], set[int]],
                workers: int) -> set[int]:
    """
    Expands every frontier element and merges the candidates. The result does
    not depend on the number of workers.
    """
    if workers <= 1 or len(frontier) < 2 * workers:
        found: set[int] = set()
        for p in frontier:
            found |= expand(p)
        return found
    chunks = [frontier[i::workers] for i in range(workers)]

    def run(chunk: list[int]) -> set[int]:
        out: set[int] = set()
        for p in chunk:
            out |= expand(p)
        return out

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return set().union(*pool.map(run, chunks))


def effect_closure(atoms: Sequence[int],
                   size: int,
                   *,
                   max_elements: int = MAX_ELEMENTS,
                   workers: int = 1,
                   oracle: Optional[DecompositionOracle] = None) -> tuple[set[int], int]:
    """
    Closes `{0} ∪ atoms` under `p ⊕ q = p ∪ q`, defined when `p ∩ q = ∅` and
    the complement of `p ∪ q` is a disjoint union of atoms.

    Every element is a disjoint union of atoms whose partial unions all belong
    to the closure, so extending the elements of each round by single atoms
    reaches the same fixed point as combining arbitrary element pairs.

    Args:
        atoms (Sequence[int]) : The generating atom masks.
        size (int) : Number of cells.
        max_elements (int) : Element cap.
        workers (int) : Number of threads per round.
        oracle (DecompositionOracle, optional) : A shared exact-cover oracle
                                                 over the same atoms.

    Returns:
        (tuple[set[int], int]) The element masks and the number of rounds.
    """
    full = full_mask(size)
    oracle = oracle or DecompositionOracle(atoms, size)
    elements = {0} | set(atoms)
    frontier = sorted(set(atoms))
    rounds = 0
    while frontier:
        rounds += 1

        def expand(p: int) -> set[int]:
            out = set()
            for a in atoms:
                if p & a:
                    continue
                u = p | a
                if u not in elements and oracle.decomposable(full ^ u):
                    out.add(u)
            return out

        new = _run_rounds(frontier, expand, workers) - elements
        elements |= new
        _check_cap(len(elements), max_elements)
        log.debug('Effect closure round %d: %d new, %d total', rounds, len(new), len(elements))
        frontier = sorted(new)
    return elements, rounds


def _minimal_nonzero(masks: Iterable[int]) -> list[int]:
    minimal: list[int] = []
    for m in sorted((m for m in masks if m), key=lambda m: (m.bit_count(), m)):
        if not any(g & m == g for g in minimal):
            minimal.append(m)
    return sorted(minimal)


def orthoposet_closure(atoms: Sequence[int],
                       size: int,
                       *,
                       max_elements: int = MAX_ELEMENTS,
                       workers: int = 1) -> tuple[set[int], int]:
    """
    The smallest family of subsets containing `{0} ∪ atoms`, closed under
    complement and under unions of disjoint members.

    A family closed under complement in which every member can be extended by
    every disjoint minimal member is closed under all disjoint unions, so each
    round only unites elements with the current minimal members.

    Returns:
        (tuple[set[int], int]) The element masks and the number of rounds.
    """
    full = full_mask(size)
    elements = {0, full} | set(atoms) | {full ^ a for a in atoms}
    # pairs (old element, old generator) are never expanded twice
    old_elements: set[int] = set()
    old_generators: list[int] = []
    rounds = 0
    while True:
        rounds += 1
        generators = _minimal_nonzero(elements)
        known = set(old_generators)
        fresh = [g for g in generators if g not in known]
        everything = old_generators + fresh

        def unite(p: int, with_generators: Sequence[int]) -> set[int]:
            out = set()
            for g in with_generators:
                if p & g:
                    continue
                u = p | g
                if u not in elements:
                    out.add(u)
                    out.add(full ^ u)
            return out

        def expand(p: int) -> set[int]:
            # pylint: disable=cell-var-from-loop
            return unite(p, fresh if p in old_elements else everything)

        new = _run_rounds(sorted(elements), expand, workers) - elements
        old_elements |= elements
        old_generators = everything
        if not new:
            break
        elements |= new
        _check_cap(len(elements), max_elements)
        log.debug('Orthoposet closure round %d: %d new, %d total (%d generators)',
                  rounds, len(new), len(elements), len(generators))
    return elements, rounds


def generate_effect_algebra(structures: Sequence[EffectStructure],
                            *,
                            max_elements: int = MAX_ELEMENTS,
                            workers: int = 1) -> tuple[EffectStructure, GenerationReport]:
    """
    Builds the box product of the given structures: the concrete effect algebra
    of subsets of the product space generated by the product atoms.

    Args:
        structures (Sequence[EffectStructure]) : 1-box logics or previously
                                                 generated structures.
        max_elements (int) : Element cap.
        workers (int) : Number of threads per closure round.

    Returns:
        (tuple[EffectStructure, GenerationReport]) The structure and a summary.

    Raises:
        ResourceError : If the element cap is exceeded.
    """
    if not structures:
        raise DomainError("at least one factor is required")
    start = time.perf_counter()
    space = product_space(structures)
    atoms = product_atoms(structures)
    masks = [a.mask for a in atoms]
    elements, rounds = effect_closure(masks, space.size,
                                      max_elements=max_elements, workers=workers)
    structure = EffectStructure(
        space, elements, kind=StructureKind.EFFECT, atoms=masks,
        boxes=[b for s in structures for b in s.boxes],
        factors=[f for s in structures for f in leaf_factors(s)],
        box_atoms=atoms)
    report = GenerationReport(len(structure), len(structure.atoms), rounds,
                              time.perf_counter() - start, "effect-algebra")
    log.info('Generated effect algebra over %d cells: %d elements, %d atoms (%d rounds)',
             space.size, report.element_count, report.atom_count, rounds)
    return structure, report


def generate_orthoposet(structures: Sequence[EffectStructure],
                        *,
                        max_elements: int = MAX_ELEMENTS,
                        workers: int = 1) -> tuple[EffectStructure, GenerationReport]:
    """
    Builds the concrete orthoposet generated by the product atoms. Atoms of the
    result that are not product atoms carry certificates: the first disjoint
    cover of their complement by atoms of the orthoposet and every cover of it
    by product atoms only.

    Returns:
        (tuple[EffectStructure, GenerationReport]) The structure and a summary.

    Raises:
        ResourceError : If the element cap is exceeded.
    """
    if not structures:
        raise DomainError("at least one factor is required")
    start = time.perf_counter()
    space = product_space(structures)
    atoms = product_atoms(structures)
    masks = [a.mask for a in atoms]
    elements, rounds = orthoposet_closure(masks, space.size,
                                          max_elements=max_elements, workers=workers)
    all_atoms = _minimal_nonzero(elements)
    certificates = _new_atom_certificates(all_atoms, masks, space.size)
    structure = EffectStructure(
        space, elements, kind=StructureKind.OMP, atoms=all_atoms,
        boxes=[b for s in structures for b in s.boxes],
        factors=[f for s in structures for f in leaf_factors(s)],
        box_atoms=atoms, certificates=certificates)
    report = GenerationReport(len(structure), len(structure.atoms), rounds,
                              time.perf_counter() - start, "orthoposet")
    log.info('Generated orthoposet over %d cells: %d elements, %d atoms (%d rounds)',
             space.size, report.element_count, report.atom_count, rounds)
    return structure, report


def _new_atom_certificates(all_atoms: Sequence[int],
                           box_atoms: Sequence[int],
                           size: int) -> dict[int, list[tuple[int, ...]]]:
    """
    Covers of `Γ \\ n` for every atom `n` that is not a product atom, as tuples
    of indices into `all_atoms`.
    """
    full = full_mask(size)
    index = {m: i for i, m in enumerate(all_atoms)}
    generic = DecompositionOracle(all_atoms, size)
    restricted = DecompositionOracle(box_atoms, size)
    known = set(box_atoms)
    certificates: dict[int, list[tuple[int, ...]]] = {}
    for n in all_atoms:
        if n in known:
            continue
        covers = []
        cover = generic.decompose(full ^ n)
        assert cover is not None
        covers.append(tuple(sorted(cover)))
        for alternative in restricted.all_covers(full ^ n, limit=MAX_COVERS):
            alt = tuple(sorted(index[box_atoms[i]] for i in alternative))
            if alt not in covers:
                covers.append(alt)
        certificates[n] = covers
    log.debug('Recorded certificates for %d new atoms', len(certificates))
    return certificates


def localized_elements(structure: EffectStructure,
                       box_subset: Iterable[int]) -> list[Proposition]:
    """
    The elements of the form `X_1 × ⋯ × X_k` with `X_i` a 1-box proposition for
    boxes in `box_subset` and `X_i = Γ_i` otherwise.

    Raises:
        DomainError : If a box index is out of range.
    """
    factors = leaf_factors(structure)
    chosen = set(box_subset)
    for i in chosen:
        if not 0 <= i < len(factors):
            raise DomainError(f"box {i} does not exist (structure has {len(factors)} boxes)")
    options = [f.elements if i in chosen else (f.one,) for i, f in enumerate(factors)]
    masks = set()
    for combo in product(*options):
        masks.add(reduce(lambda acc, fx: product_mask(acc, fx[1], fx[0].space.size),
                         zip(factors, combo), 1))
    found = sorted(m for m in masks if m in structure.index)
    if len(found) != len(masks):
        log.debug('%d localized products are not elements of %r',
                  len(masks) - len(found), structure)
    return [Proposition(m, structure.space.space_id) for m in found]


@dataclass(frozen=True)
class AssociativityReport:
    """
    Result of comparing `(b1 ⊠ b2) ⊠ b3` with `b1 ⊠ (b2 ⊠ b3)`.
    """

    passed: bool
    left_count: int
    right_count: int
    only_left: int
    only_right: int


def check_product_associativity(b1: EffectStructure,
                                b2: EffectStructure,
                                b3: EffectStructure,
                                *,
                                max_elements: int = MAX_ELEMENTS) -> AssociativityReport:
    """
    Generates both association orders and compares the element masks.
    """
    left, _ = generate_effect_algebra(
        [generate_effect_algebra([b1, b2], max_elements=max_elements)[0], b3],
        max_elements=max_elements)
    right, _ = generate_effect_algebra(
        [b1, generate_effect_algebra([b2, b3], max_elements=max_elements)[0]],
        max_elements=max_elements)
    left_set, right_set = set(left.elements), set(right.elements)
    report = AssociativityReport(left_set == right_set, len(left_set), len(right_set),
                                 len(left_set - right_set), len(right_set - left_set))
    log.info('Associativity: %d vs %d elements (pass: %s)',
             report.left_count, report.right_count, report.passed)
    return report


def enumerate_by_characterization(atoms: Sequence[int],
                                  size: int,
                                  *,
                                  max_elements: int = MAX_ELEMENTS) -> set[int]:
    """
    Independently enumerates `{S : S and Γ \\ S both admit disjoint atom
    covers}`: by testing every subset for small spaces, otherwise by collecting
    all disjoint atom unions first.

    Raises:
        ResourceError : If more than `max_elements` disjoint unions exist.
    """
    full = full_mask(size)
    oracle = DecompositionOracle(atoms, size)
    if size <= BRUTE_FORCE_CELLS:
        return {s for s in range(1 << size)
                if oracle.decomposable(s) and oracle.decomposable(full ^ s)}
    unions = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for p in frontier:
            for a in atoms:
                if not p & a and p | a not in unions:
                    unions.add(p | a)
                    nxt.append(p | a)
        _check_cap(len(unions), max_elements)
        frontier = nxt
    return {s for s in unions if full ^ s in unions}
