"""
Finite concrete partial algebras: propositions as subsets of a cell space,
effect structures carrying a partial ⊕ and the order relation derived from it.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, Sequence, Union

from .bitsets import MaskTable, full_mask, iter_bits
from .errors import DomainError, StructuralError
from .exact_cover import DecompositionOracle

if TYPE_CHECKING:
    from .box_model import BoxSpec, ProductAtom

# the largest cell space a proposition may live in
MAX_CELLS = 1 << 16

# materializing all comparable pairs is only done below this element count
PAIRS_LIMIT = 2000


@dataclass(frozen=True)
class CellSpace:
    """
    A finite set of cells `0 .. size-1`. Subclasses attach the meaning of the
    cells (phase space points of a box, tuples of such points, ...).
    """

    size: int
    space_id: str

    def __post_init__(self) -> None:
        if not 0 < self.size <= MAX_CELLS:
            raise StructuralError(
                f"cell space {self.space_id} has {self.size} cells "
                f"(supported: 1..{MAX_CELLS})")

    @property
    def full(self) -> int:
        # pylint: disable=missing-function-docstring
        return full_mask(self.size)


@dataclass(frozen=True)
class Proposition:
    """
    A subset of the cells of a space. Equality compares the mask and the
    owning space.
    """

    mask: int
    space_id: str

    def __str__(self) -> str:
        return f"{self.space_id}:{self.mask:x}"


class StructureKind(Enum):
    """
    How a structure was obtained.
    """

    ONE_BOX = "one-box"
    EFFECT = "effect"
    OMP = "omp"
    CONCRETE = "concrete"


PropositionLike = Union[Proposition, int]


class EffectStructure:
    """
    An enumerated concrete structure: a family of subsets of a cell space with
    `p ⊕ q = p ∪ q` defined iff `p ∩ q = ∅` and `p ∪ q` is a member, and the
    complement given by set complement.

    Elements are kept in canonical order (ascending mask value); element
    indices refer to this order. Instances are immutable after construction.
    """

    # pylint: disable=too-many-instance-attributes

    def __init__(self,
                 space: CellSpace,
                 masks: Iterable[int],
                 *,
                 kind: StructureKind,
                 atoms: Optional[Iterable[int]] = None,
                 boxes: Sequence["BoxSpec"] = (),
                 factors: Sequence["EffectStructure"] = (),
                 box_atoms: Sequence["ProductAtom"] = (),
                 certificates: Optional[Mapping[int, Sequence[tuple[int, ...]]]] = None
                 ) -> None:
        # pylint: disable=too-many-arguments
        """
        Args:
            space (CellSpace) : The cell space all elements live in.
            masks (Iterable[int]) : The element masks (duplicates are merged).
            kind (StructureKind) : How the structure was obtained.
            atoms (Iterable[int], optional) : Atom masks; computed from the
                                              order relation if omitted.
            boxes (Sequence[BoxSpec]) : The 1-box specs of all leaf boxes.
            factors (Sequence[EffectStructure]) : The 1-box logics of all
                                                  leaf boxes.
            box_atoms (Sequence[ProductAtom]) : The generating product atoms.
            certificates (Mapping, optional) : For orthoposets, atom covers of
                                               the complements of new atoms
                                               (keyed by atom mask).
        """
        self.space = space
        self.kind = kind
        self.elements: tuple[int, ...] = tuple(sorted(set(masks)))
        self.index: dict[int, int] = {m: i for i, m in enumerate(self.elements)}
        full = space.full
        for m in self.elements:
            if m < 0 or m & full != m:
                raise StructuralError(
                    f"mask {m:x} is not a subset of {space.space_id}")
        self.table = MaskTable(self.elements, space.size)
        self.boxes = tuple(boxes)
        self.factors = tuple(factors)
        self.box_atoms = tuple(box_atoms)
        self.certificates = dict(certificates or {})
        self._order: Optional[OrderRelation] = None
        self._oracle: Optional[DecompositionOracle] = None
        if atoms is None:
            self.atoms: tuple[int, ...] = tuple(
                self.elements[i] for i in self.order.minimal_nonzero())
        else:
            self.atoms = tuple(sorted(set(atoms)))
        self.atom_index: dict[int, int] = {m: i for i, m in enumerate(self.atoms)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Proposition):
            return item.space_id == self.space.space_id and item.mask in self.index
        return isinstance(item, int) and item in self.index

    def __repr__(self) -> str:
        return (f"EffectStructure({self.kind.value}, space={self.space.space_id}, "
                f"elements={len(self)}, atoms={len(self.atoms)})")

    @property
    def zero(self) -> int:
        # pylint: disable=missing-function-docstring
        return 0

    @property
    def one(self) -> int:
        # pylint: disable=missing-function-docstring
        return self.space.full

    @property
    def order(self) -> "OrderRelation":
        """
        The order relation derived from ⊕ (computed lazily).
        """
        if self._order is None:
            self._order = OrderRelation(self)
        return self._order

    @property
    def oracle(self) -> DecompositionOracle:
        """
        The exact-cover oracle over the atoms of this structure (shared).
        """
        if self._oracle is None:
            self._oracle = DecompositionOracle(self.atoms, self.space.size)
        return self._oracle

    def mask_of(self, p: PropositionLike) -> int:
        """
        Resolves a proposition to its mask and verifies membership.

        Raises:
            DomainError : If `p` is not an element of this structure.
        """
        if isinstance(p, Proposition):
            if p.space_id != self.space.space_id:
                raise DomainError(
                    f"proposition {p} lives in {p.space_id}, not {self.space.space_id}")
            mask = p.mask
        else:
            mask = p
        if mask not in self.index:
            raise DomainError(f"mask {mask:x} is not an element of {self!r}")
        return mask

    def index_of(self, p: PropositionLike) -> int:
        # pylint: disable=missing-function-docstring
        return self.index[self.mask_of(p)]

    def proposition(self, i: int) -> Proposition:
        """
        Returns the element with index `i` as a proposition.
        """
        return Proposition(self.elements[i], self.space.space_id)

    def complement(self, p: int) -> int:
        # pylint: disable=missing-function-docstring
        return self.space.full ^ p

    def oplus(self, p: int, q: int) -> Optional[int]:
        """
        The partial sum of two element masks, or None if undefined.
        """
        if p & q:
            return None
        u = p | q
        return u if u in self.index else None

    def oplus_defined(self, p: int, q: int) -> bool:
        # pylint: disable=missing-function-docstring
        return self.oplus(p, q) is not None

    def sum(self, family: Iterable[int]) -> Optional[int]:
        """
        Folds ⊕ over a family of element masks.

        Returns:
            (Optional[int]) The ⊕-sum or None if some partial sum is undefined.
        """
        acc: Optional[int] = 0
        for m in family:
            if m not in self.index:
                return None
            acc = self.oplus(acc, m) if acc is not None else None
            if acc is None:
                return None
        return acc

    def sum_defined(self, family: Iterable[int]) -> bool:
        # pylint: disable=missing-function-docstring
        return self.sum(family) is not None

    def box_atom_lookup(self) -> dict[tuple[tuple[int, int], ...], int]:
        """
        Maps the per-box (input, outcome) tuple of every generating product atom
        to the index of its mask in `self.atoms`.
        """
        return {a.per_box: self.atom_index[a.mask] for a in self.box_atoms}


class OrderRelation:
    """
    The relation `p ≤ q` iff `q = p ⊕ r` for some element `r`. In a concrete
    structure `r` can only be `q \\ p`, so the relation is evaluated as
    `p ⊆ q` and `p ⊕ (q \\ p)` defined.

    Up- and down-sets are cached as integer bitsets over element indices.
    """

    def __init__(self, structure: EffectStructure) -> None:
        self.structure = structure
        self._up: dict[int, int] = {}
        self._down: dict[int, int] = {}

    def leq(self, p: int, q: int) -> bool:
        # pylint: disable=missing-function-docstring
        return p & q == p and self.structure.oplus(p, q ^ p) == q

    def up_bits(self, i: int) -> int:
        """
        Returns the bitset of element indices `j` with `e_i ≤ e_j`.
        """
        bits = self._up.get(i)
        if bits is None:
            s = self.structure
            p = s.elements[i]
            bits = 0
            for j in s.table.supersets_of(p):
                if self.leq(p, s.elements[j]):
                    bits |= 1 << j
            self._up[i] = bits
        return bits

    def down_bits(self, i: int) -> int:
        """
        Returns the bitset of element indices `j` with `e_j ≤ e_i`.
        """
        bits = self._down.get(i)
        if bits is None:
            s = self.structure
            q = s.elements[i]
            bits = 0
            for j in s.table.subsets_of(q):
                if self.leq(s.elements[j], q):
                    bits |= 1 << j
            self._down[i] = bits
        return bits

    def up_set(self, i: int) -> list[int]:
        # pylint: disable=missing-function-docstring
        return list(iter_bits(self.up_bits(i)))

    def down_set(self, i: int) -> list[int]:
        # pylint: disable=missing-function-docstring
        return list(iter_bits(self.down_bits(i)))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """
        All index pairs `(i, j)` with `e_i ≤ e_j`. Only available for small
        structures.
        """
        n = len(self.structure)
        if n > PAIRS_LIMIT:
            raise DomainError(
                f"refusing to materialize the order of {n} elements (limit {PAIRS_LIMIT})")
        return [(i, j) for i in range(n) for j in iter_bits(self.up_bits(i))]

    def _least(self, candidates: int) -> Optional[int]:
        elements = self.structure.elements
        best = min(iter_bits(candidates),
                   key=lambda u: (elements[u].bit_count(), u))
        return best if self.up_bits(best) & candidates == candidates else None

    def _greatest(self, candidates: int) -> Optional[int]:
        elements = self.structure.elements
        best = max(iter_bits(candidates),
                   key=lambda u: (elements[u].bit_count(), -u))
        return best if self.down_bits(best) & candidates == candidates else None

    def join(self, *indices: int) -> Optional[int]:
        """
        Returns the index of the least upper bound of the given elements, or
        None if it does not exist.
        """
        bounds = -1
        for i in indices:
            bounds &= self.up_bits(i)
        if bounds <= 0:
            return None
        return self._least(bounds)

    def meet(self, *indices: int) -> Optional[int]:
        """
        Returns the index of the greatest lower bound of the given elements, or
        None if it does not exist.
        """
        bounds = -1
        for i in indices:
            bounds &= self.down_bits(i)
        if bounds <= 0:
            return None
        return self._greatest(bounds)

    def minimal_nonzero(self) -> list[int]:
        """
        Returns the indices of the minimal nonzero elements (the atoms).
        """
        s = self.structure
        atoms = []
        for i, p in enumerate(s.elements):
            if p and self.down_bits(i) & ~(1 << i) == (1 << s.index[0] if 0 in s.index else 0):
                atoms.append(i)
        return atoms


@dataclass(frozen=True)
class CompatibilityWitness:
    """
    Elements `p1, q1, r` with `p1 ⊕ q1 ⊕ r` defined, `p = p1 ⊕ r` and
    `q = q1 ⊕ r`.
    """

    p1: Proposition
    q1: Proposition
    r: Proposition


def even_subsets_logic(n: int) -> EffectStructure:
    """
    Builds the concrete orthoposet of all even-cardinality subsets of a set
    with `2n` points.

    Args:
        n (int) : Half of the size of the underlying set.

    Returns:
        (EffectStructure) The concrete logic.
    """
    if n < 1:
        raise ValueError("n must be positive")
    size = 2 * n
    space = CellSpace(size, f"omega{size}")
    masks = [m for m in range(1 << size) if m.bit_count() % 2 == 0]
    return EffectStructure(space, masks, kind=StructureKind.CONCRETE)


def pairwise_disjoint(masks: Sequence[int]) -> bool:
    # pylint: disable=missing-function-docstring
    return all(not a & b for a, b in combinations(masks, 2))
