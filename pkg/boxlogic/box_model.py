"""
The 1-box model: a box with finitely many inputs, each with a finite set of
outcomes. Its phase space is the set of deterministic input → outcome
assignments and its propositions `[a∈A]` are cylinder sets over that space.
"""

import json
import logging as log
from dataclasses import dataclass
from itertools import product
from math import prod
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .algebra import CellSpace, EffectStructure, Proposition, StructureKind
from .errors import DomainError, MissingInputError, StructuralError


@dataclass(frozen=True)
class BoxInput:
    """
    One input of a box together with its outcome labels.
    """

    name: str
    outcomes: tuple[str, ...]


@dataclass(frozen=True)
class BoxSpec:
    """
    Inputs and per-input outcome labels of a single box. Labels are opaque;
    all computations use the dense indices `0 .. N-1` for inputs and
    `0 .. |U_a|-1` for outcomes.
    """

    inputs: tuple[BoxInput, ...]

    def __post_init__(self) -> None:
        if not self.inputs:
            raise StructuralError("a box needs at least one input")
        names = [i.name for i in self.inputs]
        if len(set(names)) != len(names):
            raise StructuralError(f"input names are not distinct: {names}")
        for i in self.inputs:
            if not i.outcomes:
                raise StructuralError(f"input {i.name} has no outcomes")
            if len(set(i.outcomes)) != len(i.outcomes):
                raise StructuralError(f"outcome labels of input {i.name} are not distinct")
            if len(i.outcomes) == 1 and len(self.inputs) > 1:
                raise StructuralError(
                    f"input {i.name} has a single outcome; this is only supported "
                    "for boxes with one input")

    @property
    def num_inputs(self) -> int:
        # pylint: disable=missing-function-docstring
        return len(self.inputs)

    @property
    def outcome_counts(self) -> tuple[int, ...]:
        # pylint: disable=missing-function-docstring
        return tuple(len(i.outcomes) for i in self.inputs)

    @property
    def atom_count(self) -> int:
        """
        The number of propositions `[aα]`, i.e. the sum of all outcome counts.
        """
        return sum(self.outcome_counts)

    def atom_pairs(self) -> list[tuple[int, int]]:
        """
        All (input, outcome) index pairs in canonical order.
        """
        return [(a, alpha) for a, n in enumerate(self.outcome_counts) for alpha in range(n)]

    def label(self, a: int, alpha: int) -> str:
        # pylint: disable=missing-function-docstring
        i = self.inputs[a]
        return f"{i.name}{i.outcomes[alpha]}"

    def to_json(self) -> dict[str, Any]:
        # pylint: disable=missing-function-docstring
        return {"inputs": [{"name": i.name, "outcomes": list(i.outcomes)} for i in self.inputs]}

    @staticmethod
    def from_json(document: Any) -> "BoxSpec":
        """
        Parses a box spec from a JSON document of the form
        `{"inputs": [{"name": ..., "outcomes": [...]}, ...]}`.
        """
        try:
            inputs = tuple(BoxInput(str(i["name"]), tuple(str(o) for o in i["outcomes"]))
                           for i in document["inputs"])
        except (KeyError, TypeError) as e:
            raise StructuralError(f"malformed box spec: {e}") from e
        return BoxSpec(inputs)


def binary_spec() -> BoxSpec:
    """
    The binary box: inputs `x` and `y`, outcomes `0` and `1` each.
    """
    return BoxSpec((BoxInput("x", ("0", "1")), BoxInput("y", ("0", "1"))))


def load_box_spec(path: Path) -> BoxSpec:
    """
    Loads a box spec from a JSON file.

    Raises:
        MissingInputError : If the file does not exist.
        StructuralError : If the document does not describe a valid box.
    """
    if not path.is_file():
        raise MissingInputError(f"box spec {path} does not exist")
    with open(path, 'r', encoding='UTF-8') as f:
        document = json.load(f)
    spec = BoxSpec.from_json(document)
    log.debug('Loaded box spec from %s with outcome counts %s', path, spec.outcome_counts)
    return spec


class PhaseSpace(CellSpace):
    """
    The phase space `Γ = U_1 × ⋯ × U_N` of a box. Cells are indexed
    lexicographically with input 1 slowest.
    """

    def __init__(self, spec: BoxSpec, space_id: Optional[str] = None) -> None:
        counts = spec.outcome_counts
        super().__init__(prod(counts), space_id or "gamma(" + ",".join(map(str, counts)) + ")")
        object.__setattr__(self, "spec", spec)
        strides = []
        stride = 1
        for n in reversed(counts):
            strides.append(stride)
            stride *= n
        object.__setattr__(self, "strides", tuple(reversed(strides)))

    spec: BoxSpec
    strides: tuple[int, ...]

    def cells(self) -> list[tuple[int, ...]]:
        """
        Enumerates the cells in index order.
        """
        return list(product(*(range(n) for n in self.spec.outcome_counts)))

    def index(self, cell: Sequence[int]) -> int:
        # pylint: disable=missing-function-docstring
        return sum(g * s for g, s in zip(cell, self.strides))

    def cylinder(self, a: int, outcomes: Iterable[int]) -> int:
        """
        The mask of `[a∈A]`, i.e. all cells whose `a`-th coordinate is in `A`.
        """
        wanted = set(outcomes)
        mask = 0
        for i, cell in enumerate(self.cells()):
            if cell[a] in wanted:
                mask |= 1 << i
        return mask


@dataclass(frozen=True)
class BoxProposition:
    """
    The proposition `[a∈A]`: "input `a` yields an outcome from `A`".
    """

    input: int
    outcome_set: frozenset[int]
    realization: Proposition

    @staticmethod
    def of(space: PhaseSpace, a: int, outcomes: Iterable[int]) -> "BoxProposition":
        """
        Builds `[a∈A]` over the given phase space.
        """
        if not 0 <= a < space.spec.num_inputs:
            raise DomainError(f"input {a} does not exist")
        outcome_set = frozenset(outcomes)
        if not outcome_set <= set(range(space.spec.outcome_counts[a])):
            raise DomainError(f"outcomes {sorted(outcome_set)} are not outcomes of input {a}")
        return BoxProposition(a, outcome_set,
                              Proposition(space.cylinder(a, outcome_set), space.space_id))


@dataclass(frozen=True)
class ProductAtom:
    """
    A product atom `[a_1α_1] × ⋯ × [a_kα_k]`; for `k = 1` an atom `[aα]` of a
    single box.
    """

    per_box: tuple[tuple[int, int], ...]
    mask: int

    @property
    def inputs(self) -> tuple[int, ...]:
        # pylint: disable=missing-function-docstring
        return tuple(a for a, _ in self.per_box)

    @property
    def outcomes(self) -> tuple[int, ...]:
        # pylint: disable=missing-function-docstring
        return tuple(alpha for _, alpha in self.per_box)

    def label(self, boxes: Sequence[BoxSpec]) -> str:
        """
        The event label, e.g. `x0y1x0`.
        """
        return "".join(b.label(a, alpha) for b, (a, alpha) in zip(boxes, self.per_box))


def proposition_order(p: BoxProposition, q: BoxProposition, spec: BoxSpec) -> bool:
    """
    Decides `[a∈A] ≤ [b∈B]`: true iff `B = U_b`, or `A = ∅`, or `a = b` and
    `A ⊆ B`.
    """
    if len(q.outcome_set) == spec.outcome_counts[q.input] or not p.outcome_set:
        return True
    return p.input == q.input and p.outcome_set <= q.outcome_set


def build_one_box_logic(spec: BoxSpec) -> EffectStructure:
    """
    Builds the concrete logic of all propositions `[a∈A]` of one box.

    Args:
        spec (BoxSpec) : The box.

    Returns:
        (EffectStructure) The 1-box logic with the atoms `[aα]`.
    """
    space = PhaseSpace(spec)
    masks = {0, space.full}
    for a, n in enumerate(spec.outcome_counts):
        for r in range(1 << n):
            masks.add(space.cylinder(a, (alpha for alpha in range(n) if r >> alpha & 1)))
    atoms = [ProductAtom(((a, alpha),), space.cylinder(a, (alpha,)))
             for a, alpha in spec.atom_pairs()]
    logic = EffectStructure(space, masks, kind=StructureKind.ONE_BOX,
                            atoms=[a.mask for a in atoms], boxes=(spec,), box_atoms=atoms)
    log.debug('1-box logic for outcome counts %s has %d elements',
              spec.outcome_counts, len(logic))
    return logic
